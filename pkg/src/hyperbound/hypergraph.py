"""Ownership hypergraph: users are vertices, records are hyperedges.

The graph is stored in compressed form so that million-edge instances fit
comfortably in memory:

* edges keep their input order; ``edge_ptr``/``edge_owners`` give each edge's
  owners as indices into ``vertex_ids`` (ascending within an edge);
* vertices are the sorted unique user ids; ``inc_ptr``/``inc_edges`` give each
  vertex's incident edges as edge positions (ascending).

Ids are unsigned 64-bit integers and are kept in ``uint64`` arrays. Public
accessors take and return plain Python ints.
"""

from __future__ import annotations

import hashlib
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Mapping, Sequence

import numpy as np

from .errors import DuplicateEdgeId, EmptyOwnerList, UnknownEdge, UnknownVertex

U64_MAX = (1 << 64) - 1


@dataclass(frozen=True)
class Hyperedge:
    id: int
    owners: frozenset[int]
    weight: float | None = None


@dataclass(frozen=True)
class CapacityMap:
    """Per-user contribution budget: ``overrides[u]`` if present, else ``default``."""

    default: int = 1
    overrides: Mapping[int, int] = field(default_factory=dict)

    def __post_init__(self):
        if self.default < 0:
            raise ValueError(f"default capacity must be >= 0, got {self.default}")
        for u, b in self.overrides.items():
            if b < 0:
                raise ValueError(f"capacity of vertex {u} must be >= 0, got {b}")

    def lookup(self, u: int) -> int:
        return self.overrides.get(u, self.default)

    __call__ = lookup

    def as_array(self, g: Hypergraph) -> np.ndarray:
        """Capacities aligned with ``g.vertex_ids`` as an int64 array."""
        caps = np.full(g.num_vertices, self.default, dtype=np.int64)
        if self.overrides:
            ids = np.fromiter(self.overrides.keys(), dtype=np.uint64, count=len(self.overrides))
            vals = np.fromiter(self.overrides.values(), dtype=np.int64, count=len(self.overrides))
            pos, found = g._lookup_vertices(ids)
            caps[pos[found]] = vals[found]
        return caps

    def max_capacity(self) -> int:
        return max([self.default, *self.overrides.values()])


def _segment_positions(keys: np.ndarray) -> np.ndarray:
    """Offset of each element inside its run of equal consecutive keys."""
    n = keys.shape[0]
    if n == 0:
        return np.zeros(0, dtype=np.int64)
    idx = np.arange(n, dtype=np.int64)
    starts = np.empty(n, dtype=bool)
    starts[0] = True
    np.not_equal(keys[1:], keys[:-1], out=starts[1:])
    return idx - np.maximum.accumulate(np.where(starts, idx, 0))


def gather_segments(ptr: np.ndarray, flat: np.ndarray, rows: np.ndarray) -> np.ndarray:
    """Concatenate ``flat[ptr[r]:ptr[r+1]]`` for every ``r`` in ``rows``."""
    rows = np.asarray(rows, dtype=np.int64)
    lengths = ptr[rows + 1] - ptr[rows]
    total = int(lengths.sum())
    if total == 0:
        return flat[:0]
    row_of = np.repeat(np.arange(rows.shape[0]), lengths)
    offsets = np.arange(total, dtype=np.int64) - np.repeat(np.cumsum(lengths) - lengths, lengths)
    return flat[ptr[rows][row_of] + offsets]


class Hypergraph:
    """Immutable hypergraph ``G = (V, H)``; build with :func:`build` or :meth:`from_arrays`."""

    def __init__(self, edge_ids, edge_ptr, edge_owners, weights, vertex_ids):
        self.edge_ids: np.ndarray = edge_ids
        self.edge_ptr: np.ndarray = edge_ptr
        self.edge_owners: np.ndarray = edge_owners
        self.weights: np.ndarray = weights
        self.vertex_ids: np.ndarray = vertex_ids
        self.edge_size: np.ndarray = np.diff(edge_ptr)

        owner_row = np.repeat(np.arange(edge_ids.shape[0], dtype=np.int64), self.edge_size)
        # stable sort keeps each vertex's edges in ascending position
        self.inc_edges: np.ndarray = owner_row[np.argsort(edge_owners, kind="stable")]
        counts = np.bincount(edge_owners, minlength=vertex_ids.shape[0])
        self.inc_ptr: np.ndarray = np.zeros(vertex_ids.shape[0] + 1, dtype=np.int64)
        np.cumsum(counts, out=self.inc_ptr[1:])

        for arr in (self.edge_ids, self.edge_ptr, self.edge_owners, self.weights,
                    self.vertex_ids, self.edge_size, self.inc_edges, self.inc_ptr):
            arr.flags.writeable = False

    # -- construction -----------------------------------------------------

    @classmethod
    def from_arrays(cls, edge_ids, edge_ptr, owner_ids, weights=None, extra_vertices=()):
        """Build from flat arrays, canonicalizing owner lists to sets.

        Args:
            edge_ids: uint64 ids, one per edge, pairwise distinct.
            edge_ptr: int64 offsets of length ``len(edge_ids) + 1`` into ``owner_ids``.
            owner_ids: uint64 owner ids, concatenated per edge (duplicates allowed).
            weights: float64 per edge, NaN for "no weight"; None means no weights.
            extra_vertices: ids to include in V even if they own no edge.
        """
        edge_ids = np.ascontiguousarray(edge_ids, dtype=np.uint64)
        edge_ptr = np.ascontiguousarray(edge_ptr, dtype=np.int64)
        owner_ids = np.ascontiguousarray(owner_ids, dtype=np.uint64)
        m = edge_ids.shape[0]
        if weights is None:
            weights = np.full(m, np.nan)
        weights = np.ascontiguousarray(weights, dtype=np.float64)
        if ((weights < 0) | np.isinf(weights)).any():
            raise ValueError("edge weights must be finite and non-negative")

        sizes = np.diff(edge_ptr)
        if m and (sizes == 0).any():
            bad = int(edge_ids[np.flatnonzero(sizes == 0)[0]])
            raise EmptyOwnerList(f"edge {bad} has no owners")
        if m:
            sorted_ids = np.sort(edge_ids)
            dup = np.flatnonzero(sorted_ids[1:] == sorted_ids[:-1])
            if dup.size:
                raise DuplicateEdgeId(f"edge id {int(sorted_ids[dup[0]])} appears more than once")

        # sort owners within each edge, then drop repeats
        row = np.repeat(np.arange(m, dtype=np.int64), sizes)
        order = np.lexsort((owner_ids, row))
        row, owner_ids = row[order], owner_ids[order]
        keep = np.ones(owner_ids.shape[0], dtype=bool)
        if keep.size:
            keep[1:] = (row[1:] != row[:-1]) | (owner_ids[1:] != owner_ids[:-1])
        row, owner_ids = row[keep], owner_ids[keep]
        new_ptr = np.zeros(m + 1, dtype=np.int64)
        np.cumsum(np.bincount(row, minlength=m), out=new_ptr[1:])

        extra = np.asarray(list(extra_vertices), dtype=np.uint64)
        vertex_ids = np.unique(np.concatenate([owner_ids, extra]))
        owners_idx = np.searchsorted(vertex_ids, owner_ids).astype(np.int64)
        return cls(edge_ids, new_ptr, owners_idx, weights, vertex_ids)

    # -- sizes and lookup -------------------------------------------------

    @property
    def num_edges(self) -> int:
        return int(self.edge_ids.shape[0])

    @property
    def num_vertices(self) -> int:
        return int(self.vertex_ids.shape[0])

    @property
    def num_incidences(self) -> int:
        return int(self.edge_owners.shape[0])

    def __len__(self) -> int:
        return self.num_edges

    @cached_property
    def _edge_sort(self) -> np.ndarray:
        return np.argsort(self.edge_ids, kind="stable")

    def _lookup_vertices(self, ids: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
        pos = np.searchsorted(self.vertex_ids, ids)
        pos = np.minimum(pos, max(self.num_vertices - 1, 0))
        found = (self.vertex_ids[pos] == ids) if self.num_vertices else np.zeros(len(ids), bool)
        return pos, found

    def edge_positions(self, ids) -> np.ndarray:
        """Positions of edge ids; raises UnknownEdge on a miss."""
        ids = np.asarray(ids, dtype=np.uint64).reshape(-1)
        if self.num_edges == 0:
            if ids.size:
                raise UnknownEdge(f"unknown edge {int(ids[0])}")
            return np.zeros(0, dtype=np.int64)
        srt = self._edge_sort
        k = np.minimum(np.searchsorted(self.edge_ids[srt], ids), self.num_edges - 1)
        pos = srt[k]
        miss = self.edge_ids[pos] != ids
        if miss.any():
            raise UnknownEdge(f"unknown edge {int(ids[np.flatnonzero(miss)[0]])}")
        return pos.astype(np.int64)

    def vertex_index(self, u: int) -> int:
        pos, found = self._lookup_vertices(np.array([u], dtype=np.uint64))
        if not found[0]:
            raise UnknownVertex(f"unknown vertex {u}")
        return int(pos[0])

    def has_vertex(self, u: int) -> bool:
        if not 0 <= u <= U64_MAX:
            return False
        return bool(self._lookup_vertices(np.array([u], dtype=np.uint64))[1][0])

    # -- public views -----------------------------------------------------

    @property
    def vertices(self) -> list[int]:
        return self.vertex_ids.tolist()

    def _edge_at(self, pos: int) -> Hyperedge:
        lo, hi = self.edge_ptr[pos], self.edge_ptr[pos + 1]
        owners = frozenset(self.vertex_ids[self.edge_owners[lo:hi]].tolist())
        w = float(self.weights[pos])
        return Hyperedge(int(self.edge_ids[pos]), owners, None if np.isnan(w) else w)

    def edge(self, eid: int) -> Hyperedge:
        return self._edge_at(int(self.edge_positions([eid])[0]))

    def edges(self) -> Iterator[Hyperedge]:
        for pos in range(self.num_edges):
            yield self._edge_at(pos)

    __iter__ = edges

    def owners(self, eid: int) -> frozenset[int]:
        return self.edge(eid).owners

    def incidence(self, u: int) -> list[int]:
        """Ids of edges owned by ``u``, in edge input order."""
        v = self.vertex_index(u)
        return self.edge_ids[self.inc_edges[self.inc_ptr[v]:self.inc_ptr[v + 1]]].tolist()

    def degree(self, u: int) -> int:
        v = self.vertex_index(u)
        return int(self.inc_ptr[v + 1] - self.inc_ptr[v])

    def degrees(self) -> np.ndarray:
        return np.diff(self.inc_ptr)

    @property
    def has_weights(self) -> bool:
        return not np.isnan(self.weights).all() if self.num_edges else False

    def edge_list(self) -> list[tuple[int, list[int], float | None]]:
        """Canonical ``(id, sorted owners, weight)`` triples in edge order."""
        return [(h.id, sorted(h.owners), h.weight) for h in self.edges()]

    @cached_property
    def fingerprint(self) -> str:
        """Digest of the edge universe (ids and owner sets), used to match instances."""
        digest = hashlib.sha256()
        srt = self._edge_sort
        digest.update(self.edge_ids[srt].tobytes())
        owners = gather_segments(self.edge_ptr, self.vertex_ids[self.edge_owners], srt)
        digest.update(self.edge_size[srt].tobytes())
        digest.update(owners.tobytes())
        return digest.hexdigest()[:16]

    def __eq__(self, other):
        if not isinstance(other, Hypergraph):
            return NotImplemented
        return (
            np.array_equal(self.edge_ids, other.edge_ids)
            and np.array_equal(self.edge_ptr, other.edge_ptr)
            and np.array_equal(self.vertex_ids, other.vertex_ids)
            and np.array_equal(self.edge_owners, other.edge_owners)
            and np.array_equal(self.weights, other.weights, equal_nan=True)
        )

    __hash__ = None

    def __repr__(self):
        return f"Hypergraph(|V|={self.num_vertices}, |H|={self.num_edges})"


EdgeSpec = Sequence  # (edge_id, owners) or (edge_id, owners, weight)


def build(edges: Iterable[EdgeSpec], capacities: CapacityMap | None = None) -> Hypergraph:
    """Build a hypergraph from ``(id, owners[, weight])`` tuples.

    Duplicate owners collapse to a set. Vertices named only in the capacity
    overrides join ``V`` with degree zero.

    Raises:
        DuplicateEdgeId: two edges share an id.
        EmptyOwnerList: an edge has no owners.
    """
    ids, ptr, owners, weights = [], [0], [], []
    for spec in edges:
        eid, own = spec[0], list(spec[1])
        w = spec[2] if len(spec) > 2 else None
        if not own:
            raise EmptyOwnerList(f"edge {eid} has no owners")
        ids.append(eid)
        owners.extend(own)
        ptr.append(len(owners))
        weights.append(np.nan if w is None else float(w))
    extra = capacities.overrides.keys() if capacities is not None else ()
    return Hypergraph.from_arrays(
        np.array(ids, dtype=np.uint64),
        np.array(ptr, dtype=np.int64),
        np.array(owners, dtype=np.uint64),
        np.array(weights, dtype=np.float64),
        extra_vertices=extra,
    )


def degree(g: Hypergraph, u: int) -> int:
    """Number of edges owned by ``u``. Raises UnknownVertex if ``u`` is not in V."""
    return g.degree(u)


@dataclass(frozen=True)
class Diagnostic:
    level: str  # "warning" | "info" | "error"
    message: str

    def __str__(self):
        return f"{self.level}: {self.message}"


def validate(g: Hypergraph, caps: CapacityMap) -> list[Diagnostic]:
    """Report suspicious but legal configurations; an empty list means clean."""
    out: list[Diagnostic] = []

    # incidence cross-scan: every (edge, owner) pair appears in both indexes
    from_edges = set(zip(np.repeat(np.arange(g.num_edges), g.edge_size).tolist(), g.edge_owners.tolist()))
    from_inc = set(zip(g.inc_edges.tolist(), np.repeat(np.arange(g.num_vertices), g.degrees()).tolist()))
    for e, v in sorted(from_edges ^ from_inc):
        out.append(Diagnostic(
            "error", f"incidence mismatch for edge {int(g.edge_ids[e])} and vertex {int(g.vertex_ids[v])}"
        ))

    cap_arr = caps.as_array(g)
    for v in np.flatnonzero(cap_arr == 0).tolist():
        u = int(g.vertex_ids[v])
        for e in g.inc_edges[g.inc_ptr[v]:g.inc_ptr[v + 1]].tolist():
            out.append(Diagnostic("warning", f"edge {int(g.edge_ids[e])} unmatchable via {u}"))

    deg = g.degrees()
    for u in sorted(caps.overrides):
        if not g.has_vertex(u):
            out.append(Diagnostic("info", f"capacity override for unknown vertex {u}"))
        elif deg[g.vertex_index(u)] == 0:
            out.append(Diagnostic("info", f"capacity override for vertex {u} which owns no edges"))
    return out
