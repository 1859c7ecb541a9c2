"""Preference orders over hyperedges.

Lower rank key means more preferred. The two built-in orders are universal:
every user ranks edges the same way, so the key depends only on the edge.

The seeded hash is a SplitMix64-style finalizer applied to
``seed ^ (edge_id * 0x9E3779B97F4A7C15)``; its constants are part of the
output format and must not change.
"""

from __future__ import annotations

import struct
from dataclasses import dataclass
from typing import Any, Callable, NamedTuple, Union

import numpy as np

from .errors import MissingWeight
from .hypergraph import Hyperedge, Hypergraph

MASK64 = (1 << 64) - 1
GOLDEN_GAMMA = 0x9E3779B97F4A7C15
MIX_MUL_1 = 0xBF58476D1CE4E5B9
MIX_MUL_2 = 0x94D049BB133111EB


def mix64(seed: int, x: int) -> int:
    """Seeded 64-bit mix of ``x``; bit-exact across platforms."""
    z = (seed ^ (x * GOLDEN_GAMMA)) & MASK64
    z = ((z ^ (z >> 30)) * MIX_MUL_1) & MASK64
    z = ((z ^ (z >> 27)) * MIX_MUL_2) & MASK64
    return z ^ (z >> 31)


def mix64_array(seed: int, xs: np.ndarray) -> np.ndarray:
    """Vectorized :func:`mix64`; uint64 arithmetic wraps modulo 2**64."""
    z = np.asarray(xs, dtype=np.uint64) * np.uint64(GOLDEN_GAMMA)
    z ^= np.uint64(seed & MASK64)
    z = (z ^ (z >> np.uint64(30))) * np.uint64(MIX_MUL_1)
    z = (z ^ (z >> np.uint64(27))) * np.uint64(MIX_MUL_2)
    return z ^ (z >> np.uint64(31))


@dataclass(frozen=True)
class UniversalRandom:
    seed: int = 0
    kind = "hash"


@dataclass(frozen=True)
class WeightDescending:
    """Heavier edges first; ties by the seeded hash, then by edge id."""

    seed: int = 0
    kind = "weight"


@dataclass(frozen=True)
class PerUserOrdering:
    """Arbitrary per-user order: ``key(user, edge)`` returns a sort key, lower preferred.

    Keys must be distinct for distinct edges of a user; edge id is appended as
    a final tie-break so the order is strict regardless.
    """

    key: Callable[[int, Hyperedge], Any]
    kind = "per-user"


OrderingSpec = Union[UniversalRandom, WeightDescending, PerUserOrdering]


class RankKey(NamedTuple):
    primary: int
    secondary: int
    edge_id: int


def _weight_key(w: float) -> int:
    # non-negative float bit patterns sort like the floats; invert for descending
    bits = struct.unpack("<Q", struct.pack("<d", w + 0.0))[0]
    return MASK64 - bits


def rank(spec: OrderingSpec, h: Hyperedge) -> RankKey:
    """Rank key of ``h`` under a universal ordering.

    Raises:
        MissingWeight: weight ordering requested for an unweighted edge.
    """
    hashed = mix64(spec.seed, h.id)
    if isinstance(spec, UniversalRandom):
        return RankKey(hashed, 0, h.id)
    if isinstance(spec, WeightDescending):
        if h.weight is None:
            raise MissingWeight(f"edge {h.id} has no weight")
        return RankKey(_weight_key(h.weight), hashed, h.id)
    raise TypeError(f"rank() needs a universal ordering, got {type(spec).__name__}")


def compare(spec: OrderingSpec, a: Hyperedge, b: Hyperedge, user: int | None = None) -> int:
    """-1 if ``a`` is preferred to ``b``, +1 otherwise. Usable with ``functools.cmp_to_key``."""
    if a.id == b.id:
        raise ValueError("compare() requires distinct edges")
    if isinstance(spec, PerUserOrdering):
        ka, kb = (spec.key(user, a), a.id), (spec.key(user, b), b.id)
    else:
        ka, kb = rank(spec, a), rank(spec, b)
    return -1 if ka < kb else 1


def universal_rank(spec: OrderingSpec, g: Hypergraph) -> np.ndarray:
    """Preference position of every edge (0 = top), aligned with ``g.edge_ids``."""
    ids = g.edge_ids
    hashed = mix64_array(spec.seed, ids)
    if isinstance(spec, UniversalRandom):
        order = np.lexsort((ids, hashed))
    elif isinstance(spec, WeightDescending):
        w = g.weights
        if np.isnan(w).any():
            missing = int(ids[np.flatnonzero(np.isnan(w))[0]])
            raise MissingWeight(f"edge {missing} has no weight")
        wkey = np.uint64(MASK64) - (w + 0.0).view(np.uint64)
        order = np.lexsort((ids, hashed, wkey))
    else:
        raise TypeError(f"universal_rank() needs a universal ordering, got {type(spec).__name__}")
    pos = np.empty(g.num_edges, dtype=np.int64)
    pos[order] = np.arange(g.num_edges, dtype=np.int64)
    return pos


def incidence_by_preference(spec: OrderingSpec, g: Hypergraph) -> tuple[np.ndarray, np.ndarray]:
    """Every (vertex, edge) incidence, grouped by vertex and sorted best-first.

    Returns ``(entry_vertex, entry_edge)`` as int64 position arrays.
    """
    entry_vertex = np.repeat(np.arange(g.num_vertices, dtype=np.int64), g.degrees())
    entry_edge = np.asarray(g.inc_edges, dtype=np.int64)
    if isinstance(spec, PerUserOrdering):
        keys = []
        cache = {}
        for v, e in zip(entry_vertex.tolist(), entry_edge.tolist()):
            if e not in cache:
                cache[e] = g._edge_at(e)
            h = cache[e]
            keys.append((spec.key(int(g.vertex_ids[v]), h), h.id))
        # group-preserving sort: vertex first, then the user's key
        order = sorted(range(len(keys)), key=lambda i: (entry_vertex[i], keys[i]))
        order = np.asarray(order, dtype=np.int64)
    else:
        pref = universal_rank(spec, g)
        order = np.lexsort((pref[entry_edge], entry_vertex))
    return entry_vertex[order], entry_edge[order]
