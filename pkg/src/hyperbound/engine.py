"""Round-synchronous contribution bounding.

Each round, every unsaturated user proposes its ``b(u) - d(u)`` most
preferred eligible edges. An edge is accepted when all of its owners proposed
it in the same round. Accepted edges join the matching, the owners' counts
grow, and users that hit their capacity drop all remaining edges from the
eligible pool.

The kernel works on flat arrays. Only incidences of eligible edges are kept
between rounds, grouped by vertex and sorted by that vertex's preference, so
a user's proposals are simply the first ``slack`` entries of its group.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Mapping

import numpy as np

from .errors import CapacityViolation
from .hypergraph import CapacityMap, Hypergraph, _segment_positions, gather_segments
from .ordering import OrderingSpec, UniversalRandom, incidence_by_preference


@dataclass(frozen=True)
class EngineConfig:
    """``max_rounds=None`` means unbounded, which requires ``early_stop``."""

    max_rounds: int | None = None
    ordering: OrderingSpec = field(default_factory=UniversalRandom)
    early_stop: bool = True

    def __post_init__(self):
        if self.max_rounds is None:
            if not self.early_stop:
                raise ValueError("unbounded max_rounds requires early_stop")
        elif int(self.max_rounds) < 1:
            raise ValueError(f"max_rounds must be positive, got {self.max_rounds}")


@dataclass(frozen=True)
class RoundRecord:
    proposals: int
    accepted: tuple[int, ...]
    newly_saturated: tuple[int, ...]


@dataclass
class RoundTrace:
    rounds: list[RoundRecord] = field(default_factory=list)

    def __len__(self):
        return len(self.rounds)

    def __iter__(self):
        return iter(self.rounds)

    @property
    def accepted_per_round(self) -> list[int]:
        return [len(r.accepted) for r in self.rounds]

    def matched(self) -> frozenset[int]:
        return frozenset(e for r in self.rounds for e in r.accepted)


@dataclass
class RoundState:
    """Mutable algorithm state, stored as arrays aligned with the graph.

    ``d``/``saturated``/``cap`` follow ``g.vertex_ids``; ``eligible`` and
    ``matched`` follow ``g.edge_ids``.
    """

    g: Hypergraph
    cap: np.ndarray
    d: np.ndarray
    saturated: np.ndarray
    eligible: np.ndarray
    matched: np.ndarray
    round: int = 0

    def copy(self) -> RoundState:
        return RoundState(self.g, self.cap, self.d.copy(), self.saturated.copy(),
                          self.eligible.copy(), self.matched.copy(), self.round)

    # dict/set views keyed by public ids, for inspection and tests

    @property
    def degrees(self) -> dict[int, int]:
        return dict(zip(self.g.vertex_ids.tolist(), self.d.tolist()))

    @property
    def saturated_vertices(self) -> frozenset[int]:
        return frozenset(self.g.vertex_ids[self.saturated].tolist())

    @property
    def eligible_edges(self) -> frozenset[int]:
        return frozenset(self.g.edge_ids[self.eligible].tolist())

    @property
    def matching(self) -> frozenset[int]:
        return frozenset(self.g.edge_ids[self.matched].tolist())

    def is_saturated(self, u: int) -> bool:
        return bool(self.saturated[self.g.vertex_index(u)])


def init_state(g: Hypergraph, caps: CapacityMap) -> RoundState:
    """Initial state: nothing matched, zero-capacity users saturated and their edges pruned."""
    cap = caps.as_array(g)
    cap.flags.writeable = False
    saturated = cap == 0
    eligible = np.ones(g.num_edges, dtype=bool)
    zero_cap = np.flatnonzero(saturated)
    if zero_cap.size:
        eligible[gather_segments(g.inc_ptr, g.inc_edges, zero_cap)] = False
    return RoundState(
        g=g,
        cap=cap,
        d=np.zeros(g.num_vertices, dtype=np.int64),
        saturated=saturated,
        eligible=eligible,
        matched=np.zeros(g.num_edges, dtype=bool),
    )


# -- kernel phases --------------------------------------------------------


def propose_entries(entry_vertex: np.ndarray, slack: np.ndarray) -> np.ndarray:
    """Mask of proposed entries.

    ``entry_vertex`` must list only eligible incidences, grouped by vertex and
    best-first within a group.
    """
    return _segment_positions(entry_vertex) < slack[entry_vertex]


def arbitrate_edges(proposed_edges: np.ndarray, edge_size: np.ndarray) -> np.ndarray:
    """Edge positions proposed by every owner, ascending."""
    if proposed_edges.size == 0:
        return proposed_edges[:0]
    uniq, counts = np.unique(proposed_edges, return_counts=True)
    return uniq[counts == edge_size[uniq]]


def commit(state: RoundState, accepted: np.ndarray) -> np.ndarray:
    """Apply accepted edge positions in place; returns newly saturated vertex positions."""
    g = state.g
    state.round += 1
    if accepted.size == 0:
        return accepted[:0]
    state.matched[accepted] = True
    state.eligible[accepted] = False
    owners = gather_segments(g.edge_ptr, g.edge_owners, accepted)
    state.d += np.bincount(owners, minlength=g.num_vertices)
    if (state.d[owners] > state.cap[owners]).any():
        bad = owners[np.flatnonzero(state.d[owners] > state.cap[owners])[0]]
        raise CapacityViolation(
            f"vertex {int(g.vertex_ids[bad])} exceeds capacity {int(state.cap[bad])}"
        )
    touched = np.unique(owners)
    newly = touched[(state.d[touched] == state.cap[touched]) & ~state.saturated[touched]]
    state.saturated[newly] = True
    if newly.size:
        state.eligible[gather_segments(g.inc_ptr, g.inc_edges, newly)] = False
    return newly


class _Kernel:
    """Preference-sorted incidence table shared by the serial and sharded drivers."""

    def __init__(self, g: Hypergraph, state: RoundState, ordering: OrderingSpec,
                 vertex_group: np.ndarray | None = None):
        entry_vertex, entry_edge = incidence_by_preference(ordering, g)
        if vertex_group is not None:
            # regroup so each shard of vertices is one contiguous slice
            order = np.argsort(vertex_group[entry_vertex], kind="stable")
            entry_vertex, entry_edge = entry_vertex[order], entry_edge[order]
        keep = state.eligible[entry_edge]
        self.entry_vertex = entry_vertex[keep]
        self.entry_edge = entry_edge[keep]
        self.vertex_group = vertex_group

    def compact(self, eligible: np.ndarray):
        keep = eligible[self.entry_edge]
        self.entry_vertex = self.entry_vertex[keep]
        self.entry_edge = self.entry_edge[keep]


def _record(g: Hypergraph, proposals: int, accepted: np.ndarray, newly: np.ndarray) -> RoundRecord:
    return RoundRecord(
        proposals=int(proposals),
        accepted=tuple(np.sort(g.edge_ids[accepted]).tolist()),
        newly_saturated=tuple(np.sort(g.vertex_ids[newly]).tolist()),
    )


RoundFn = Callable[[_Kernel, RoundState], tuple[int, np.ndarray]]


def drive(g: Hypergraph, caps: CapacityMap, config: EngineConfig, round_fn: RoundFn,
          vertex_group: np.ndarray | None = None) -> tuple[frozenset[int], RoundTrace, RoundState]:
    """Round loop shared by :func:`run` and the sharded executor.

    ``round_fn`` computes one round's ``(proposal count, accepted positions)``
    from the kernel without mutating the state.
    """
    state = init_state(g, caps)
    kernel = _Kernel(g, state, config.ordering, vertex_group)
    trace = RoundTrace()
    while config.max_rounds is None or state.round < config.max_rounds:
        if kernel.entry_edge.size == 0:
            break
        n_prop, accepted = round_fn(kernel, state)
        newly = commit(state, accepted)
        trace.rounds.append(_record(g, n_prop, accepted, newly))
        if config.early_stop and accepted.size == 0:
            break
        kernel.compact(state.eligible)
    return state.matching, trace, state


def _serial_round(kernel: _Kernel, state: RoundState) -> tuple[int, np.ndarray]:
    slack = state.cap - state.d
    proposed = propose_entries(kernel.entry_vertex, slack)
    accepted = arbitrate_edges(kernel.entry_edge[proposed], state.g.edge_size)
    return int(proposed.sum()), accepted


def run(g: Hypergraph, caps: CapacityMap, config: EngineConfig | None = None
        ) -> tuple[frozenset[int], RoundTrace]:
    """Run rounds until ``max_rounds``, an empty eligible pool, or (with early stop) a round
    that accepts nothing.

    Returns the accepted edge ids and the per-round trace. Deterministic in
    ``(g, caps, config)``.
    """
    matched, trace, _ = drive(g, caps, config or EngineConfig(), _serial_round)
    return matched, trace


def run_with_state(g: Hypergraph, caps: CapacityMap, config: EngineConfig | None = None):
    """Like :func:`run`, also returning the final :class:`RoundState`."""
    return drive(g, caps, config or EngineConfig(), _serial_round)


# -- step API: one phase at a time, keyed by public ids ---------------------


def proposals(g: Hypergraph, caps: CapacityMap, state: RoundState,
              ordering: OrderingSpec) -> dict[int, list[int]]:
    """Each unsaturated user's proposed edge ids, best first.

    Users with slack but no eligible incident edge propose nothing and are
    omitted, as are saturated users.
    """
    entry_vertex, entry_edge = incidence_by_preference(ordering, g)
    keep = state.eligible[entry_edge]
    entry_vertex, entry_edge = entry_vertex[keep], entry_edge[keep]
    proposed = propose_entries(entry_vertex, state.cap - state.d)
    out: dict[int, list[int]] = {}
    for v, e in zip(entry_vertex[proposed].tolist(), g.edge_ids[entry_edge[proposed]].tolist()):
        out.setdefault(int(g.vertex_ids[v]), []).append(e)
    return out


def arbitrate(g: Hypergraph, state: RoundState, props: Mapping[int, list[int]]) -> set[int]:
    """Edge ids proposed by all of their owners."""
    votes: dict[int, int] = {}
    for edges in props.values():
        for e in edges:
            votes[e] = votes.get(e, 0) + 1
    return {e for e, n in votes.items() if n == len(g.owners(e))}


def apply_accepted(g: Hypergraph, caps: CapacityMap, state: RoundState,
                   accepted) -> RoundState:
    """Return a new state with ``accepted`` edge ids committed."""
    nxt = state.copy()
    ids = sorted(accepted)
    pos = g.edge_positions(ids) if ids else np.zeros(0, dtype=np.int64)
    if ids and not state.eligible[pos].all():
        bad = ids[int(np.flatnonzero(~state.eligible[pos])[0])]
        raise CapacityViolation(f"edge {bad} is not eligible")
    commit(nxt, np.sort(pos))
    return nxt
