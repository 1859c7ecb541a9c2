"""Sequential greedy baseline and an exhaustive exact optimum for small instances."""

from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .errors import TooLarge
from .hypergraph import CapacityMap, Hypergraph
from .ordering import OrderingSpec, PerUserOrdering, UniversalRandom, universal_rank

DEFAULT_EXACT_LIMIT = 24


@dataclass(frozen=True)
class BaselineResult:
    matched: frozenset[int]
    method: str  # "greedy" | "exact"
    fingerprint: str
    optimum: int | None = None

    def __len__(self):
        return len(self.matched)


def _owner_lists(g: Hypergraph) -> list[list[int]]:
    ptr = g.edge_ptr.tolist()
    owners = g.edge_owners.tolist()
    return [owners[ptr[e]:ptr[e + 1]] for e in range(g.num_edges)]


def greedy(g: Hypergraph, caps: CapacityMap, ordering: OrderingSpec | None = None) -> BaselineResult:
    """Scan edges best-first and keep each one whose owners all have room left.

    The result is feasible and maximal for the scan order.
    """
    ordering = ordering or UniversalRandom()
    if isinstance(ordering, PerUserOrdering):
        raise TypeError("greedy needs a single global scan order")
    scan = np.argsort(universal_rank(ordering, g)).tolist()
    room = caps.as_array(g).tolist()
    owners = _owner_lists(g)
    kept = []
    for e in scan:
        own = owners[e]
        if all(room[v] > 0 for v in own):
            for v in own:
                room[v] -= 1
            kept.append(e)
    return BaselineResult(frozenset(g.edge_ids[kept].tolist()), "greedy", g.fingerprint)


def exact_optimal(g: Hypergraph, caps: CapacityMap, limit: int = DEFAULT_EXACT_LIMIT) -> BaselineResult:
    """Maximum-cardinality feasible edge set by depth-first branch and bound.

    Raises:
        TooLarge: the graph has more than ``limit`` edges.
    """
    m = g.num_edges
    if m > limit:
        raise TooLarge(f"{m} edges exceeds the exact-search limit of {limit}")
    room = caps.as_array(g).tolist()
    owners = _owner_lists(g)
    # edges with a zero-capacity owner can never be taken
    candidates = [e for e in range(m) if all(room[v] > 0 for v in owners[e])]
    best: list[int] = []
    chosen: list[int] = []

    def search(i: int):
        nonlocal best
        if len(chosen) + (len(candidates) - i) <= len(best):
            return
        if i == len(candidates):
            best = chosen.copy()
            return
        e = candidates[i]
        own = owners[e]
        if all(room[v] > 0 for v in own):
            for v in own:
                room[v] -= 1
            chosen.append(e)
            search(i + 1)
            chosen.pop()
            for v in own:
                room[v] += 1
        search(i + 1)

    search(0)
    matched = frozenset(g.edge_ids[best].tolist()) if best else frozenset()
    return BaselineResult(matched, "exact", g.fingerprint, optimum=len(best))
