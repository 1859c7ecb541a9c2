"""Utility statistics for a selected edge set, and ratios between methods."""

from __future__ import annotations

from dataclasses import asdict, dataclass

import numpy as np

from .baselines import BaselineResult
from .engine import RoundTrace
from .errors import InfeasibleInput, InstanceMismatch
from .hypergraph import CapacityMap, Hypergraph, gather_segments


@dataclass(frozen=True)
class RunReport:
    matched_count: int
    total_edges: int
    retention: float
    rounds_executed: int | None
    per_round_accepted: list[int] | None
    degree_histogram: dict[int, int]
    saturated_users: int
    fingerprint: str

    def to_json(self) -> dict:
        out = asdict(self)
        out["degree_histogram"] = {str(k): v for k, v in sorted(self.degree_histogram.items())}
        return out


def matched_degrees(g: Hypergraph, matched) -> np.ndarray:
    """Per-vertex count of matched edges, recomputed from the edge set alone."""
    ids = sorted(matched)
    if not ids:
        return np.zeros(g.num_vertices, dtype=np.int64)
    owners = gather_segments(g.edge_ptr, g.edge_owners, g.edge_positions(ids))
    return np.bincount(owners, minlength=g.num_vertices)


def report(g: Hypergraph, caps: CapacityMap, matched, trace: RoundTrace | None = None) -> RunReport:
    """Summarize a feasible selection.

    ``trace`` is None for the sequential baselines, in which case the round
    fields are None as well.

    Raises:
        InfeasibleInput: some user has more matched edges than its capacity.
    """
    d = matched_degrees(g, matched)
    cap = caps.as_array(g)
    over = np.flatnonzero(d > cap)
    if over.size:
        v = over[0]
        raise InfeasibleInput(
            f"vertex {int(g.vertex_ids[v])} has {int(d[v])} matched edges, capacity {int(cap[v])}"
        )
    hist_deg, hist_cnt = np.unique(d[d > 0], return_counts=True)
    m = g.num_edges
    k = len(matched)
    return RunReport(
        matched_count=k,
        total_edges=m,
        retention=k / m if m else 0.0,
        rounds_executed=len(trace) if trace is not None else None,
        per_round_accepted=trace.accepted_per_round if trace is not None else None,
        degree_histogram=dict(zip(hist_deg.tolist(), hist_cnt.tolist())),
        saturated_users=int((d == cap).sum()),
        fingerprint=g.fingerprint,
    )


@dataclass(frozen=True)
class Comparison:
    numerator: int
    denominator: int
    ratio: float | None  # None when only the denominator is zero
    defined: bool


def _count_and_fingerprint(x) -> tuple[int, str]:
    if isinstance(x, RunReport):
        return x.matched_count, x.fingerprint
    if isinstance(x, BaselineResult):
        return len(x.matched), x.fingerprint
    raise TypeError(f"cannot compare {type(x).__name__}")


def compare(a: RunReport | BaselineResult, b: RunReport | BaselineResult) -> Comparison:
    """``|M_a| / |M_b|``; 0/0 counts as 1.

    Raises:
        InstanceMismatch: the two results come from different edge universes.
    """
    na, fa = _count_and_fingerprint(a)
    nb, fb = _count_and_fingerprint(b)
    if fa != fb:
        raise InstanceMismatch(f"instances differ ({fa} vs {fb})")
    if nb == 0:
        if na == 0:
            return Comparison(na, nb, 1.0, True)
        return Comparison(na, nb, None, False)
    return Comparison(na, nb, na / nb, True)
