"""Multi-worker execution of the bounding rounds.

Vertices and edges are assigned to workers by ``id % workers``. Each round
has two barrier-separated phases:

1. propose: every worker scans its own vertices and routes each proposal to
   the worker owning the proposed edge;
2. arbitrate: every worker counts the proposals it received and reports the
   edges proposed by all owners.

The accepted edges are merged and committed once, single-threaded, in
ascending edge id order. Workers only read state committed by the previous
round, so the output does not depend on the worker count or on scheduling.
"""

from __future__ import annotations

from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

import numpy as np

from .engine import (EngineConfig, RoundState, RoundTrace, _Kernel, arbitrate_edges,
                     drive, propose_entries)
from .hypergraph import CapacityMap, Hypergraph


@dataclass(frozen=True)
class Partition:
    workers: int

    def __post_init__(self):
        if self.workers < 1:
            raise ValueError(f"worker count must be >= 1, got {self.workers}")

    def assign(self, ids: np.ndarray) -> np.ndarray:
        return (np.asarray(ids, dtype=np.uint64) % np.uint64(self.workers)).astype(np.int64)


class _ShardedRound:
    def __init__(self, g: Hypergraph, partition: Partition, pool: ThreadPoolExecutor):
        self.g = g
        self.partition = partition
        self.pool = pool
        self.edge_worker = partition.assign(g.edge_ids)
        self.vertex_worker = partition.assign(g.vertex_ids)

    def _propose(self, kernel: _Kernel, slack: np.ndarray, lo: int, hi: int):
        proposed = propose_entries(kernel.entry_vertex[lo:hi], slack)
        edges = kernel.entry_edge[lo:hi][proposed]
        # outbox per destination worker
        dest = self.edge_worker[edges]
        order = np.argsort(dest, kind="stable")
        bounds = np.searchsorted(dest[order], np.arange(self.partition.workers + 1))
        edges = edges[order]
        outbox = [edges[bounds[k]:bounds[k + 1]] for k in range(self.partition.workers)]
        return int(proposed.sum()), outbox

    def _arbitrate(self, inbox: list[np.ndarray]) -> np.ndarray:
        return arbitrate_edges(np.concatenate(inbox), self.g.edge_size)

    def __call__(self, kernel: _Kernel, state: RoundState):
        w = self.partition.workers
        slack = state.cap - state.d
        group = kernel.vertex_group[kernel.entry_vertex]
        bounds = np.searchsorted(group, np.arange(w + 1)).tolist()
        futures = [self.pool.submit(self._propose, kernel, slack, bounds[k], bounds[k + 1])
                   for k in range(w)]
        results = [f.result() for f in futures]  # barrier
        n_prop = sum(r[0] for r in results)
        inboxes = [[r[1][k] for r in results] for k in range(w)]
        futures = [self.pool.submit(self._arbitrate, inboxes[k]) for k in range(w)]
        accepted = np.concatenate([f.result() for f in futures])  # barrier
        order = np.argsort(self.g.edge_ids[accepted], kind="stable")
        return n_prop, accepted[order]


def parallel_run(g: Hypergraph, caps: CapacityMap, config: EngineConfig | None = None,
                 workers: int = 1) -> tuple[frozenset[int], RoundTrace]:
    """Same result as :func:`hyperbound.engine.run`, computed by ``workers`` threads."""
    partition = Partition(workers)
    config = config or EngineConfig()
    with ThreadPoolExecutor(max_workers=workers) as pool:
        sharded = _ShardedRound(g, partition, pool)
        matched, trace, _ = drive(g, caps, config, sharded, vertex_group=sharded.vertex_worker)
    return matched, trace


@dataclass(frozen=True)
class PhaseStats:
    round: int
    proposal_messages: int
    commit_messages: int


def phase_stats(g: Hypergraph, trace: RoundTrace) -> list[PhaseStats]:
    """Message counts per round: one user-to-edge message per proposal, one edge-to-owner
    message per owner of each accepted edge."""
    out = []
    for i, rec in enumerate(trace.rounds, start=1):
        commits = 0
        if rec.accepted:
            commits = int(g.edge_size[g.edge_positions(list(rec.accepted))].sum())
        out.append(PhaseStats(i, rec.proposals, commits))
    return out
