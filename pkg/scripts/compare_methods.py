"""Distributed rounds vs. greedy vs. exact optimum on random small instances.

    python scripts/compare_methods.py --instances 200 --max-edges 20
"""

import argparse
import statistics

import numpy as np

from hyperbound import CapacityMap, EngineConfig, GeneratorSpec, generate, run
from hyperbound.baselines import exact_optimal, greedy
from hyperbound.generator import ZipfPopularity, ZipfSize
from hyperbound.ordering import UniversalRandom


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--instances", type=int, default=200)
    ap.add_argument("--users", type=int, default=30)
    ap.add_argument("--max-edges", type=int, default=20)
    ap.add_argument("--capacity", type=int, default=2)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()

    rng = np.random.default_rng(args.seed)
    dist_ratio, greedy_ratio, rounds = [], [], []
    for _ in range(args.instances):
        spec = GeneratorSpec(args.users, int(rng.integers(1, args.max_edges + 1)),
                             ZipfSize(1.5, 4), ZipfPopularity(0.8), int(rng.integers(2**63)))
        g = generate(spec)
        caps = CapacityMap(args.capacity)
        order = UniversalRandom(int(rng.integers(2**63)))
        m, trace = run(g, caps, EngineConfig(ordering=order))
        opt = exact_optimal(g, caps).optimum
        dist_ratio.append(len(m) / opt if opt else 1.0)
        greedy_ratio.append(len(greedy(g, caps, order)) / opt if opt else 1.0)
        rounds.append(len(trace))

    print(f"instances           {args.instances}")
    print(f"distributed / opt   mean {statistics.mean(dist_ratio):.4f}  min {min(dist_ratio):.4f}")
    print(f"greedy / opt        mean {statistics.mean(greedy_ratio):.4f}  min {min(greedy_ratio):.4f}")
    print(f"rounds              mean {statistics.mean(rounds):.2f}  max {max(rounds)}")


if __name__ == "__main__":
    main()
