"""Time parse -> run -> write on a large generated instance.

    python scripts/scale_check.py --edges 1000000 --users 100000 --capacity 8 --workers 8
"""

import argparse
import tempfile
import time
from pathlib import Path

from hyperbound import GeneratorSpec, generate, serialize_edge_list
from hyperbound.cli import main as cli_main
from hyperbound.generator import Fixed


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("--edges", type=int, default=1_000_000)
    ap.add_argument("--users", type=int, default=100_000)
    ap.add_argument("--edge-size", type=int, default=3)
    ap.add_argument("--capacity", type=int, default=8)
    ap.add_argument("--workers", type=int, default=8)
    ap.add_argument("--seed", type=int, default=7)
    args = ap.parse_args()

    with tempfile.TemporaryDirectory() as tmp:
        tmp = Path(tmp)
        t0 = time.perf_counter()
        g = generate(GeneratorSpec(args.users, args.edges, Fixed(args.edge_size), seed=args.seed))
        (tmp / "edges.tsv").write_text(serialize_edge_list(g))
        print(f"generated {args.edges} edges in {time.perf_counter() - t0:.1f}s")
        t0 = time.perf_counter()
        code = cli_main(["run", "--edges", str(tmp / "edges.tsv"), "--capacity", str(args.capacity),
                         "--workers", str(args.workers), "--out", str(tmp / "sel.txt"),
                         "--summary", str(tmp / "summary.json")])
        elapsed = time.perf_counter() - t0
        print(f"parse+run+write: {elapsed:.1f}s (exit {code})")
        print((tmp / "summary.json").read_text())


if __name__ == "__main__":
    main()
