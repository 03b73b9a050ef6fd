#!/usr/bin/env python3
"""Time the tree solver on growing path instances and report scaling.

Usage:
    python scripts/bench_scaling.py --sizes 50000,100000,200000 --repeats 3
"""

import argparse
import time

from latss.graphs import path_graph
from latss.trees import solve


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--sizes", default="50000,100000,200000")
    parser.add_argument("--repeats", type=int, default=3)
    args = parser.parse_args()
    sizes = [int(s) for s in args.sizes.split(",")]

    print(f"{'n':>10}  {'best wall time':>14}  {'time ratio':>10}  {'size ratio':>10}")
    previous = None
    for n in sizes:
        graph = path_graph(n)
        thresholds = (1,) * n
        targets = set(range(n))
        best = min(
            _timed(graph, thresholds, n, targets) for _ in range(args.repeats)
        )
        if previous is None:
            print(f"{n:>10}  {best:>13.3f}s  {'-':>10}  {'-':>10}")
        else:
            prev_n, prev_t = previous
            print(
                f"{n:>10}  {best:>13.3f}s  {best / prev_t:>10.2f}  {n / prev_n:>10.2f}"
            )
        previous = (n, best)


def _timed(graph, thresholds, latency, targets) -> float:
    start = time.perf_counter()
    chosen = solve(graph, thresholds, latency, targets)
    elapsed = time.perf_counter() - start
    assert len(chosen) == 1
    return elapsed


if __name__ == "__main__":
    main()
