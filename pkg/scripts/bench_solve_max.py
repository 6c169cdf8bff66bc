"""Time the maximal-equilibrium solver on growing complete-graph instances.

    python scripts/bench_solve_max.py --sizes 2500 5000 10000 --repeats 2
"""

from __future__ import annotations

import argparse
import time

from fairex.continuous import solve_max
from fairex.generate import benchmark_instance


def best_time(n: int, repeats: int) -> float:
    inst = benchmark_instance(n, seed=n)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        solve_max(inst)
        best = min(best, time.perf_counter() - start)
    return best


def main() -> None:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--sizes", type=int, nargs="+", default=[2500, 5000, 10000])
    parser.add_argument("--repeats", type=int, default=2)
    args = parser.parse_args()
    prev = None
    print(f"{'n':>7}  {'seconds':>8}  {'ratio':>6}")
    for n in args.sizes:
        secs = best_time(n, args.repeats)
        ratio = f"{secs / prev:6.2f}" if prev else "     -"
        print(f"{n:>7}  {secs:8.3f}  {ratio}")
        prev = secs


if __name__ == "__main__":
    main()
