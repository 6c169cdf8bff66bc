"""Search small graph games for two exact equilibria with incomparable utilities.

Enumerates every profile on a half-integer grid, keeps the exact Nash
equilibria (checked against the exact best-response interval of every agent)
and reports the first pair whose utility vectors are incomparable.

    python scripts/find_graph_incomparable.py --seed 1 --trials 300
"""

from __future__ import annotations

import argparse
import itertools
import random
from fractions import Fraction

from fairex.model import BenefitFunction, Instance, utilities, utility
from fairex.verifier import best_response

GRAPHS = [
    [(0, 1), (1, 2)],
    [(0, 1), (1, 2), (2, 3)],
    [(0, 1), (0, 2), (0, 3)],
]
SLOPES = [Fraction(2, 3), Fraction(3, 4), Fraction(5, 4), Fraction(3, 2)]


def is_equilibrium(inst: Instance, x) -> bool:
    for i in range(inst.n):
        lo, hi = best_response(inst, x, i)
        if lo <= x[i] <= hi:
            continue
        y = list(x)
        y[i] = lo
        if utility(inst, y, i) > utility(inst, x, i):
            return False
    return True


def incomparable(u, v) -> bool:
    return any(a > b for a, b in zip(u, v)) and any(a < b for a, b in zip(u, v))


def search(seed: int, trials: int, grid_top: int):
    rng = random.Random(seed)
    grid = [Fraction(k, 2) for k in range(2 * grid_top + 1)]
    for trial in range(trials):
        edges = rng.choice(GRAPHS)
        n = max(max(e) for e in edges) + 1
        agents = [
            (1, BenefitFunction.capped_linear(rng.choice(SLOPES), rng.randint(2, 8)))
            for _ in range(n)
        ]
        inst = Instance.build(agents, edges=edges)
        eqs = [x for x in itertools.product(grid, repeat=n) if is_equilibrium(inst, x)]
        us = [utilities(inst, x) for x in eqs]
        for a, b in itertools.combinations(range(len(eqs)), 2):
            if incomparable(us[a], us[b]):
                return trial, inst, eqs[a], us[a], eqs[b], us[b]
    return None


def main() -> None:
    ap = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    ap.add_argument("--seed", type=int, default=1)
    ap.add_argument("--trials", type=int, default=300)
    ap.add_argument("--grid-top", type=int, default=6)
    args = ap.parse_args()
    hit = search(args.seed, args.trials, args.grid_top)
    if hit is None:
        print("no incomparable pair found")
        return
    trial, inst, xa, ua, xb, ub = hit
    print(f"trial {trial}: edges {sorted(inst.edges)}")
    for a in inst.agents:
        print(f"  agent {a.id}: cost {a.cost}, slope {a.benefit.slopes[0]}, cap {a.benefit.satiation}")
    print("  X_a =", [str(v) for v in xa], "U_a =", [str(v) for v in ua])
    print("  X_b =", [str(v) for v in xb], "U_b =", [str(v) for v in ub])


if __name__ == "__main__":
    main()
