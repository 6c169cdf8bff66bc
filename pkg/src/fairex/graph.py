"""Graph-restricted equilibrium by residual-threshold peeling.

Works in collection space.  Each live agent ``i`` carries residual levels
``r_i^K = s_i^K - (collection of already-fixed neighbours)``; its candidate
share is ``rho_i = r_i^{d+1} / (d+1)`` with ``d`` its degree in the live
graph.  The agent with the smallest share (lowest id on ties) is fixed at
``max(prev, rho_i)`` and removed.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .levels import k_level
from .model import DomainError, Instance, total_for
from .result import EquilibriumResult, make_result


@dataclass
class ResidualState:
    live: set[int]
    residual: list[list[Fraction]]  # residual[i][K - 1]
    prev: Fraction
    fixed: dict[int, Fraction]


def peel_graph(
    neighbors: Sequence[Sequence[int]], levels: Sequence[Sequence[Fraction]]
) -> tuple[list[Fraction], list[int], list[Fraction]]:
    """Run the peeling on explicit level vectors (``levels[i][K-1]``, ``K <= deg+1``).

    Returns ``(x, order, shares)`` with ``shares[i]`` the value of ``rho_i``
    when ``i`` was selected.
    """
    n = len(neighbors)
    for i in range(n):
        if len(levels[i]) < len(neighbors[i]) + 1:
            raise DomainError(f"agent position {i} needs levels up to K = degree + 1")
    state = ResidualState(set(range(n)), [list(v) for v in levels], Fraction(0), {})
    live_deg = [len(nb) for nb in neighbors]
    shares: list[Fraction] = [Fraction(0)] * n
    order: list[int] = []
    while state.live:
        best_i, best_rho = -1, Fraction(0)
        for i in sorted(state.live):
            d = live_deg[i]
            rho = state.residual[i][d] / (d + 1)
            if best_i < 0 or rho < best_rho:
                best_i, best_rho = i, rho
        i = best_i
        xi = max(state.prev, best_rho)
        state.prev = xi
        state.fixed[i] = xi
        shares[i] = best_rho
        order.append(i)
        state.live.remove(i)
        for j in neighbors[i]:
            if j in state.live:
                state.residual[j] = [v - xi for v in state.residual[j]]
                live_deg[j] -= 1
    x = [state.fixed[i] for i in range(n)]
    return x, order, shares


def solve_graph(inst: Instance) -> EquilibriumResult:
    if inst.discrete:
        raise DomainError("graph solver handles the continuous game only")
    nbrs = [inst.neighbors(i) for i in range(inst.n)]
    levels = [
        [k_level(a, K) for K in range(1, inst.max_rank(i) + 1)] for i, a in enumerate(inst.agents)
    ]
    x, order, shares = peel_graph(nbrs, levels)
    xs = tuple(x)
    t = tuple(total_for(inst, xs, i) for i in range(inst.n))
    floor = {i: x[i] > shares[i] for i in range(inst.n)}
    return make_result("graph", inst, xs, t, order, dict(enumerate(shares)), floor)
