"""Maximal and minimal equilibria of the continuous complete-graph game.

Both solvers work in total-data space and peel one agent per rank parameter:
the maximal solver walks ``K = n..1`` picking the agent with the smallest
K-level and lifting it to the running floor; the minimal solver walks
``K = 1..n`` picking the largest min-K-level and capping it at the running
ceiling.  Ties go to the lowest agent id.
"""

from __future__ import annotations

import heapq
from bisect import bisect_right
from fractions import Fraction
from typing import Sequence

from .levels import level_steps, min_k_level
from .model import DomainError, Instance
from .result import EquilibriumResult, make_result
from .transforms import phi_inverse

Steps = Sequence[tuple[int, Fraction]]


def _require_complete_continuous(inst: Instance) -> None:
    if inst.discrete:
        raise DomainError("continuous solver called on a discrete instance; use solve_discrete")
    if not inst.is_complete:
        raise DomainError("complete-graph solver called on a restricted graph; use solve_graph")


def steps_from_table(levels: Sequence[Fraction]) -> list[tuple[int, Fraction]]:
    """Run-length encode a level vector indexed ``K = 1..len(levels)``."""
    steps: list[tuple[int, Fraction]] = []
    for K, s in enumerate(levels, start=1):
        if not steps or steps[-1][1] != s:
            steps.append((K, s))
    return steps


def peel_max(steps: Sequence[Steps]) -> tuple[list[Fraction], list[int], list[Fraction]]:
    """Maximal total-data equilibrium from per-agent level step functions.

    Returns ``(T, order, used)`` where ``used[j]`` is the K-level of ``j`` at
    the iteration that selected it.  A lazy heap keeps the current
    ``(level, id)`` minimum; an agent's key only changes when ``K`` crosses
    one of its step boundaries, so the run is ``O((n + steps) log n)``.
    """
    n = len(steps)
    starts = [[k for k, _ in st] for st in steps]
    idx = [bisect_right(starts[j], n) - 1 for j in range(n)]
    changes: dict[int, list[int]] = {}
    for j in range(n):
        for k in starts[j][1 : idx[j] + 1]:
            changes.setdefault(k, []).append(j)

    heap = [(steps[j][idx[j]][1], j, idx[j]) for j in range(n)]
    heapq.heapify(heap)
    alive = [True] * n
    T: list[Fraction] = [Fraction(0)] * n
    used: list[Fraction] = [Fraction(0)] * n
    order: list[int] = []
    prev = Fraction(0)
    for K in range(n, 0, -1):
        while True:
            level, j, at = heapq.heappop(heap)
            if alive[j] and at == idx[j]:
                break
        alive[j] = False
        used[j] = level
        prev = max(level, prev)
        T[j] = prev
        order.append(j)
        for h in changes.get(K, ()):
            if alive[h]:
                idx[h] -= 1
                heapq.heappush(heap, (steps[h][idx[h]][1], h, idx[h]))
    return T, order, used


def solve_max(inst: Instance) -> EquilibriumResult:
    _require_complete_continuous(inst)
    T, order, used = peel_max([level_steps(a) for a in inst.agents])
    x = phi_inverse(T)
    floor = {j: T[j] > used[j] for j in range(inst.n)}
    return make_result("max", inst, x, tuple(T), order, dict(enumerate(used)), floor)


def peel_min(levels: Sequence[Sequence[Fraction]]) -> tuple[list[Fraction], list[int], list[Fraction]]:
    """Minimal total-data equilibrium from min-level vectors (``levels[j][K-1]``)."""
    n = len(levels)
    remaining = list(range(n))
    T: list[Fraction] = [Fraction(0)] * n
    used: list[Fraction] = [Fraction(0)] * n
    order: list[int] = []
    prev: Fraction | None = None  # unbounded above until the first pick
    for K in range(1, n + 1):
        j = min(remaining, key=lambda h: (-levels[h][K - 1], h))
        remaining.remove(j)
        level = levels[j][K - 1]
        used[j] = level
        prev = level if prev is None else min(level, prev)
        T[j] = prev
        order.append(j)
    return T, order, used


def solve_min(inst: Instance) -> EquilibriumResult:
    _require_complete_continuous(inst)
    n = inst.n
    tables = [[min_k_level(a, K) for K in range(1, n + 1)] for a in inst.agents]
    T, order, used = peel_min(tables)
    x = phi_inverse(T)
    floor = {j: T[j] < used[j] for j in range(n)}
    return make_result("min", inst, x, tuple(T), order, dict(enumerate(used)), floor)
