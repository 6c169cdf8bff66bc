"""Exact integer equilibrium by round-and-verify peeling.

Each round computes, for every remaining agent ``j``, the fractional target
``(s_j^{|R|} - fixed total) / |R|`` and its floor ``m_j = max(floor, prev)``.
The agents sharing the smallest floor ``m`` form a tie group; the group is
tentatively placed at ``m + 1`` with every other remaining agent also at
``m + 1``.  If no member prefers ``m`` in that completion the whole group is
fixed at ``m + 1``; otherwise the lowest-id member that prefers ``m`` is fixed
there alone.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import floor

from .levels import k_level
from .model import DomainError, Instance, total_for
from .result import EquilibriumResult, make_result


@dataclass(frozen=True)
class TieGroup:
    members: tuple[int, ...]
    floor: int
    targets: dict[int, Fraction]


def _utility_at(inst: Instance, x: list[Fraction], i: int, xi: int) -> Fraction:
    a = inst.agents[i]
    v = Fraction(xi)
    return a.benefit(total_for(inst, x, i, v)) - a.cost * v


def next_group(inst: Instance, remaining: list[int], fixed: dict[int, int], prev: int) -> TieGroup:
    K = len(remaining)
    base = sum(fixed.values())
    targets = {j: (k_level(inst.agents[j], K) - base) / K for j in remaining}
    floors = {j: max(floor(targets[j]), prev) for j in remaining}
    m = min(floors.values())
    return TieGroup(tuple(j for j in remaining if floors[j] == m), m, targets)


def solve_discrete(inst: Instance) -> EquilibriumResult:
    if not inst.discrete:
        raise DomainError("discrete solver called on a continuous instance")
    if not inst.is_complete:
        raise DomainError("the discrete solver is defined on the complete graph only")
    n = inst.n
    remaining = list(range(n))
    fixed: dict[int, int] = {}
    used: dict[int, Fraction] = {}
    floor_flag: dict[int, bool] = {}
    order: list[int] = []
    prev = 0
    while remaining:
        group = next_group(inst, remaining, fixed, prev)
        m = group.floor
        # pessimistic completion: every remaining agent sits at m + 1
        trial = [Fraction(fixed[j]) if j in fixed else Fraction(m + 1) for j in range(n)]
        deviator = next(
            (
                j
                for j in group.members
                if _utility_at(inst, trial, j, m) > _utility_at(inst, trial, j, m + 1)
            ),
            None,
        )
        if deviator is None:
            placed, level = list(group.members), m + 1
        else:
            placed, level = [deviator], m
        for j in placed:
            fixed[j] = level
            used[j] = group.targets[j]
            floor_flag[j] = floor(group.targets[j]) < prev
            order.append(j)
            remaining.remove(j)
        prev = level
    x = tuple(Fraction(fixed[j]) for j in range(n))
    t = tuple(total_for(inst, x, i) for i in range(n))
    return make_result("discrete", inst, x, t, order, used, floor_flag)
