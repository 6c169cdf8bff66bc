"""Threshold levels that drive every solver.

``k_level(a, K)`` is the total at which agent ``a`` stops wanting a marginal
unit when each own unit buys ``K`` units of access, i.e. the right end of the
region where the benefit slope is at least ``c / K``.  ``min_k_level`` is the
left end of the region where the slope is at most ``c / K``.  The two differ
only when some segment has slope exactly ``c / K``.

Both are defined as 0 for ``K = 0``.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from math import ceil
from typing import Literal

from .model import AgentSpec, DomainError, Number, as_fraction

ZERO = Fraction(0)


def _check_rank(K: int) -> None:
    if K < 0:
        raise DomainError(f"rank parameter must be nonnegative, got {K}")


def k_level(agent: AgentSpec, K: int) -> Fraction:
    _check_rank(K)
    if K == 0:
        return ZERO
    threshold = agent.cost / K
    b = agent.benefit
    level = ZERO
    for k, slope in enumerate(b.slopes):
        if slope < threshold:
            break
        # the final slope is 0 < threshold, so k + 1 always exists here
        level = b.breakpoints[k + 1]
    return level


def min_k_level(agent: AgentSpec, K: int) -> Fraction:
    _check_rank(K)
    if K == 0:
        return ZERO
    threshold = agent.cost / K
    b = agent.benefit
    for k, slope in enumerate(b.slopes):
        if slope <= threshold:
            return b.breakpoints[k]
    raise AssertionError("final slope is 0, unreachable")


def level_steps(agent: AgentSpec) -> list[tuple[int, Fraction]]:
    """Run-length form of ``K -> k_level(agent, K)`` for ``K >= 1``.

    Returns ``[(K_0, s_0), (K_1, s_1), ...]`` with ``K_0 = 1`` and increasing
    ``K_j``; the level is ``s_j`` for ``K_j <= K < K_{j+1}``.
    Segment ``k`` is worth collecting on once ``K >= ceil(c / slope_k)``.
    """
    b = agent.benefit
    steps: list[tuple[int, Fraction]] = [(1, ZERO)]
    for k, slope in enumerate(b.slopes[:-1]):
        K_k = max(1, ceil(agent.cost / slope))
        level = b.breakpoints[k + 1]
        if steps[-1][0] == K_k:
            steps[-1] = (K_k, level)
        else:
            steps.append((K_k, level))
    return steps


@dataclass(frozen=True)
class LevelTable:
    """Levels of one agent for ``K = 1..k_max``; ``levels[K - 1]`` is level ``K``."""

    owner: int
    kind: Literal["max", "min"]
    levels: tuple[Fraction, ...]

    def __getitem__(self, K: int) -> Fraction:
        if K == 0:
            return ZERO
        return self.levels[K - 1]

    @property
    def k_max(self) -> int:
        return len(self.levels)


def level_table(agent: AgentSpec, k_max: int, kind: Literal["max", "min"] = "max") -> LevelTable:
    fn = k_level if kind == "max" else min_k_level
    return LevelTable(agent.id, kind, tuple(fn(agent, K) for K in range(1, k_max + 1)))


def outside_closure(agent: AgentSpec, t: Number) -> Fraction:
    """Value of access ``t`` after optimally topping up with private collection.

    The objective ``b(t + z) - c z`` is concave in ``z`` with slope ``>= 0``
    until ``t + z`` reaches the 1-level, so ``z* = max(0, s^1 - t)``.
    """
    t = as_fraction(t)
    if t < 0:
        raise DomainError(f"data amount must be nonnegative, got {t}")
    z = max(ZERO, k_level(agent, 1) - t)
    return agent.benefit(t + z) - agent.cost * z
