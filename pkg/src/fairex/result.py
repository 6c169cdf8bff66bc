from __future__ import annotations

from bisect import bisect_left, bisect_right
from dataclasses import dataclass
from fractions import Fraction

from .model import Instance, Profile, RankPair


@dataclass(frozen=True)
class AgentDiagnostic:
    """Per-agent record of how a solver placed it.

    ``level`` is the threshold the solver used at selection time (a K-level,
    min-K-level, residual share, or discrete target floor); ``floor_bound`` is
    set when the running floor rather than ``level`` decided the assignment.
    """

    agent: int
    rank: RankPair
    level: Fraction
    floor_bound: bool


@dataclass(frozen=True)
class EquilibriumResult:
    kind: str
    x: Profile
    t: Profile
    order: tuple[int, ...]
    diagnostics: tuple[AgentDiagnostic, ...]


def make_result(
    kind: str,
    inst: Instance,
    x: Profile,
    t: Profile,
    order: list[int],
    used: dict[int, Fraction],
    floor: dict[int, bool],
) -> EquilibriumResult:
    diags = tuple(
        AgentDiagnostic(i, rp, used[i], floor[i])
        for i, rp in enumerate(all_ranks(inst, x, order_key=t if inst.is_complete else None))
    )
    return EquilibriumResult(kind, x, t, tuple(order), diags)


def all_ranks(inst: Instance, x: Profile, order_key: Profile | None = None) -> list[RankPair]:
    """Rank pairs of every agent; one sort on the complete graph.

    ``order_key`` may replace ``x`` on the complete graph when it orders the
    agents identically; the totals do (the forward transform is strictly
    rank-monotone) and are far cheaper to compare than solver collections,
    whose denominators grow with ``n``.
    """
    n = inst.n
    if inst.edges is None or inst.is_complete:
        key = x if order_key is None else order_key
        xs = sorted(key)
        return [
            RankPair(n - bisect_left(xs, v), 1 + n - bisect_right(xs, v)) for v in key
        ]
    out = []
    for i in range(n):
        nb = inst.neighbors(i)
        out.append(
            RankPair(1 + sum(1 for j in nb if x[j] >= x[i]), 1 + sum(1 for j in nb if x[j] > x[i]))
        )
    return out
