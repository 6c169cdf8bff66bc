"""Direct mechanism: reported levels in, recommended profile out.

Model 1 enforces the recommendation.  Model 2 treats the recommendation as a
participation threshold and exchange cap; agents below it are excluded from
the exchange, and everyone may top up privately (the outside closure).
Model 3 only recommends; fair exchange runs on whatever is submitted.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from math import comb
from typing import Iterable, Sequence

from .continuous import peel_max, steps_from_table
from .graph import peel_graph
from .levels import k_level, outside_closure
from .model import (
    DomainError,
    FairexError,
    Instance,
    Number,
    Profile,
    as_fraction,
    as_profile,
    total_data,
    total_for,
    utility,
)
from .transforms import phi_inverse
from .verifier import GRID_LIMIT, GuardExceeded, best_response, grid_points

MODELS = (1, 2, 3)


class ReportError(FairexError, ValueError):
    def __init__(self, agent: int, reason: str):
        self.agent = agent
        super().__init__(f"report of agent {agent}: {reason}")


@dataclass(frozen=True)
class Report:
    agent: int  # position
    levels: tuple[Fraction, ...]  # levels[K - 1]


@dataclass(frozen=True)
class MechanismOutcome:
    model: int
    recommended: Profile
    submitted: Profile
    totals: Profile
    utilities: Profile


@dataclass(frozen=True)
class Exploit:
    model: int
    agent: int
    report: tuple[Fraction, ...]
    recommended: Profile
    submitted: Profile
    truthful_utility: Fraction
    exploit_utility: Fraction

    @property
    def gain(self) -> Fraction:
        return self.exploit_utility - self.truthful_utility


@dataclass(frozen=True)
class AuditResult:
    model: int
    exploit: Exploit | None
    reports_checked: int

    @property
    def clean(self) -> bool:
        return self.exploit is None


def truthful_reports(inst: Instance) -> list[Report]:
    return [
        Report(i, tuple(k_level(a, K) for K in range(1, inst.max_rank(i) + 1)))
        for i, a in enumerate(inst.agents)
    ]


def _check_report(inst: Instance, r: Report) -> None:
    need = inst.max_rank(r.agent)
    if len(r.levels) != need:
        raise ReportError(inst.agents[r.agent].id, f"expected {need} levels, got {len(r.levels)}")
    prev = Fraction(0)
    for K, s in enumerate(r.levels, start=1):
        if s < 0:
            raise ReportError(inst.agents[r.agent].id, f"negative level at K={K}")
        if s < prev:
            raise ReportError(inst.agents[r.agent].id, f"level decreases at K={K}")
        prev = s


def recommend(reports: Sequence[Report], inst: Instance) -> Profile:
    """Equilibrium recommendation computed from reported levels only."""
    if inst.discrete:
        raise DomainError("the level-report mechanism is continuous; discrete reports are full types")
    by_agent = sorted(reports, key=lambda r: r.agent)
    if [r.agent for r in by_agent] != list(range(inst.n)):
        raise DomainError("need exactly one report per agent")
    for r in by_agent:
        _check_report(inst, r)
    return _recommend_levels(inst, [r.levels for r in by_agent])


def _recommend_levels(inst: Instance, levels: Sequence[Sequence[Fraction]]) -> Profile:
    if inst.is_complete:
        T, _, _ = peel_max([steps_from_table(v) for v in levels])
        return phi_inverse(T)
    x, _, _ = peel_graph([inst.neighbors(i) for i in range(inst.n)], levels)
    return tuple(x)


def realize(model: int, inst: Instance, recommended: Iterable[Number], submitted: Iterable[Number]) -> MechanismOutcome:
    rec = as_profile(inst, recommended)
    sub = as_profile(inst, submitted)
    if model == 1:
        tot = total_data(inst, rec)
        utils = tuple(a.benefit(tot[i]) - a.cost * rec[i] for i, a in enumerate(inst.agents))
        return MechanismOutcome(1, rec, rec, tot, utils)
    if model == 2:
        inside = [sub[i] >= rec[i] for i in range(inst.n)]
        tot_l: list[Fraction] = []
        utils_l: list[Fraction] = []
        for i, a in enumerate(inst.agents):
            inflow = Fraction(0)
            if inside[i]:
                inflow = sum(
                    (min(rec[i], rec[j]) for j in inst.neighbors(i) if inside[j]), Fraction(0)
                )
            tot_l.append(sub[i] + inflow)
            utils_l.append(outside_closure(a, tot_l[-1]) - a.cost * sub[i])
        return MechanismOutcome(2, rec, sub, tuple(tot_l), tuple(utils_l))
    if model == 3:
        tot = total_data(inst, sub)
        utils = tuple(a.benefit(tot[i]) - a.cost * sub[i] for i, a in enumerate(inst.agents))
        return MechanismOutcome(3, rec, sub, tot, utils)
    raise DomainError(f"unknown model {model}")


def _model2_payoff(inst: Instance, rec: Profile, i: int) -> Fraction:
    """Best Model-2 payoff of ``i`` when everyone else submits its recommendation.

    Participating at the recommendation is worth ``v(T_i) - c rec_i``; opting
    out is worth ``v(0)`` (private collection only).
    """
    a = inst.agents[i]
    inside = outside_closure(a, total_for(inst, rec, i)) - a.cost * rec[i]
    return max(inside, outside_closure(a, Fraction(0)))


def _misreport_space(inst: Instance, grid: Fraction) -> tuple[list[Fraction], int]:
    truth = [s for r in truthful_reports(inst) for s in r.levels]
    top = max(truth, default=Fraction(0))
    bound = max(2 * top, grid)
    values = sorted(set(grid_points(bound, grid)) | set(truth))
    return values, max(inst.max_rank(i) for i in range(inst.n))


def _monotone_reports(values: list[Fraction], length: int) -> Iterable[tuple[Fraction, ...]]:
    return itertools.combinations_with_replacement(values, length)


def _guard(inst: Instance, values: list[Fraction]) -> int:
    total = sum(comb(len(values) + inst.max_rank(i) - 1, inst.max_rank(i)) for i in range(inst.n))
    if total > GRID_LIMIT:
        raise GuardExceeded(total)
    return total


def audit_truthfulness(inst: Instance, model: int, misreport_grid: Number) -> AuditResult:
    """Search monotone misreports for one that beats truth under Model 1 or 2.

    Misreport components come from the grid ``{0, step, ..., 2 * max level}``
    together with every true level.  The deviator's true payoff is evaluated
    with everyone else reporting truthfully and following the recommendation.
    The best strict exploit is returned.
    """
    if model not in (1, 2):
        raise DomainError("truthfulness audit covers Models 1 and 2; use model3_exploit_search")
    step = as_fraction(misreport_grid)
    if step <= 0:
        raise DomainError("misreport grid must be positive")
    values, _ = _misreport_space(inst, step)
    checked = _guard(inst, values)
    truth = truthful_reports(inst)
    rec0 = recommend(truth, inst)

    def payoff(rec: Profile, i: int) -> Fraction:
        if model == 1:
            a = inst.agents[i]
            return a.benefit(total_for(inst, rec, i)) - a.cost * rec[i]
        return _model2_payoff(inst, rec, i)

    best: Exploit | None = None
    for i in range(inst.n):
        base = payoff(rec0, i)
        levels = [r.levels for r in truth]
        for rep in _monotone_reports(values, inst.max_rank(i)):
            levels[i] = rep
            rec = _recommend_levels(inst, levels)
            u = payoff(rec, i)
            if u > base and (best is None or u - base > best.gain):
                best = Exploit(model, i, rep, rec, rec, base, u)
    return AuditResult(model, best, checked)


def model3_exploit_search(inst: Instance, misreport_grid: Number) -> AuditResult:
    """Two-stage Model-3 search: misreport, then best-respond at submission.

    Non-deviators submit the recommendation; the deviator submits the low end
    of its exact best-response interval.  Truthful play means reporting the
    true levels and submitting the recommendation.
    """
    step = as_fraction(misreport_grid)
    if step <= 0:
        raise DomainError("misreport grid must be positive")
    values, _ = _misreport_space(inst, step)
    checked = _guard(inst, values)
    truth = truthful_reports(inst)
    rec0 = recommend(truth, inst)
    best: Exploit | None = None
    for i in range(inst.n):
        base = utility(inst, rec0, i)
        levels = [r.levels for r in truth]
        for rep in _monotone_reports(values, inst.max_rank(i)):
            levels[i] = rep
            rec = _recommend_levels(inst, levels)
            br, _ = best_response(inst, rec, i)
            sub = rec[:i] + (br,) + rec[i + 1 :]
            u = utility(inst, sub, i)
            if u > base and (best is None or u - base > best.gain):
                best = Exploit(3, i, rep, rec, sub, base, u)
    return AuditResult(3, best, checked)
