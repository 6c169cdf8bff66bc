"""Certification layer: local conditions, brute-force deviation and dominance
oracles, exact best responses and the extremality probe.

The oracles enumerate candidate strategies by definition (a rational grid plus
kink points) and evaluate utilities exactly; they never call the solvers.
Improvements must be strict, so weak equilibria with indifferences pass.
"""

from __future__ import annotations

import itertools
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass
from fractions import Fraction
from math import ceil, floor
from typing import Iterable, Sequence

import numpy as np

from ._scaled import ScaledGame
from .levels import k_level, min_k_level
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
    utilities,
)
from .result import all_ranks

GRID_LIMIT = 10**7


class GuardExceeded(FairexError):
    """An enumeration would exceed the configured size limit."""

    def __init__(self, required: int, limit: int = GRID_LIMIT):
        self.required = required
        self.limit = limit
        super().__init__(f"enumeration needs {required} points, limit is {limit}")


@dataclass(frozen=True)
class AgentSlack:
    agent: int
    total: Fraction
    k: int
    k_up: int
    upper_level: Fraction  # s^k: no profitable downward move while total <= this
    lower_level: Fraction  # min-level at k_up: no profitable upward move while total >= this

    @property
    def upper_slack(self) -> Fraction:
        return self.upper_level - self.total

    @property
    def lower_slack(self) -> Fraction:
        return self.total - self.lower_level


@dataclass(frozen=True)
class LocalReport:
    agents: tuple[AgentSlack, ...]

    @property
    def violations(self) -> list[tuple[int, str]]:
        out = []
        for a in self.agents:
            if a.lower_slack < 0:
                out.append((a.agent, "upward"))
            if a.upper_slack < 0:
                out.append((a.agent, "downward"))
        return out

    @property
    def passed(self) -> bool:
        return not self.violations


@dataclass(frozen=True)
class DeviationWitness:
    agent: int
    original: Fraction
    deviation: Fraction
    gain: Fraction


@dataclass(frozen=True)
class DominanceWitness:
    profile: Profile
    deltas: tuple[Fraction, ...]


@dataclass(frozen=True)
class ProbeResult:
    equilibria: tuple[tuple[Profile, Profile], ...]  # (X, T) pairs, sorted by X
    nonconvergent: int
    uncertified: int


def check_local_conditions(inst: Instance, x: Iterable[Number]) -> LocalReport:
    """Per-agent one-sided conditions on totals, with exact slacks.

    Upward moves gain ``k_up`` units per unit collected, so they are strictly
    unprofitable iff the right slope at ``t`` is at most ``c / k_up``, i.e.
    ``t >= min_k_level(k_up)``.  Downward moves lose ``k`` units per unit, so
    they are unprofitable iff ``t <= k_level(k)``.
    """
    if inst.discrete:
        raise DomainError("local conditions are for the continuous game; use deviation_oracle")
    prof = as_profile(inst, x)
    t = total_data(inst, prof)
    rows = []
    for i, (a, rp) in enumerate(zip(inst.agents, all_ranks(inst, prof))):
        rows.append(AgentSlack(i, t[i], rp.k, rp.k_up, k_level(a, rp.k), min_k_level(a, rp.k_up)))
    return LocalReport(tuple(rows))


def collection_for_total(inst: Instance, x: Sequence[Fraction], i: int, target: Fraction) -> Fraction:
    """Smallest own collection giving agent ``i`` total ``target`` against ``x``."""
    vals = sorted(x[j] for j in inst.neighbors(i))
    d = len(vals)
    below = Fraction(0)
    lo = Fraction(0)
    for k in range(d + 1):
        hi = vals[k] if k < d else None
        y = (target - below) / (d - k + 1)
        if y < lo:
            return lo
        if hi is None or y <= hi:
            return y
        below += vals[k]
        lo = hi
    raise AssertionError("unreachable")


def deviation_bound(inst: Instance, x: Sequence[Fraction]) -> Fraction:
    top = max(k_level(a, inst.max_rank(i)) for i, a in enumerate(inst.agents))
    return 2 * (top + max(x, default=Fraction(0)))


def grid_points(bound: Fraction, step: Fraction) -> list[Fraction]:
    count = floor(bound / step) + 1
    if count > GRID_LIMIT:
        raise GuardExceeded(count)
    return [k * step for k in range(count)]


def _kinks(inst: Instance, x: Sequence[Fraction], i: int) -> set[Fraction]:
    a = inst.agents[i]
    pts = {Fraction(0), x[i]}
    pts.update(x[j] for j in inst.neighbors(i))
    for bp in a.benefit.breakpoints:
        pts.add(collection_for_total(inst, x, i, bp))
    for K in range(1, inst.max_rank(i) + 1):
        pts.add(k_level(a, K))
        pts.add(min_k_level(a, K))
    return pts


def _candidates(inst: Instance, x: Sequence[Fraction], i: int, grid: list[Fraction] | None, bound: Fraction) -> list[Fraction]:
    if inst.discrete:
        return [Fraction(v) for v in range(floor(bound) + 1)]
    pts = set(grid or ())
    pts.update(_kinks(inst, x, i))
    return sorted(pts)


def deviation_oracle(
    inst: Instance, x: Iterable[Number], grid_step: Number | None = None
) -> DeviationWitness | None:
    """Enumerate unilateral deviations; return ``None`` if none strictly helps.

    Continuous mode probes the grid ``{0, step, ...}`` up to the deviation bound
    plus every kink of the deviator's payoff (neighbours' collections and the
    collections that land its total on a benefit breakpoint) and all level
    values.  Discrete mode probes every integer up to the bound.  The witness
    is the deviator's best probed move, for the lowest-id agent that has one.
    """
    prof = as_profile(inst, x)
    step = None if grid_step is None else as_fraction(grid_step)
    if step is not None and step <= 0:
        raise DomainError("grid step must be positive")
    if step is None and not inst.discrete:
        raise DomainError("continuous oracle needs a grid step")
    bound = deviation_bound(inst, prof)
    grid = None if inst.discrete else grid_points(bound, step)
    cands = [_candidates(inst, prof, i, grid, bound) for i in range(inst.n)]
    allvals = set(prof)
    for c in cands:
        allvals.update(c)
    game = ScaledGame(inst, allvals, bound)
    xs = game.ints(prof)[None, :]
    for i in range(inst.n):
        own = game.ints(cands[i])
        T = game.totals(i, own, np.broadcast_to(xs, (len(own), inst.n)))
        U = game.utility(i, own, T)
        cur = game.utility(i, xs[:, i], game.totals(i, xs[:, i], xs))[0]
        if not (U > cur).any():
            continue
        y = cands[i][int(np.argmax(U))]
        gain = _own_utility(inst, prof, i, y) - _own_utility(inst, prof, i, prof[i])
        assert gain > 0
        return DeviationWitness(i, prof[i], y, gain)
    return None


def _own_utility(inst: Instance, x: Sequence[Fraction], i: int, y: Fraction) -> Fraction:
    a = inst.agents[i]
    return a.benefit(total_for(inst, x, i, y)) - a.cost * y


def best_response(inst: Instance, x: Iterable[Number], i: int) -> tuple[Fraction, Fraction]:
    """Exact best-response interval ``[lo, hi]`` of agent ``i`` against ``x``.

    The payoff is concave piecewise linear in own collection, so its maximum
    is attained on a segment between consecutive kinks.  In discrete mode the
    interval is over integers.
    """
    prof = as_profile(inst, x)
    a = inst.agents[i]
    if inst.discrete:
        top = ceil(max(a.benefit.satiation, max(prof))) + 1
        pts = [Fraction(v) for v in range(top + 1)]
    else:
        pts = sorted({Fraction(0)} | {prof[j] for j in inst.neighbors(i)}
                     | {collection_for_total(inst, prof, i, bp) for bp in a.benefit.breakpoints})
    vals = [_own_utility(inst, prof, i, y) for y in pts]
    best = max(vals)
    hits = [y for y, v in zip(pts, vals) if v == best]
    return hits[0], hits[-1]


def extremality_probe(
    inst: Instance, restarts: int, seed: int, grid_step: Number = Fraction(1, 8)
) -> ProbeResult:
    """Seeded best-response dynamics from random profiles.

    Agents move in a random order each pass; an agent already best-responding
    stays put, otherwise it jumps to the low or high end of its best-response
    interval at random.  Runs that reach a fixed point within ``10 n`` passes
    are certified with :func:`deviation_oracle`.
    """
    if inst.discrete:
        raise DomainError("the probe runs on the continuous game")
    rng = random.Random(seed)
    n = inst.n
    top = max(a.benefit.satiation for a in inst.agents)
    scale = 8
    found: dict[Profile, Profile] = {}
    nonconvergent = uncertified = 0
    for _ in range(restarts):
        x = [Fraction(rng.randint(0, int(ceil(top)) * scale), scale) for _ in range(n)]
        converged = False
        for _pass in range(10 * n):
            moved = False
            for i in rng.sample(range(n), n):
                lo, hi = best_response(inst, x, i)
                if lo <= x[i] <= hi:
                    continue
                x[i] = lo if rng.random() < 0.5 else hi
                moved = True
            if not moved:
                converged = True
                break
        if not converged:
            nonconvergent += 1
            continue
        prof = tuple(x)
        if deviation_oracle(inst, prof, grid_step) is not None:
            uncertified += 1
            continue
        found[prof] = total_data(inst, prof)
    eqs = tuple(sorted(found.items()))
    return ProbeResult(eqs, nonconvergent, uncertified)


def _scan_values(inst: Instance, x_ref: Profile, grid_step: Fraction | None) -> list[Fraction]:
    bound = deviation_bound(inst, x_ref)
    if inst.discrete:
        return [Fraction(v) for v in range(floor(bound) + 1)]
    vals = set(grid_points(bound, grid_step))
    vals.update(x_ref)
    for i, a in enumerate(inst.agents):
        for K in range(1, inst.max_rank(i) + 1):
            for s in (k_level(a, K), min_k_level(a, K)):
                vals.add(s)
                vals.add(s / K)
    return sorted(vals)


def _scan_chunk(args) -> int | None:
    inst, values, ref_scaled, game, lead_range = args
    n = inst.n
    arr = game.ints(values)
    tail = min(n, 2)
    lead = n - tail
    mesh = np.array(np.meshgrid(*([arr] * tail), indexing="ij")).reshape(tail, -1).T
    block = len(mesh)
    lead_iter = itertools.product(range(len(values)), repeat=lead)
    for pos, lead_idx in enumerate(lead_iter):
        if pos < lead_range[0]:
            continue
        if pos >= lead_range[1]:
            break
        X = np.empty((block, n), dtype=game.dtype)
        for c, k in enumerate(lead_idx):
            X[:, c] = arr[k]
        X[:, lead:] = mesh
        ge = np.ones(block, dtype=bool)
        gt = np.zeros(block, dtype=bool)
        for i in range(n):
            U = game.utility(i, X[:, i], game.totals(i, X[:, i], X))
            ge &= U >= ref_scaled[i]
            gt |= U > ref_scaled[i]
        hit = np.flatnonzero(ge & gt)
        if hit.size:
            return pos * block + int(hit[0])
    return None


def pareto_scan(
    inst: Instance, x_ref: Iterable[Number], grid_step: Number | None = None, jobs: int = 1
) -> DominanceWitness | None:
    """Search all grid profiles for one that Pareto-dominates ``x_ref``.

    Candidate coordinates are the grid up to the deviation bound plus
    ``x_ref``'s entries and every level value (and level / K); discrete mode
    uses all integers up to the bound.  The first dominating profile in
    lexicographic order is returned, whatever ``jobs`` is.
    """
    ref = as_profile(inst, x_ref)
    step = None if grid_step is None else as_fraction(grid_step)
    if not inst.discrete and (step is None or step <= 0):
        raise DomainError("continuous scan needs a positive grid step")
    values = _scan_values(inst, ref, step)
    size = len(values) ** inst.n
    if size > GRID_LIMIT:
        raise GuardExceeded(size)
    game = ScaledGame(inst, set(values) | set(ref), max(values))
    refs = game.ints(ref)[None, :]
    ref_scaled = [game.utility(i, refs[:, i], game.totals(i, refs[:, i], refs))[0] for i in range(inst.n)]
    lead_total = len(values) ** max(inst.n - 2, 0)
    if jobs <= 1 or lead_total == 1:
        hit = _scan_chunk((inst, values, ref_scaled, game, (0, lead_total)))
    else:
        cuts = np.linspace(0, lead_total, jobs + 1).astype(int)
        tasks = [(inst, values, ref_scaled, game, (int(a), int(b))) for a, b in zip(cuts, cuts[1:])]
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            hits = [h for h in pool.map(_scan_chunk, tasks) if h is not None]
        hit = min(hits) if hits else None
    if hit is None:
        return None
    idx = []
    for _ in range(inst.n):
        hit, r = divmod(hit, len(values))
        idx.append(r)
    prof = tuple(values[k] for k in reversed(idx))
    before = utilities(inst, ref)
    after = utilities(inst, prof)
    deltas = tuple(b - a for a, b in zip(before, after))
    assert all(d >= 0 for d in deltas) and any(d > 0 for d in deltas)
    return DominanceWitness(prof, deltas)
