"""Domain types and primitive evaluations for the fair data-exchange game.

Every quantity is an exact :class:`fractions.Fraction`. Agents are addressed by
position ``0..n-1`` in all operations; :attr:`AgentSpec.id` is the external
label used in reports and instance files, and ids must be strictly increasing
so that "lowest id" and "lowest position" tie-breaks coincide.
"""

from __future__ import annotations

from bisect import bisect_right
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Iterable, NamedTuple, Sequence, Union

Number = Union[int, Fraction, str]
Profile = tuple[Fraction, ...]

CONTINUOUS = "continuous"
DISCRETE = "discrete"


class FairexError(Exception):
    """Base class for all errors raised by this package."""


class DomainError(FairexError, ValueError):
    """An argument lies outside the domain of an operation."""


class InvalidInstance(FairexError, ValueError):
    pass


class InvalidProfile(FairexError, ValueError):
    pass


def as_fraction(value: Number) -> Fraction:
    """Convert ``value`` to an exact Fraction.

    Accepts ints, Fractions and strings such as ``"3/5"`` or ``"0.25"``.
    Floats are refused because they rarely carry the value the caller meant.
    """
    if isinstance(value, bool):
        raise TypeError("booleans are not data amounts")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError) as exc:
            raise ValueError(f"not an exact number: {value!r}") from exc
    if isinstance(value, float):
        raise TypeError(f"float {value!r} is not exact; pass a string or Fraction")
    raise TypeError(f"cannot convert {type(value).__name__} to Fraction")


@dataclass(frozen=True)
class BenefitFunction:
    """Concave, nondecreasing piecewise-linear value of data with ``b(0) = 0``.

    Segment ``k`` starts at ``breakpoints[k]`` and has slope ``slopes[k]``; the
    last slope is 0, so the last breakpoint is the satiation point.
    Build instances with :meth:`from_segments` or :meth:`capped_linear`.
    """

    breakpoints: tuple[Fraction, ...]
    slopes: tuple[Fraction, ...]
    values: tuple[Fraction, ...] = field(repr=False, compare=False, default=())

    def __post_init__(self) -> None:
        bps, slopes = self.breakpoints, self.slopes
        if not bps or len(bps) != len(slopes):
            raise InvalidInstance("benefit needs matching breakpoints and slopes")
        if bps[0] != 0:
            raise InvalidInstance("first breakpoint must be 0")
        for a, b in zip(bps, bps[1:]):
            if not a < b:
                raise InvalidInstance("breakpoints must be strictly increasing")
        for m in slopes:
            if m < 0:
                raise InvalidInstance("slopes must be nonnegative")
        for m0, m1 in zip(slopes, slopes[1:]):
            if not m1 < m0:
                raise InvalidInstance("slopes must be strictly decreasing")
        if slopes[-1] != 0:
            raise InvalidInstance("final slope must be 0 (benefit must saturate)")
        vals = [Fraction(0)]
        for k in range(1, len(bps)):
            vals.append(vals[-1] + slopes[k - 1] * (bps[k] - bps[k - 1]))
        object.__setattr__(self, "values", tuple(vals))

    @classmethod
    def from_segments(cls, segments: Iterable[tuple[Number, Number]]) -> "BenefitFunction":
        """Build from ``(breakpoint, slope)`` pairs, merging equal adjacent slopes."""
        bps: list[Fraction] = []
        slopes: list[Fraction] = []
        for t, m in segments:
            t, m = as_fraction(t), as_fraction(m)
            if bps and t <= bps[-1]:
                raise InvalidInstance(
                    f"breakpoint {t} does not increase past {bps[-1]}"
                )
            if slopes and m == slopes[-1]:
                continue
            bps.append(t)
            slopes.append(m)
        return cls(tuple(bps), tuple(slopes))

    @classmethod
    def capped_linear(cls, slope: Number, cap: Number) -> "BenefitFunction":
        """``b(t) = slope * min(t, cap)``."""
        slope, cap = as_fraction(slope), as_fraction(cap)
        if slope == 0 or cap == 0:
            return cls((Fraction(0),), (Fraction(0),))
        return cls((Fraction(0), cap), (slope, Fraction(0)))

    @property
    def satiation(self) -> Fraction:
        return self.breakpoints[-1]

    def segments(self) -> list[tuple[Fraction, Fraction]]:
        return list(zip(self.breakpoints, self.slopes))

    def _segment(self, t: Fraction) -> int:
        if t < 0:
            raise DomainError(f"data amount must be nonnegative, got {t}")
        return bisect_right(self.breakpoints, t) - 1

    def __call__(self, t: Number) -> Fraction:
        t = as_fraction(t)
        k = self._segment(t)
        return self.values[k] + self.slopes[k] * (t - self.breakpoints[k])

    def right_derivative(self, t: Number) -> Fraction:
        return self.slopes[self._segment(as_fraction(t))]


def eval_benefit(b: BenefitFunction, t: Number) -> Fraction:
    return b(t)


def right_derivative(b: BenefitFunction, t: Number) -> Fraction:
    return b.right_derivative(t)


@dataclass(frozen=True)
class AgentSpec:
    id: int
    cost: Fraction
    benefit: BenefitFunction

    def __post_init__(self) -> None:
        object.__setattr__(self, "cost", as_fraction(self.cost))
        if self.cost <= 0:
            raise InvalidInstance(f"agent {self.id}: cost must be positive")


@dataclass(frozen=True)
class Instance:
    """Agent roster plus an optional undirected exchange graph.

    ``edges`` holds position pairs ``(i, j)`` with ``i < j``; ``None`` means
    the complete graph.
    """

    agents: tuple[AgentSpec, ...]
    edges: frozenset[tuple[int, int]] | None = None
    mode: str = CONTINUOUS
    _nbrs: tuple[tuple[int, ...], ...] | None = field(repr=False, compare=False, default=None)

    def __post_init__(self) -> None:
        agents = tuple(self.agents)
        object.__setattr__(self, "agents", agents)
        if not agents:
            raise InvalidInstance("an instance needs at least one agent")
        ids = [a.id for a in agents]
        if any(b <= a for a, b in zip(ids, ids[1:])):
            raise InvalidInstance("agent ids must be strictly increasing")
        if self.mode not in (CONTINUOUS, DISCRETE):
            raise InvalidInstance(f"unknown mode {self.mode!r}")
        n = len(agents)
        if self.edges is None:
            object.__setattr__(self, "_nbrs", None)
            return
        norm: set[tuple[int, int]] = set()
        for e in self.edges:
            i, j = e
            if i == j:
                raise InvalidInstance(f"self-loop at position {i}")
            if not (0 <= i < n and 0 <= j < n):
                raise InvalidInstance(f"edge {e} references an unknown agent")
            norm.add((min(i, j), max(i, j)))
        object.__setattr__(self, "edges", frozenset(norm))
        adj: list[list[int]] = [[] for _ in range(n)]
        for i, j in norm:
            adj[i].append(j)
            adj[j].append(i)
        object.__setattr__(self, "_nbrs", tuple(tuple(sorted(a)) for a in adj))

    @classmethod
    def build(
        cls,
        agents: Sequence[tuple[Number, BenefitFunction]],
        edges: Iterable[tuple[int, int]] | None = None,
        mode: str = CONTINUOUS,
        first_id: int = 1,
    ) -> "Instance":
        """Convenience constructor: ``agents`` are ``(cost, benefit)`` pairs,
        ids are assigned from ``first_id`` and ``edges`` use positions."""
        specs = tuple(
            AgentSpec(first_id + k, as_fraction(c), b) for k, (c, b) in enumerate(agents)
        )
        return cls(specs, None if edges is None else frozenset(map(tuple, edges)), mode)

    @property
    def n(self) -> int:
        return len(self.agents)

    @property
    def is_complete(self) -> bool:
        if self._nbrs is None:
            return True
        n = self.n
        return all(len(nb) == n - 1 for nb in self._nbrs)

    @property
    def discrete(self) -> bool:
        return self.mode == DISCRETE

    def neighbors(self, i: int) -> tuple[int, ...]:
        if self._nbrs is None:
            return tuple(j for j in range(self.n) if j != i)
        return self._nbrs[i]

    def degree(self, i: int) -> int:
        if self._nbrs is None:
            return self.n - 1
        return len(self._nbrs[i])

    def max_rank(self, i: int) -> int:
        """Largest meaningful rank parameter for agent ``i`` (degree + 1)."""
        return self.degree(i) + 1

    def position(self, agent_id: int) -> int:
        for k, a in enumerate(self.agents):
            if a.id == agent_id:
                return k
        raise KeyError(agent_id)

    def with_graph(self, edges: Iterable[tuple[int, int]] | None) -> "Instance":
        return Instance(self.agents, None if edges is None else frozenset(edges), self.mode)

    def with_mode(self, mode: str) -> "Instance":
        return Instance(self.agents, self.edges, mode)


class RankPair(NamedTuple):
    k: int
    k_up: int


def as_profile(inst: Instance, x: Iterable[Number]) -> Profile:
    """Validate and normalise a collection profile for ``inst``."""
    prof = tuple(as_fraction(v) for v in x)
    if len(prof) != inst.n:
        raise InvalidProfile(f"profile has {len(prof)} entries, instance has {inst.n} agents")
    for i, v in enumerate(prof):
        if v < 0:
            raise InvalidProfile(f"agent {inst.agents[i].id}: negative collection {v}")
        if inst.discrete and v.denominator != 1:
            raise InvalidProfile(f"agent {inst.agents[i].id}: {v} is not integral")
    return prof


def total_for(inst: Instance, x: Sequence[Fraction], i: int, xi: Fraction | None = None) -> Fraction:
    """Total data of agent ``i`` when it collects ``xi`` (default ``x[i]``)."""
    own = x[i] if xi is None else xi
    return own + sum((min(own, x[j]) for j in inst.neighbors(i)), Fraction(0))


def total_data(inst: Instance, x: Iterable[Number]) -> Profile:
    prof = as_profile(inst, x)
    return tuple(total_for(inst, prof, i) for i in range(inst.n))


def utility(inst: Instance, x: Iterable[Number], i: int) -> Fraction:
    prof = as_profile(inst, x)
    agent = inst.agents[i]
    return agent.benefit(total_for(inst, prof, i)) - agent.cost * prof[i]


def utilities(inst: Instance, x: Iterable[Number]) -> Profile:
    prof = as_profile(inst, x)
    return tuple(
        a.benefit(total_for(inst, prof, i)) - a.cost * prof[i]
        for i, a in enumerate(inst.agents)
    )


def ranks(inst: Instance, x: Iterable[Number], i: int) -> RankPair:
    """Weak and strict rank counts of agent ``i`` among itself and its neighbours."""
    prof = as_profile(inst, x)
    xi = prof[i]
    nb = inst.neighbors(i)
    k = 1 + sum(1 for j in nb if prof[j] >= xi)
    k_up = 1 + sum(1 for j in nb if prof[j] > xi)
    return RankPair(k, k_up)
