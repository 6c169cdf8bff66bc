"""Seeded random instances for experiments, benchmarks and test suites."""

from __future__ import annotations

import random
from dataclasses import dataclass
from fractions import Fraction

from .model import CONTINUOUS, DISCRETE, BenefitFunction, Instance


@dataclass(frozen=True)
class InstanceConfig:
    n_max: int = 8
    n_min: int = 1
    max_segments: int = 4
    value_lo: Fraction = Fraction(1, 4)  # range of positive slopes and costs
    value_hi: Fraction = Fraction(8)
    value_denominator: int = 4
    breakpoint_max: int = 12
    breakpoint_denominator: int = 2
    edge_probability: float = 0.5
    discrete: bool = False


def _value(rng: random.Random, cfg: InstanceConfig) -> Fraction:
    d = cfg.value_denominator
    lo, hi = int(cfg.value_lo * d), int(cfg.value_hi * d)
    return Fraction(rng.randint(lo, hi), d)


def random_benefit(rng: random.Random, cfg: InstanceConfig) -> BenefitFunction:
    """Concave benefit with 1..max_segments positive-slope segments, then flat."""
    k = rng.randint(1, cfg.max_segments)
    slopes = sorted({_value(rng, cfg) for _ in range(k)}, reverse=True)
    d = cfg.breakpoint_denominator
    cuts = sorted(rng.sample(range(1, cfg.breakpoint_max * d + 1), len(slopes)))
    bps = [Fraction(0)] + [Fraction(c, d) for c in cuts[:-1]]
    segs = list(zip(bps, slopes)) + [(Fraction(cuts[-1], d), Fraction(0))]
    return BenefitFunction.from_segments(segs)


def random_instance(rng: random.Random, cfg: InstanceConfig = InstanceConfig(), n: int | None = None) -> Instance:
    n = n if n is not None else rng.randint(cfg.n_min, cfg.n_max)
    agents = [(_value(rng, cfg), random_benefit(rng, cfg)) for _ in range(n)]
    return Instance.build(agents, mode=DISCRETE if cfg.discrete else CONTINUOUS)


def random_graph(rng: random.Random, n: int, p: float) -> list[tuple[int, int]]:
    return [(i, j) for i in range(n) for j in range(i + 1, n) if rng.random() < p]


def random_graph_instance(rng: random.Random, cfg: InstanceConfig = InstanceConfig()) -> Instance:
    inst = random_instance(rng, cfg)
    return inst.with_graph(random_graph(rng, inst.n, cfg.edge_probability))


def benchmark_instance(n: int, seed: int = 0) -> Instance:
    """Large instance with three positive integer-breakpoint segments per agent.

    Integer breakpoints and small slope denominators keep the rational
    arithmetic of the solvers from blowing up, so timing reflects the
    algorithm rather than bignum growth.
    """
    rng = random.Random(seed)
    agents = []
    for _ in range(n):
        s = sorted(rng.sample(range(1, 33), 3), reverse=True)
        c = sorted(rng.sample(range(1, 10 * n), 3))
        segs = [(0, Fraction(s[0], 4)), (c[0], Fraction(s[1], 4)), (c[1], Fraction(s[2], 4)), (c[2], 0)]
        agents.append((Fraction(rng.randint(1, 8), 8), BenefitFunction.from_segments(segs)))
    return Instance.build(agents)
