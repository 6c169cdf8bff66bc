"""Bijection between collection profiles and total-data profiles (complete graph)."""

from __future__ import annotations

from fractions import Fraction

import gmpy2
from typing import Iterable, Sequence

from .model import FairexError, Number, Profile, as_fraction


class InfeasibleTotalProfile(FairexError, ValueError):
    """A total-data vector is not the image of any collection profile."""

    def __init__(self, rank: int, agent: int, reason: str):
        self.rank = rank
        self.agent = agent
        super().__init__(f"rank {rank} (agent position {agent}): {reason}")


def _coprime_fraction(num: int, den: int) -> Fraction:
    """Fraction from an already-reduced pair, skipping the second gcd."""
    make = getattr(Fraction, "_from_coprime_ints", None)
    if make is not None:
        return make(num, den)
    try:
        return Fraction(num, den, _normalize=False)
    except TypeError:
        return Fraction(num, den)


def _sorted_order(values: Sequence[Fraction]) -> list[int]:
    return sorted(range(len(values)), key=lambda i: (values[i], i))


def phi_forward(x: Iterable[Number]) -> Profile:
    """``t_i = x_i + sum_{j != i} min(x_i, x_j)`` via one sort."""
    xs = [as_fraction(v) for v in x]
    n = len(xs)
    t: list[Fraction] = [Fraction(0)] * n
    prefix = Fraction(0)
    for rank, i in enumerate(_sorted_order(xs)):
        # everyone from this rank upward collects at least x_i
        t[i] = prefix + (n - rank) * xs[i]
        prefix += xs[i]
    return tuple(t)


def phi_inverse(t: Iterable[Number]) -> Profile:
    """Recover the collection profile whose fair-exchange totals are ``t``.

    In sorted order ``t_(r) = P_(r-1) + (n - r + 1) x_(r)`` with ``P`` the
    prefix sum of collections, which telescopes to
    ``x_(r+1) = x_(r) + (t_(r+1) - t_(r)) / (n - r)`` and ``x_(1) = t_(1) / n``.
    The running value is kept as an integer numerator over a common
    denominator that only ever gains small factors, so each step costs a few
    big-by-small multiplications; every output is normalised once with a
    GMP gcd (the denominators reach thousands of digits at ``n = 10^4``).

    Raises :class:`InfeasibleTotalProfile` naming the first rank at which the
    recovered collection is negative or breaks the sorted order (with sorted
    totals only a negative smallest total can do either).
    """
    ts = [as_fraction(v) for v in t]
    n = len(ts)
    x: list[Fraction] = [Fraction(0)] * n
    order = _sorted_order(ts)
    num, den = gmpy2.mpz(0), gmpy2.mpz(1)  # current collection num / den
    last_t = Fraction(0)
    for rank, i in enumerate(order):
        step = ts[i] - last_t  # >= 0 past the first rank: totals are sorted
        if step < 0:
            raise InfeasibleTotalProfile(rank + 1, i, f"recovered collection {ts[i] / n} is negative")
        if not step and rank:  # tied with the previous rank
            x[i] = x[order[rank - 1]]
            continue
        if step:
            m = step.denominator * (n - rank)
            scale = m // gmpy2.gcd(den, m)
            num = num * scale + step.numerator * (den * scale // m)
            den *= scale
        g = gmpy2.gcd(num, den)
        x[i] = _coprime_fraction(int(num // g), int(den // g))
        last_t = ts[i]
    return tuple(x)
