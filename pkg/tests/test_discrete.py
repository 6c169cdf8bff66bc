from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fairex.corpus import load_example
from fairex.discrete import next_group, solve_discrete
from fairex.model import BenefitFunction, DomainError, Instance, utility
from fairex.verifier import deviation_oracle
from strategies import instances


def pair(cap):
    return Instance.build([(1, BenefitFunction.capped_linear(2, cap))] * 2, mode="discrete")


def exhaustive_ne(inst, x, top):
    """Every integer deviation in 0..top, straight from the utility definition."""
    for i in range(inst.n):
        base = utility(inst, x, i)
        for y in range(top + 1):
            z = list(x)
            z[i] = F(y)
            if utility(inst, z, i) > base:
                return (i, y)
    return None


def test_cap9_pair_group_passes_at_floor_plus_one():
    inst = pair(9)
    g = next_group(inst, [0, 1], {}, 0)
    assert g.floor == 4 and g.members == (0, 1)
    r = solve_discrete(inst)
    assert r.x == (5, 5)
    assert exhaustive_ne(inst, r.x, 20) is None


def test_cap8_pair_fixes_deviator_at_floor():
    inst = pair(8)
    r = solve_discrete(inst)
    assert r.x == (4, 4)
    assert r.order == (0, 1)
    assert exhaustive_ne(inst, r.x, 20) is None


def test_cap9_pair_witness_at_4_4():
    w = deviation_oracle(pair(9), (4, 4))
    assert (w.agent, w.original, w.deviation, w.gain) == (0, 4, 5, 1)


def test_example_d2_equilibrium():
    ex = load_example("discrete_incomparable")
    r = solve_discrete(ex.instance)
    assert r.x == ex.profiles["x2"] == (1, 1, 5, 5, 5, 100)
    assert deviation_oracle(ex.instance, r.x) is None


def test_overshooting_profile_fails_and_corrected_profile_passes():
    ex = load_example("discrete_incomparable")
    w = deviation_oracle(ex.instance, ex.profiles["x1_overshoot"])
    assert ex.instance.agents[w.agent].id == 6
    assert (w.original, w.deviation) == (100, 99)
    assert w.gain == 1 - F(1, 1000)
    assert deviation_oracle(ex.instance, ex.profiles["x1"]) is None


def test_domain_errors():
    with pytest.raises(DomainError):
        solve_discrete(Instance.build([(1, BenefitFunction.capped_linear(2, 9))] * 2))
    with pytest.raises(DomainError):
        solve_discrete(pair(9).with_graph([]))


@given(instances(n_max=5, discrete=True))
def test_discrete_output_is_exact_ne(inst):
    r = solve_discrete(inst)
    assert all(v.denominator == 1 for v in r.x)
    top = int(2 * max(max(r.x), max(a.benefit.satiation for a in inst.agents))) + 2
    assert exhaustive_ne(inst, r.x, top) is None
    assert deviation_oracle(inst, r.x) is None


@given(instances(n_max=6, discrete=True))
def test_floors_nondecreasing(inst):
    r = solve_discrete(inst)
    seq = [r.x[j] for j in r.order]
    assert seq == sorted(seq)


@given(instances(n_min=2, n_max=5, discrete=True), st.lists(st.integers(0, 12), min_size=5, max_size=5), st.integers(0, 4))
def test_discrete_gains_nonincreasing(inst, xs, pick):
    i = pick % inst.n
    x = [F(v) for v in xs[: inst.n]]
    gains = []
    for y in range(20):
        lo, hi = list(x), list(x)
        lo[i], hi[i] = F(y), F(y + 1)
        gains.append(utility(inst, hi, i) - utility(inst, lo, i))
    assert all(a >= b for a, b in zip(gains, gains[1:]))
