"""Named instances for every worked example and counterexample.

Each entry pairs an instance with the outcomes it is expected to produce.
Nothing here is trusted: the test-suite recomputes every expectation from
scratch with the solvers, verifier and mechanism.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from fractions import Fraction
from types import MappingProxyType
from typing import Any, Callable, Mapping

from .model import DISCRETE, BenefitFunction, FairexError, Instance, Profile

EPSILON = Fraction(1, 1000)


class UnknownExample(FairexError, KeyError):
    def __init__(self, name: str):
        self.name = name
        super().__init__(f"unknown example {name!r}; known: {', '.join(example_names())}")

    def __str__(self) -> str:  # KeyError would repr() the message
        return self.args[0]


@dataclass(frozen=True)
class NamedExample:
    name: str
    instance: Instance
    profiles: Mapping[str, Profile] = field(default_factory=dict)
    expectations: Mapping[str, Any] = field(default_factory=dict)
    note: str = ""


def _p(*vals) -> Profile:
    return tuple(Fraction(v) for v in vals)


def _collection_space_not_supermodular() -> NamedExample:
    b = BenefitFunction.capped_linear(1 + EPSILON, 10)
    inst = Instance.build([(1, b), (1, b)])
    return NamedExample(
        "collection_space_not_supermodular",
        inst,
        profiles={"partner_5": _p(0, 5), "partner_0": _p(0, 0)},
        expectations={"best_response": {"partner_5": _p(5, 5), "partner_0": _p(10, 10)}},
        note="Agent 1 wants 10 units in total; its best response falls from 10 to 5 "
        "when its partner raises collection from 0 to 5.",
    )


def _model3_counterexample() -> NamedExample:
    inst = Instance.build(
        [
            (1, BenefitFunction.capped_linear(10, 10)),
            (1, BenefitFunction.capped_linear(Fraction(5, 2), 8)),
        ]
    )
    return NamedExample(
        "model3_counterexample",
        inst,
        profiles={"recommended": _p(6, 4), "misreport_recommended": _p(0, 8), "exploit": _p(5, 8)},
        expectations={
            "recommend_truthful": _p(6, 4),
            "recommend_zero_report": _p(0, 8),
            "totals_truthful": _p(10, 8),
            "truthful_utility": Fraction(94),
            "exploit_utility": Fraction(95),
            "exploit_agent": 1,
            "exploit_gain": Fraction(1),
        },
        note="Threshold utilities 100*1{t>=10} and 20*1{t>=8} as concave surrogates. "
        "Reporting zero levels moves the recommendation to (0,8); submitting 5 "
        "instead then earns 95 > 94 when the recommendation is not enforced.",
    )


def _discrete_nonmonotone_br() -> NamedExample:
    b = BenefitFunction.capped_linear(1 + EPSILON, 11)
    inst = Instance.build([(1, b)] * 3, mode=DISCRETE)
    return NamedExample(
        "discrete_nonmonotone_br",
        inst,
        profiles={"low": _p(0, 0, 6), "high": _p(0, 1, 7)},
        expectations={"best_response": {"low": (6, 12), "high": (5, 11)}},
        note="Agent 1 targets 11 units; against (0,6) it needs 6 (total 12), against "
        "(1,7) only 5 (total 11). Others' benefits are not used by the check.",
    )


def _discrete_incomparable() -> NamedExample:
    low = BenefitFunction.capped_linear(Fraction(1, 6), 6)
    mid = BenefitFunction.capped_linear(1 + EPSILON, 22)
    top = BenefitFunction.from_segments([(0, 1 + EPSILON), (117, EPSILON), (200, 0)])
    inst = Instance.build([(1, low), (1, low), (1, mid), (1, mid), (1, mid), (1, top)], mode=DISCRETE)
    return NamedExample(
        "discrete_incomparable",
        inst,
        profiles={
            "x2": _p(1, 1, 5, 5, 5, 100),
            "x1_overshoot": _p(0, 0, 6, 6, 6, 100),
            "x1": _p(0, 0, 6, 6, 6, 99),
        },
        expectations={
            "equilibria": ("x2", "x1"),
            "not_equilibrium": {"x1_overshoot": {"agent": 6, "from": 100, "to": 99}},
            "incomparable": ("x1", "x2"),
        },
        note="epsilon = 1/1000 (any 0 < epsilon < 1/24 keeps every strict inequality). "
        "Agent 6's top slope epsilon is cut off at 200 so the benefit saturates; "
        "no profile examined reaches 200. Against (0,0,6,6,6) agent 6 needs only "
        "99 to reach 117, so the profile with 100 is not an equilibrium.",
    )


def _graph_incomparable_derived() -> NamedExample:
    half = BenefitFunction.capped_linear(Fraction(1, 2), 20)
    inst = Instance.build(
        [
            (1, BenefitFunction.capped_linear(2, 12)),
            (1, half),
            (1, half),
            (1, BenefitFunction.capped_linear(Fraction(3, 4), 20)),
        ],
        edges=[(0, 1), (0, 2), (1, 3)],
    )
    return NamedExample(
        "graph_incomparable_derived",
        inst,
        profiles={"even": _p(4, 4, 4, 4), "skewed": _p(6, 6, 0, 6), "solver": _p(4, 8, 4, 8)},
        expectations={
            "equilibria": ("even", "skewed", "solver"),
            "utilities": {
                "even": _p(20, 2, 0, 2),
                "skewed": _p(18, 3, 0, 3),
                "solver": _p(20, 2, 0, 4),
            },
            "incomparable": (("even", "skewed"), ("solver", "skewed")),
            "solve_graph": _p(4, 8, 4, 8),
        },
        note="Hub 1 wants exactly 12 units from its neighbours 2 and 3; agent 4 hangs "
        "off agent 2. Shifting the hub's supply from agent 3 to agent 2 costs the "
        "hub 2 but raises agents 2 and 4. Found by hand and certified with the "
        "exact best-response check; scripts/find_graph_incomparable.py runs the "
        "random search that motivated it.",
    )


_REGISTRY: dict[str, Callable[[], NamedExample]] = {
    "collection_space_not_supermodular": _collection_space_not_supermodular,
    "model3_counterexample": _model3_counterexample,
    "discrete_nonmonotone_br": _discrete_nonmonotone_br,
    "discrete_incomparable": _discrete_incomparable,
    "graph_incomparable_derived": _graph_incomparable_derived,
}

REGISTRY = MappingProxyType(_REGISTRY)


def example_names() -> list[str]:
    return sorted(_REGISTRY)


def load_example(name: str) -> NamedExample:
    try:
        make = _REGISTRY[name]
    except KeyError:
        raise UnknownExample(name) from None
    return make()
