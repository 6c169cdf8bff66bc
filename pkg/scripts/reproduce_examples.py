"""Re-check every bundled example and print what each one demonstrates.

    python scripts/reproduce_examples.py
"""

from __future__ import annotations

from fractions import Fraction

from fairex.corpus import example_names, load_example
from fairex.model import utilities
from fairex.verifier import deviation_oracle


def show(x) -> str:
    return "(" + ", ".join(str(v) for v in x) + ")"


def pretty(value) -> str:
    if isinstance(value, dict):
        return "{" + ", ".join(f"{k}: {pretty(v)}" for k, v in value.items()) + "}"
    if isinstance(value, (tuple, list)):
        return "(" + ", ".join(pretty(v) for v in value) + ")"
    return str(value)


def main() -> None:
    for name in example_names():
        ex = load_example(name)
        inst = ex.instance
        print(f"== {name}")
        print(f"   {ex.note}")
        grid = None if inst.discrete else Fraction(1, 4)
        for key, x in ex.profiles.items():
            w = deviation_oracle(inst, x, grid) if grid else deviation_oracle(inst, x)
            if w is None:
                verdict = "equilibrium"
            else:
                verdict = f"agent {inst.agents[w.agent].id} deviates {w.original} -> {w.deviation} (gain {w.gain})"
            print(f"   {key:>22} x={show(x)}  U={show(utilities(inst, x))}  {verdict}")
        for key, value in ex.expectations.items():
            print(f"   expect {key}: {pretty(value)}")


if __name__ == "__main__":
    main()
