"""Command-line front end.

Exit status: 0 when a solve finishes or a check passes, 2 when a certified
violation, witness or exploit is found (it is included in the report), 1 on
usage and parse errors.
"""

from __future__ import annotations

import argparse
import os
import sys
import time
from fractions import Fraction
from pathlib import Path
from typing import Any, Callable, Sequence

from . import corpus
from .continuous import solve_max, solve_min
from .discrete import solve_discrete
from .graph import solve_graph
from .io import ParseError, dumps, frac, instance_to_dict, load_instance, loads_profile
from .mechanism import audit_truthfulness, model3_exploit_search
from .model import FairexError, Instance, total_data, utilities
from .result import EquilibriumResult
from .verifier import (
    GuardExceeded,
    check_local_conditions,
    deviation_oracle,
    extremality_probe,
    pareto_scan,
)

EXIT_OK, EXIT_ERROR, EXIT_WITNESS = 0, 1, 2
DEFAULT_ORACLE_GRID = Fraction(1, 8)
DEFAULT_AUDIT_GRID = Fraction(1, 2)


class UsageError(FairexError):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message: str):  # argparse would exit with 2, our "witness" code
        self.print_usage(sys.stderr)
        self.exit(EXIT_ERROR, f"{self.prog}: error: {message}\n")


def _fraction_arg(text: str) -> Fraction:
    try:
        v = Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not an exact number: {text!r}") from None
    if v <= 0:
        raise argparse.ArgumentTypeError("must be positive")
    return v


# ----------------------------------------------------------------- loading


class Context:
    def __init__(self, args: argparse.Namespace):
        self.args = args
        self.inst, self.profiles, self.source = self._load()

    def _load(self):
        a = self.args
        if getattr(a, "example", None):
            ex = corpus.load_example(a.example)
            return ex.instance, dict(ex.profiles), f"example:{ex.name}"
        if not getattr(a, "instance", None):
            raise UsageError("one of --instance or --example is required")
        inst, profiles = load_instance(a.instance)
        return inst, profiles, a.instance

    def profile(self) -> tuple[Fraction, ...]:
        spec = self.args.profile
        if spec is None:
            raise UsageError("--profile is required")
        s = spec.strip()
        if s.startswith("["):
            return loads_profile(s, self.inst, "--profile")
        if s in self.profiles:
            return self.profiles[s]
        p = Path(s)
        if p.is_file():
            return loads_profile(p.read_text(encoding="utf-8"), self.inst, str(p))
        known = ", ".join(sorted(self.profiles)) or "none"
        raise UsageError(f"--profile {spec!r}: not a JSON list, pinned profile ({known}) or file")

    def ids(self, xs: Sequence[int]) -> list[int]:
        return [self.inst.agents[i].id for i in xs]

    def aid(self, i: int) -> int:
        return self.inst.agents[i].id


def _vec(v) -> list[str]:
    return [frac(x) for x in v]


def _seed(args) -> int:
    env = os.environ.get("FAIREX_SEED")
    if env is not None:
        try:
            return int(env)
        except ValueError:
            raise UsageError(f"FAIREX_SEED must be an integer, got {env!r}") from None
    return args.seed


# ----------------------------------------------------------------- commands


def _solve_report(ctx: Context, res: EquilibriumResult) -> dict:
    return {
        "x": _vec(res.x),
        "t": _vec(res.t),
        "utilities": _vec(utilities(ctx.inst, res.x)),
        "order": ctx.ids(res.order),
        "diagnostics": [
            {
                "agent": ctx.aid(d.agent),
                "k": d.rank.k,
                "k_up": d.rank.k_up,
                "level": frac(d.level),
                "floor_bound": d.floor_bound,
            }
            for d in res.diagnostics
        ],
    }


def _solver(fn: Callable[[Instance], EquilibriumResult]):
    def run(ctx: Context) -> tuple[int, dict]:
        return EXIT_OK, _solve_report(ctx, fn(ctx.inst))

    return run


def _witness(ctx: Context, w) -> dict:
    return {
        "agent": ctx.aid(w.agent),
        "from": frac(w.original),
        "to": frac(w.deviation),
        "gain": frac(w.gain),
    }


def cmd_verify(ctx: Context) -> tuple[int, dict]:
    x = ctx.profile()
    out: dict[str, Any] = {"profile": _vec(x), "t": _vec(total_data(ctx.inst, x))}
    ok = True
    if not ctx.inst.discrete:
        rep = check_local_conditions(ctx.inst, x)
        out["local"] = {
            "passed": rep.passed,
            "agents": [
                {
                    "agent": ctx.aid(s.agent),
                    "k": s.k,
                    "k_up": s.k_up,
                    "upper_slack": frac(s.upper_slack),
                    "lower_slack": frac(s.lower_slack),
                }
                for s in rep.agents
            ],
            "violations": [{"agent": ctx.aid(i), "direction": d} for i, d in rep.violations],
        }
        ok = rep.passed
    grid = None if ctx.inst.discrete else (ctx.args.grid or DEFAULT_ORACLE_GRID)
    w = deviation_oracle(ctx.inst, x, grid)
    out["oracle"] = {"grid": None if grid is None else frac(grid), "witness": None if w is None else _witness(ctx, w)}
    ok = ok and w is None
    out["verdict"] = "equilibrium" if ok else "not an equilibrium"
    return (EXIT_OK if ok else EXIT_WITNESS), out


def cmd_oracle(ctx: Context) -> tuple[int, dict]:
    x = ctx.profile()
    grid = None if ctx.inst.discrete else (ctx.args.grid or DEFAULT_ORACLE_GRID)
    w = deviation_oracle(ctx.inst, x, grid)
    out = {
        "profile": _vec(x),
        "grid": None if grid is None else frac(grid),
        "witness": None if w is None else _witness(ctx, w),
    }
    return (EXIT_OK if w is None else EXIT_WITNESS), out


def _default_solution(inst: Instance) -> tuple[Fraction, ...]:
    if inst.discrete:
        return solve_discrete(inst).x
    if inst.is_complete:
        return solve_max(inst).x
    return solve_graph(inst).x


def cmd_pareto(ctx: Context) -> tuple[int, dict]:
    x = ctx.profile() if ctx.args.profile is not None else _default_solution(ctx.inst)
    grid = None if ctx.inst.discrete else (ctx.args.grid or Fraction(1, 4))
    w = pareto_scan(ctx.inst, x, grid, jobs=ctx.args.jobs)
    out = {
        "profile": _vec(x),
        "grid": None if grid is None else frac(grid),
        "witness": None if w is None else {"profile": _vec(w.profile), "gains": _vec(w.deltas)},
    }
    return (EXIT_OK if w is None else EXIT_WITNESS), out


def cmd_audit(ctx: Context) -> tuple[int, dict]:
    model = ctx.args.model
    grid = ctx.args.grid or DEFAULT_AUDIT_GRID
    res = (
        model3_exploit_search(ctx.inst, grid)
        if model == 3
        else audit_truthfulness(ctx.inst, model, grid)
    )
    ex = res.exploit
    out = {
        "model": model,
        "grid": frac(grid),
        "reports_checked": res.reports_checked,
        "exploit": None
        if ex is None
        else {
            "agent": ctx.aid(ex.agent),
            "report": _vec(ex.report),
            "recommended": _vec(ex.recommended),
            "submitted": _vec(ex.submitted),
            "truthful_utility": frac(ex.truthful_utility),
            "exploit_utility": frac(ex.exploit_utility),
            "gain": frac(ex.gain),
        },
    }
    return (EXIT_OK if res.clean else EXIT_WITNESS), out


def cmd_probe(ctx: Context) -> tuple[int, dict]:
    seed = _seed(ctx.args)
    res = extremality_probe(ctx.inst, ctx.args.restarts, seed, ctx.args.grid or DEFAULT_ORACLE_GRID)
    out: dict[str, Any] = {
        "seed": seed,
        "restarts": ctx.args.restarts,
        "equilibria": [{"x": _vec(x), "t": _vec(t)} for x, t in res.equilibria],
        "nonconvergent": res.nonconvergent,
        "uncertified": res.uncertified,
    }
    status = EXIT_OK
    if ctx.inst.is_complete:
        tmax, tmin = solve_max(ctx.inst).t, solve_min(ctx.inst).t
        bad = [
            _vec(x)
            for x, t in res.equilibria
            if not all(lo <= v <= hi for lo, v, hi in zip(tmin, t, tmax))
        ]
        out["t_min"], out["t_max"], out["outside_bounds"] = _vec(tmin), _vec(tmax), bad
        status = EXIT_WITNESS if bad else EXIT_OK
    return status, out


def cmd_example(args: argparse.Namespace) -> tuple[int, dict]:
    if args.list or not args.name:
        return EXIT_OK, {"examples": corpus.example_names()}
    ex = corpus.load_example(args.name)
    return EXIT_OK, instance_to_dict(ex.instance, ex.profiles)


COMMANDS: dict[str, tuple[Callable[[Context], tuple[int, dict]], str]] = {
    "solve-max": (_solver(solve_max), "maximal equilibrium (complete graph)"),
    "solve-min": (_solver(solve_min), "minimal equilibrium (complete graph)"),
    "solve-graph": (_solver(solve_graph), "graph-restricted equilibrium"),
    "solve-discrete": (_solver(solve_discrete), "integer equilibrium (complete graph)"),
    "verify": (cmd_verify, "local conditions plus deviation oracle for a profile"),
    "oracle": (cmd_oracle, "brute-force deviation oracle for a profile"),
    "pareto-scan": (cmd_pareto, "search grid profiles that Pareto-dominate a profile"),
    "audit": (cmd_audit, "search misreports that beat truthful reporting"),
    "probe": (cmd_probe, "seeded best-response dynamics, checked against T^min/T^max"),
}


# ----------------------------------------------------------------- output


def _table(cmd: str, out: dict) -> str:
    lines = [f"# {cmd}"]

    def emit(prefix: str, value: Any) -> None:
        if isinstance(value, dict):
            for k, v in value.items():
                emit(f"{prefix}.{k}" if prefix else k, v)
        elif isinstance(value, list) and value and isinstance(value[0], dict):
            keys = list(value[0])
            rows = [[str(_cell(r[k])) for k in keys] for r in value]
            widths = [max(len(k), *(len(r[c]) for r in rows)) for c, k in enumerate(keys)]
            lines.append(f"{prefix}:")
            lines.append("  " + "  ".join(k.rjust(w) for k, w in zip(keys, widths)))
            for r in rows:
                lines.append("  " + "  ".join(c.rjust(w) for c, w in zip(r, widths)))
        else:
            lines.append(f"{prefix} = {_cell(value)}")

    emit("", out)
    return "\n".join(lines)


def _cell(v: Any) -> str:
    if isinstance(v, list):
        return "(" + ", ".join(_cell(x) for x in v) + ")"
    if v is None:
        return "-"
    return str(v)


def build_parser() -> argparse.ArgumentParser:
    p = _Parser(prog="fairex", description="Pure equilibria of the fair data-exchange game.")
    sub = p.add_subparsers(dest="command", required=True, parser_class=_Parser)
    for name, (_, help_text) in COMMANDS.items():
        s = sub.add_parser(name, help=help_text, description=help_text)
        src = s.add_mutually_exclusive_group()
        src.add_argument("--instance", help="instance JSON file")
        src.add_argument("--example", choices=corpus.example_names(), help="built-in example")
        s.add_argument("--profile", help="inline JSON list, pinned profile name, or file")
        s.add_argument("--model", type=int, choices=(1, 2, 3), default=1)
        s.add_argument("--grid", type=_fraction_arg, help="grid step, e.g. 1/8")
        s.add_argument("--seed", type=int, default=0, help="overridden by FAIREX_SEED")
        s.add_argument("--restarts", type=int, default=16)
        s.add_argument("--jobs", type=int, default=1)
        s.add_argument("--format", choices=("json", "table"), default="json")
        s.add_argument("--timing", action="store_true", help="add wall-clock seconds to the report")
    e = sub.add_parser("example", help="export a built-in example as an instance file")
    e.add_argument("name", nargs="?", choices=corpus.example_names())
    e.add_argument("--list", action="store_true")
    e.add_argument("--format", choices=("json", "table"), default="json")
    return p


def main(argv: Sequence[str] | None = None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        start = time.perf_counter()
        if args.command == "example":
            status, body = cmd_example(args)
            out = body
        else:
            ctx = Context(args)
            status, body = COMMANDS[args.command][0](ctx)
            out = {"command": args.command, "source": ctx.source, "mode": ctx.inst.mode, **body}
            if args.timing:
                out["seconds"] = round(time.perf_counter() - start, 6)
    except GuardExceeded as exc:
        print(f"fairex: refused: {exc} (required {exc.required})", file=sys.stderr)
        return EXIT_ERROR
    except (ParseError, UsageError, FairexError, ValueError) as exc:
        print(f"fairex: error: {exc}", file=sys.stderr)
        return EXIT_ERROR
    text = dumps(out) if args.format == "json" else _table(args.command, out)
    print(text)
    return status


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
