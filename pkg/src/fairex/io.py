"""JSON instance files and report serialisation.

Instance format (UTF-8 JSON)::

    {"mode": "continuous" | "discrete",
     "agents": [{"id": 1, "cost": "1", "benefit": [["0", "10"], ["10", "0"]]}, ...],
     "edges": [[1, 2], ...],              # optional; agent ids; omitted = complete
     "profiles": {"name": ["6", "4"], ...}}  # optional pinned profiles

Numbers may be JSON integers, decimal literals, or strings holding an integer,
decimal or ``"p/q"`` fraction; decimals are converted exactly.  Every error
names the offending field path (``agents[1].benefit[0][1]``) or, for JSON
syntax errors, the line and column.
"""

from __future__ import annotations

import json
from fractions import Fraction
from pathlib import Path
from typing import Any, Mapping

from .model import (
    CONTINUOUS,
    DISCRETE,
    AgentSpec,
    BenefitFunction,
    FairexError,
    Instance,
    InvalidInstance,
)


class ParseError(FairexError, ValueError):
    def __init__(self, where: str, message: str):
        self.where = where
        super().__init__(f"{where}: {message}")


def _number(value: Any, where: str) -> Fraction:
    if isinstance(value, bool):
        raise ParseError(where, "expected a number, got a boolean")
    if isinstance(value, Fraction):
        return value
    if isinstance(value, int):
        return Fraction(value)
    if isinstance(value, str):
        try:
            return Fraction(value.strip())
        except (ValueError, ZeroDivisionError):
            raise ParseError(where, f"not an exact number: {value!r}") from None
    raise ParseError(where, f"expected a number, got {type(value).__name__}")


def _integer(value: Any, where: str) -> int:
    v = _number(value, where)
    if v.denominator != 1:
        raise ParseError(where, f"expected an integer, got {v}")
    return int(v)


def _loads(text: str, source: str) -> Any:
    try:
        return json.loads(text, parse_float=Fraction)
    except json.JSONDecodeError as exc:
        raise ParseError(f"{source}:{exc.lineno}:{exc.colno}", exc.msg) from None


def _benefit(raw: Any, where: str) -> BenefitFunction:
    if not isinstance(raw, list) or not raw:
        raise ParseError(where, "expected a non-empty list of [breakpoint, slope] pairs")
    pairs = []
    for k, seg in enumerate(raw):
        if not isinstance(seg, list) or len(seg) != 2:
            raise ParseError(f"{where}[{k}]", "expected a [breakpoint, slope] pair")
        pairs.append((_number(seg[0], f"{where}[{k}][0]"), _number(seg[1], f"{where}[{k}][1]")))
    try:
        return BenefitFunction.from_segments(pairs)
    except InvalidInstance as exc:
        raise ParseError(where, str(exc)) from None


def instance_from_dict(doc: Any) -> tuple[Instance, dict[str, tuple[Fraction, ...]]]:
    """Build an instance and its pinned profiles from a decoded document."""
    if not isinstance(doc, dict):
        raise ParseError("$", "top level must be an object")
    unknown = set(doc) - {"mode", "agents", "edges", "profiles"}
    if unknown:
        raise ParseError("$", f"unknown field(s): {', '.join(sorted(unknown))}")
    mode = doc.get("mode", CONTINUOUS)
    if mode not in (CONTINUOUS, DISCRETE):
        raise ParseError("mode", f"expected 'continuous' or 'discrete', got {mode!r}")
    raw_agents = doc.get("agents")
    if not isinstance(raw_agents, list) or not raw_agents:
        raise ParseError("agents", "expected a non-empty list")
    specs: list[AgentSpec] = []
    for k, ra in enumerate(raw_agents):
        where = f"agents[{k}]"
        if not isinstance(ra, dict):
            raise ParseError(where, "expected an object")
        for key in ("id", "cost", "benefit"):
            if key not in ra:
                raise ParseError(f"{where}.{key}", "missing")
        extra = set(ra) - {"id", "cost", "benefit"}
        if extra:
            raise ParseError(where, f"unknown field(s): {', '.join(sorted(extra))}")
        aid = _integer(ra["id"], f"{where}.id")
        cost = _number(ra["cost"], f"{where}.cost")
        if cost <= 0:
            raise ParseError(f"{where}.cost", "cost must be positive")
        specs.append(AgentSpec(aid, cost, _benefit(ra["benefit"], f"{where}.benefit")))
    ids = [a.id for a in specs]
    if len(set(ids)) != len(ids):
        raise ParseError("agents", "duplicate agent id")
    specs.sort(key=lambda a: a.id)
    pos = {a.id: p for p, a in enumerate(specs)}

    edges = None
    if doc.get("edges") is not None:
        raw_edges = doc["edges"]
        if not isinstance(raw_edges, list):
            raise ParseError("edges", "expected a list of [id, id] pairs")
        seen: set[tuple[int, int]] = set()
        for k, e in enumerate(raw_edges):
            where = f"edges[{k}]"
            if not isinstance(e, list) or len(e) != 2:
                raise ParseError(where, "expected an [id, id] pair")
            a, b = (_integer(e[0], f"{where}[0]"), _integer(e[1], f"{where}[1]"))
            for v, w in ((a, f"{where}[0]"), (b, f"{where}[1]")):
                if v not in pos:
                    raise ParseError(w, f"unknown agent id {v}")
            if a == b:
                raise ParseError(where, f"self-loop on agent {a}")
            key = (min(pos[a], pos[b]), max(pos[a], pos[b]))
            if key in seen:
                raise ParseError(where, f"duplicate edge {a}-{b}")
            seen.add(key)
        edges = frozenset(seen)
    inst = Instance(tuple(specs), edges, mode)

    profiles: dict[str, tuple[Fraction, ...]] = {}
    raw_prof = doc.get("profiles") or {}
    if not isinstance(raw_prof, dict):
        raise ParseError("profiles", "expected an object mapping names to profiles")
    for name, vals in raw_prof.items():
        profiles[name] = parse_profile_value(vals, inst, f"profiles.{name}")
    return inst, profiles


def parse_profile_value(vals: Any, inst: Instance, where: str = "profile") -> tuple[Fraction, ...]:
    if not isinstance(vals, list):
        raise ParseError(where, "expected a list of numbers")
    if len(vals) != inst.n:
        raise ParseError(where, f"expected {inst.n} entries, got {len(vals)}")
    out = tuple(_number(v, f"{where}[{k}]") for k, v in enumerate(vals))
    for k, v in enumerate(out):
        if v < 0:
            raise ParseError(f"{where}[{k}]", "collections must be nonnegative")
        if inst.discrete and v.denominator != 1:
            raise ParseError(f"{where}[{k}]", "discrete instances need integer collections")
    return out


def loads_instance(text: str, source: str = "<string>"):
    return instance_from_dict(_loads(text, source))


def load_instance(path: str | Path):
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ParseError(str(p), exc.strerror or "cannot read file") from None
    return loads_instance(text, str(p))


def loads_profile(text: str, inst: Instance, source: str = "profile") -> tuple[Fraction, ...]:
    return parse_profile_value(_loads(text, source), inst, source)


# ----------------------------------------------------------------- output


def frac(v: Fraction) -> str:
    """``"p/q"`` (or ``"p"`` for integers)."""
    return str(v)


def instance_to_dict(inst: Instance, profiles: Mapping[str, tuple[Fraction, ...]] | None = None) -> dict:
    ids = [a.id for a in inst.agents]
    doc: dict[str, Any] = {
        "mode": inst.mode,
        "agents": [
            {
                "id": a.id,
                "cost": frac(a.cost),
                "benefit": [[frac(t), frac(m)] for t, m in a.benefit.segments()],
            }
            for a in inst.agents
        ],
    }
    if inst.edges is not None:
        doc["edges"] = [[ids[i], ids[j]] for i, j in sorted(inst.edges)]
    if profiles:
        doc["profiles"] = {k: [frac(v) for v in x] for k, x in profiles.items()}
    return doc


def dumps(doc: Any) -> str:
    """Deterministic JSON: Fractions as strings, insertion key order kept."""

    def default(o):
        if isinstance(o, Fraction):
            return frac(o)
        raise TypeError(f"cannot serialise {type(o).__name__}")

    return json.dumps(doc, indent=2, default=default, ensure_ascii=False)
