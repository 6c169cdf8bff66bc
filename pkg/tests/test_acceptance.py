"""Acceptance criteria, one test each.

Every test records a PASS/FAIL line through the ``acceptance`` fixture; the
lines are printed together at the end of the pytest run.  Instances come from
fixed seeds, so the numbers are reproducible run to run (timings aside).
"""

from __future__ import annotations

import json
import random
import time
from fractions import Fraction as F

import pytest

from fairex.cli import main as cli_main
from fairex.continuous import solve_max, solve_min
from fairex.corpus import load_example
from fairex.discrete import solve_discrete
from fairex.generate import InstanceConfig, benchmark_instance, random_graph, random_instance
from fairex.graph import solve_graph
from fairex.io import dumps, instance_to_dict
from fairex.mechanism import Report, audit_truthfulness, model3_exploit_search, realize, recommend, truthful_reports
from fairex.transforms import phi_forward, phi_inverse
from fairex.verifier import (
    best_response,
    check_local_conditions,
    deviation_bound,
    deviation_oracle,
    extremality_probe,
    pareto_scan,
)

SUITE_CFG = InstanceConfig(n_max=8, max_segments=4)
SMALL_CFG = InstanceConfig(n_max=3, max_segments=3, breakpoint_max=6)
DISCRETE_CFG = InstanceConfig(n_max=3, max_segments=3, breakpoint_max=5, breakpoint_denominator=1, discrete=True)


def suite_instances():
    rng = random.Random(20240401)
    return [random_instance(rng, SUITE_CFG) for _ in range(200)]


def _report(acceptance, number, ok, detail):
    acceptance(number, ok, detail)
    print(f"[{'PASS' if ok else 'FAIL'}] AC{number}: {detail}")
    assert ok, detail


def test_ac1_model3_counterexample(acceptance):
    start = time.perf_counter()
    inst = load_example("model3_counterexample").instance
    truth = truthful_reports(inst)
    rec = recommend(truth, inst)
    rec0 = recommend([Report(0, (F(0),) * inst.max_rank(0)), truth[1]], inst)
    u_truth = realize(1, inst, rec, rec).utilities[0]
    br, _ = best_response(inst, rec0, 0)
    u_exploit = realize(3, inst, rec0, (br,) + rec0[1:]).utilities[0]
    clean = audit_truthfulness(inst, 1, F(1, 2)).clean and audit_truthfulness(inst, 2, F(1, 2)).clean
    m3 = model3_exploit_search(inst, F(1, 2))
    secs = time.perf_counter() - start
    ok = (
        rec == (6, 4)
        and rec0 == (0, 8)
        and u_truth == 94
        and u_exploit == 95
        and clean
        and m3.exploit is not None
        and m3.exploit.gain == 1
        and secs < 1
    )
    _report(
        acceptance, 1, ok,
        f"rec={tuple(map(str, rec))} rec0={tuple(map(str, rec0))} U1={u_truth} U3={u_exploit} "
        f"M1/M2 clean={clean} M3 gain={m3.exploit.gain if m3.exploit else None} ({secs:.2f}s < 1s)",
    )


def test_ac2_discrete_example(acceptance):
    start = time.perf_counter()
    ex = load_example("discrete_incomparable")
    inst = ex.instance
    solved = solve_discrete(inst).x
    ne_x2 = deviation_oracle(inst, ex.profiles["x2"]) is None
    ne_x1 = deviation_oracle(inst, ex.profiles["x1"]) is None
    w = deviation_oracle(inst, ex.profiles["x1_overshoot"])
    secs = time.perf_counter() - start
    witness_ok = w is not None and inst.agents[w.agent].id == 6 and (w.original, w.deviation) == (100, 99)
    ok = solved == (1, 1, 5, 5, 5, 100) and ne_x2 and ne_x1 and witness_ok and secs < 5
    _report(
        acceptance, 2, ok,
        f"solve_discrete={tuple(map(int, solved))} NE(1,1,5,5,5,100)={ne_x2} NE(0,0,6,6,6,99)={ne_x1} "
        f"witness vs (0,0,6,6,6,100): agent {inst.agents[w.agent].id if w else '-'} "
        f"{w.original if w else '-'}->{w.deviation if w else '-'} ({secs:.2f}s < 5s)",
    )


def test_ac3_nonmonotone_best_response(acceptance):
    ex = load_example("collection_space_not_supermodular")
    br5 = best_response(ex.instance, (0, 5), 0)
    br0 = best_response(ex.instance, (0, 0), 0)
    ok = br5 == (5, 5) and br0 == (10, 10)
    _report(acceptance, 3, ok, f"BR(5)={br5[0]} BR(0)={br0[0]} (exact, unique)")


def test_ac4_ne_certification(acceptance):
    start = time.perf_counter()
    failures = []
    for k, inst in enumerate(suite_instances()):
        for r in (solve_max(inst), solve_min(inst)):
            if not check_local_conditions(inst, r.x).passed:
                failures.append((k, r.kind, "local"))
            if deviation_oracle(inst, r.x, F(1, 8)) is not None:
                failures.append((k, r.kind, "oracle"))
    secs = time.perf_counter() - start
    ok = not failures and secs < 60
    _report(acceptance, 4, ok, f"400 outputs on 200 instances, failures={len(failures)} {failures[:3]} ({secs:.1f}s < 60s)")


def test_ac5_extremality(acceptance):
    violations = []
    found = nonconv = uncert = 0
    for k, inst in enumerate(suite_instances()):
        hi, lo = solve_max(inst).t, solve_min(inst).t
        res = extremality_probe(inst, 16, seed=k)
        nonconv += res.nonconvergent
        uncert += res.uncertified
        for _, t in res.equilibria:
            found += 1
            if not all(a <= v <= b for a, v, b in zip(lo, t, hi)):
                violations.append(k)
    ok = not violations
    _report(
        acceptance, 5, ok,
        f"{found} probe equilibria, violations of Tmin<=T<=Tmax={len(violations)} "
        f"(non-convergent runs {nonconv}, uncertified {uncert})",
    )


def test_ac6_global_pareto(acceptance):
    rng = random.Random(6)
    hits = {"max": 0, "graph": 0, "discrete": 0}
    bounds = []
    for _ in range(50):
        inst = random_instance(rng, SMALL_CFG)
        if pareto_scan(inst, solve_max(inst).x, F(1, 4)) is not None:
            hits["max"] += 1
    for _ in range(50):
        inst = random_instance(rng, SMALL_CFG)
        inst = inst.with_graph(random_graph(rng, inst.n, 0.5))
        if pareto_scan(inst, solve_graph(inst).x, F(1, 4)) is not None:
            hits["graph"] += 1
    for _ in range(50):
        inst = random_instance(rng, DISCRETE_CFG)
        x = solve_discrete(inst).x
        bounds.append(deviation_bound(inst, x))
        if pareto_scan(inst, x) is not None:
            hits["discrete"] += 1
    ok = not any(hits.values()) and max(bounds) <= 20
    _report(acceptance, 6, ok, f"witnesses {hits} over 3x50 instances (delta=1/4; discrete bound max {max(bounds)} <= 20)")


def test_ac7_transform_round_trip(acceptance):
    rng = random.Random(7)
    failures = 0
    for _ in range(1000):
        n = rng.randint(1, 12)
        x = tuple(F(rng.randint(0, 60), rng.randint(1, 9)) for _ in range(n))
        if rng.random() < 0.3:  # force ties
            x = tuple(x[rng.randrange(n)] if rng.random() < 0.5 else v for v in x)
        if sorted(phi_inverse(phi_forward(x))) != sorted(x) or phi_inverse(phi_forward(x)) != x:
            failures += 1
    _report(acceptance, 7, failures == 0, f"1000 profiles (n<=12, ~30% with ties), failures={failures}")


def test_ac8_graph_consistency(acceptance):
    rng = random.Random(8)
    mismatches = 0
    for _ in range(100):
        inst = random_instance(rng, SUITE_CFG)
        full = [(i, j) for i in range(inst.n) for j in range(i + 1, inst.n)]
        if solve_graph(inst.with_graph(full)).x != solve_max(inst).x:
            mismatches += 1
    _report(acceptance, 8, mismatches == 0, f"solve_graph(complete) == solve_max on 100 instances, mismatches={mismatches}")


def test_ac9_truthfulness(acceptance, tmp_path, capsys):
    rng = random.Random(9)
    exploits = {1: 0, 2: 0}
    for _ in range(50):
        inst = random_instance(rng, SMALL_CFG)
        for model in (1, 2):
            if not audit_truthfulness(inst, model, F(1, 2)).clean:
                exploits[model] += 1
    ex = load_example("model3_counterexample")
    path = tmp_path / "model3.json"
    path.write_text(dumps(instance_to_dict(ex.instance)))
    code = cli_main(["audit", "--model", "3", "--instance", str(path)])
    doc = json.loads(capsys.readouterr().out)
    ok = exploits == {1: 0, 2: 0} and code == 2 and doc["exploit"]["gain"] == "1"
    _report(
        acceptance, 9, ok,
        f"exploits over 50 instances M1={exploits[1]} M2={exploits[2]}; model-3 CLI exit {code}, gain {doc['exploit']['gain']}",
    )


def _timed(n: int, repeats: int = 2) -> float:
    inst = benchmark_instance(n, seed=n)
    best = float("inf")
    for _ in range(repeats):
        start = time.perf_counter()
        solve_max(inst)
        best = min(best, time.perf_counter() - start)
    return best


@pytest.mark.slow
def test_ac10_performance(acceptance):
    times = {n: _timed(n) for n in (2500, 5000, 10000)}
    r1, r2 = times[5000] / times[2500], times[10000] / times[5000]
    ok = times[10000] < 10 and r1 <= 5 and r2 <= 5
    _report(
        acceptance, 10, ok,
        f"n=2500 {times[2500]:.2f}s, 5000 {times[5000]:.2f}s, 10000 {times[10000]:.2f}s (< 10s); "
        f"doubling ratios {r1:.2f}, {r2:.2f} (<= 5)",
    )
