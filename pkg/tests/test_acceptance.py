"""Exit criteria of the package, one test per criterion.

Each test records a PASS/FAIL line that pytest prints in an "acceptance
criteria" section of the terminal summary.
"""
import time

import numpy as np
import pytest

from momentbounds import kernels
from momentbounds.bounds import argmax_F, bound1, bound2, f, f_prime, min_gap_over_grid, minorant_at, report
from momentbounds.cli import main
from momentbounds.extremal import epsilon_sweep, sharp_scan, three_atom_search
from momentbounds.measures import dirac, make_atomic
from momentbounds.verify import SweepConfig, property_sweep

from conftest import ACCEPTANCE_LINES


def record(number: int, ok: bool, detail: str) -> None:
    ACCEPTANCE_LINES.append(f"[{'PASS' if ok else 'FAIL'}] criterion {number}: {detail} ({kernels.BACKEND})")
    assert ok, detail


def violations(report_, names):
    return [v for v in report_.violations if v[1] in names]


@pytest.fixture(scope="module")
def sweep():
    start = time.perf_counter()
    result = property_sweep(SweepConfig(seed=1, trials=10_000, max_atoms=8, atom_margin=1e-3))
    return result, time.perf_counter() - start


def test_criterion_1_bound1_sweep(sweep):
    result, elapsed = sweep
    bad = violations(result, {"bound1_holds", "bound1_above_half"})
    ok = result.trials_run == 10_000 and not bad and elapsed < 10.0
    record(1, ok, f"{result.trials_run} measures, {len(bad)} bound1 violations, "
                  f"worst slack {result.worst_slack['bound1_holds']:.3g}, {elapsed:.2f}s < 10s")


def test_criterion_2_bound2_sweep(sweep):
    result, _ = sweep
    applicable = result.counters["bound2_applicable"]
    bad = violations(result, {"bound2_holds", "bound2_strict"})
    ok = applicable > 9000 and not bad and result.counters["strict_checked"] > 0
    record(2, ok, f"{applicable} applicable, {result.counters['strict_checked']} strictness checks, "
                  f"{len(bad)} violations")


def test_criterion_3_ec2_and_chain(sweep):
    result, _ = sweep
    names = {"ec2", "ec2_strict", "EA_unit", "EUA2_expansion", "schwarz", "chain_order_S", "chain_order_bound2"}
    bad = violations(result, names)
    worst = min(result.worst_slack[n] for n in names if result.worst_slack[n] is not None)
    record(3, not bad, f"{len(bad)} chain/ec2 violations over 10000 measures, worst slack {worst:.3g}")


def test_criterion_4_maximiser():
    ms = np.linspace(-0.98, 0.98, 50)
    ts = np.linspace(0.0, 0.98, 50)
    start = time.perf_counter()
    worst = 0.0
    for m in ms.tolist():
        for t in ts.tolist():
            worst = max(worst, abs(argmax_F(m, t * (1 - m) * (1 + m)) - m))
    elapsed = time.perf_counter() - start
    record(4, worst <= 1e-8 and elapsed < 5.0, f"max |argmax_F - m| = {worst:.3g} <= 1e-8, {elapsed:.2f}s < 5s")


def test_criterion_5_minorant_domination():
    start = time.perf_counter()
    centers = np.linspace(-0.999, 0.999, 1001)
    xs = np.linspace(-0.9999, 0.9999, 100_001)
    gap, _ = min_gap_over_grid(centers, xs)
    tangency = 0.0
    for c in centers.tolist():
        q = minorant_at(c)
        tangency = max(tangency, abs(q(c) - f(c)), abs(q.derivative(c) - f_prime(c)))
    elapsed = time.perf_counter() - start
    ok = gap.min() >= -1e-12 and tangency <= 1e-13 and elapsed < 30.0
    record(5, ok, f"min gap {gap.min():.3g} >= -1e-12, tangency residual {tangency:.3g} <= 1e-13, "
                  f"{elapsed:.2f}s < 30s")


def test_criterion_6_optimal_constant():
    eps = [1e-2, 1e-4, 1e-6]
    excess = epsilon_sweep(eps).column("S_minus_half")
    closed = (1 - 1e-2) / (2 - 1e-2) + 1e-2 - 0.5
    ok = all(0 < e < x for e, x in zip(excess, eps)) and abs(excess[0] - closed) <= 1e-10
    ok = ok and abs(excess[0] - 0.0074874371859296) <= 1e-10
    record(6, ok, f"S(eps) - 1/2 = {', '.join(f'{e:.6g}' for e in excess)}")


def test_criterion_7_oracle_consistency():
    start = time.perf_counter()
    two = sharp_scan(0.0, 0.25, 100_000)
    three = three_atom_search(0.0, 0.25, 50)
    elapsed = time.perf_counter() - start
    b1, b2 = bound1(0.0, 0.25), bound2(1.0, 0.25)
    ok = (
        abs(two.inf_estimate - 7 / 6) <= 1e-4
        and not two.attained
        and b1 < two.inf_estimate and b2 < two.inf_estimate
        and abs(b1 - 1.03125) <= 1e-15 and abs(b2 - 8 / 7) <= 1e-15
        and three.inf_estimate <= two.inf_estimate + 1e-9
        and elapsed < 60.0
    )
    record(7, ok, f"two-point inf {two.inf_estimate:.10f} vs 7/6, attained={two.attained}, "
                  f"three-atom {three.inf_estimate:.10f}, {elapsed:.2f}s < 60s")


def test_criterion_8_closed_forms():
    r0 = report(dirac(0.0))
    r1 = report(make_atomic([-0.5, 0.5], [0.5, 0.5]))
    ok = (
        abs(r0.S - 1) <= 1e-12 and abs(r0.bound1 - 1) <= 1e-12 and abs(r0.bound2 - 1) <= 1e-12
        and abs(r1.S - 4 / 3) <= 1e-12 and abs(r1.bound1 - 1.03125) <= 1e-12
        and abs(r1.bound2 - 8 / 7) <= 1e-12
    )
    record(8, ok, f"delta_0 -> ({r0.S}, {r0.bound1}, {r0.bound2}); two-point -> "
                  f"({r1.S!r}, {r1.bound1!r}, {r1.bound2!r})")


def test_criterion_9_determinism(tmp_path):
    outputs = []
    for k in range(2):
        path = tmp_path / f"run{k}.json"
        code = main(["verify", "--seed", "1", "--trials", "10000", "--max-atoms", "8",
                     "--no-timing", "--output", str(path)])
        assert code == 0
        outputs.append(path.read_bytes())
    record(9, outputs[0] == outputs[1], f"two runs, {len(outputs[0])} bytes each, identical={outputs[0] == outputs[1]}")
