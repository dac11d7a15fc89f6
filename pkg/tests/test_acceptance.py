"""Acceptance criteria, one test each.

Every test prints a single ``[PASS]``/``[FAIL]`` line with the measured
value against its pinned tolerance. Run ``pytest tests/test_acceptance.py -v -s``
to see the lines, or ``python3 tests/test_acceptance.py`` for the summary alone.
"""

import math
import sys
import time

import numpy as np
import pytest
from scipy.optimize import brentq

from cvmonogamy.fuzz import fuzz_monogamy
from cvmonogamy.gaussian import conditional_variance
from cvmonogamy.montecarlo import (
    empirical_conditional_variance,
    empirical_linear_variance,
    regression_conditional_variance,
    sample_wigner,
)
from cvmonogamy.network import MODE_A, MODE_B, MODE_C, CircuitParams, build_circuit, closed_form_report
from cvmonogamy.quantifiers import check_monogamy, duan_D, optimal_inference, steering_S_collective
from cvmonogamy.sweep import get_preset, run_sweep, to_csv

# pinned tolerances
C1_TOL, C1_R4_DIST, C1_SECONDS = 1e-10, 3.4e-4, 1.0
C2_TOL, C2_SECONDS = 1e-10, 1.0
C3_TOL, C3_SECONDS = 1e-10, 10.0
C4_GATE_R, C4_GATE_TOL, C4_R, C4_TOL = 2.0, 0.1, 3.0, 0.02
C5_TRIALS, C5_DEPTH, C5_RESIDUAL_TOL, C5_PRODUCT_TOL, C5_COLLECTIVE_TOL, C5_SECONDS = 10_000, 6, 1e-9, 1e-9, 1e-12, 60.0
C6_COUNT, C6_REG_REL, C6_BIN_REL, C6_SIGMAS, C6_SECONDS = 10**6, 0.01, 0.03, 3.0, 30.0
C7_TOL, C7_RESIDUAL_TOL = 1e-10, 1e-9
C8_TOL = 1e-10

X, P = 0.0, math.pi / 2


def report_line(name, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
    return ok


def circuit_report(params):
    return check_monogamy(build_circuit(params), MODE_B, MODE_A, MODE_C)


def test_c1_equal_loss_saturation():
    start = time.perf_counter()
    worst = 0.0
    for r in (0.5, 1.0, 2.0, 4.0):
        state = build_circuit(CircuitParams(r, 0.5, etaB=0.5))
        target = 0.5 * (1 + math.exp(-2 * r))
        worst = max(worst, abs(duan_D(state, MODE_B, MODE_A) - target), abs(duan_D(state, MODE_B, MODE_C) - target))
    d4 = duan_D(build_circuit(CircuitParams(4.0, 0.5, etaB=0.5)), MODE_B, MODE_A)
    elapsed = time.perf_counter() - start
    ok = worst <= C1_TOL and abs(d4 - 0.5) <= C1_R4_DIST and elapsed < C1_SECONDS
    assert report_line(
        "C1 equal-loss D saturation",
        ok,
        f"max|D - 0.5(1+e^-2r)| = {worst:.2e} (tol {C1_TOL:g}); |D(r=4) - 0.5| = {abs(d4 - 0.5):.3e} "
        f"(tol {C1_R4_DIST:g}); {elapsed:.3f} s (limit {C1_SECONDS:g} s)",
    )


def test_c2_collective_steering():
    start = time.perf_counter()
    worst = 0.0
    for r in np.linspace(0.0, 3.0, 5):
        for eta0 in np.linspace(0.1, 0.9, 4):
            s = steering_S_collective(build_circuit(CircuitParams(r, eta0)), MODE_B, [MODE_A, MODE_C])
            worst = max(worst, abs(s - 1 / math.cosh(2 * r)))
    elapsed = time.perf_counter() - start
    ok = worst <= C2_TOL and elapsed < C2_SECONDS
    assert report_line(
        "C2 collective steering 1/cosh 2r",
        ok,
        f"max abs error over 20 (r, eta0) points = {worst:.2e} (tol {C2_TOL:g}); {elapsed:.3f} s (limit {C2_SECONDS:g} s)",
    )


def c3_grids():
    """20x20 grid per scenario family. r stays within [0, 2]."""
    rs = np.linspace(0.0, 2.0, 20)
    unit = np.linspace(0.0, 1.0, 20)
    inner = np.linspace(0.05, 0.95, 20)
    return {
        "ideal": [CircuitParams(r, e) for r in rs for e in unit],
        "loss_B": [CircuitParams(r, 0.3, etaB=e) for r in rs for e in inner],
        "equal_loss": [CircuitParams(r, e, etaB=e) for r in rs for e in unit],
        "loss_AC": [CircuitParams(1.5, 0.4, etaA=a, etaC=c) for a in inner for c in inner],
        "thermal": [CircuitParams(r, 0.6, nB=n, nF=0.3) for r in rs for n in np.linspace(0.0, 3.0, 20)],
    }


def test_c3_closed_form_equivalence():
    start = time.perf_counter()
    worst = {}
    for family, grid in c3_grids().items():
        w = 0.0
        for params in grid:
            numeric = circuit_report(params).to_dict()
            oracle = closed_form_report(params).to_dict()
            w = max(w, max(abs(numeric[k] - oracle[k]) for k in numeric))
        worst[family] = w
    elapsed = time.perf_counter() - start
    ok = max(worst.values()) <= C3_TOL and elapsed < C3_SECONDS
    detail = ", ".join(f"{k} {v:.1e}" for k, v in worst.items())
    assert report_line(
        "C3 closed form vs constructive", ok, f"max|delta| per family: {detail} (tol {C3_TOL:g}); {elapsed:.2f} s (limit {C3_SECONDS:g} s)"
    )


def ent_bound_gap(r, num=181):
    """Largest relative gap (Ent_BA Ent_BC - M_B) / M_B over eta0 in [0.05, 0.95]."""
    worst, where = -math.inf, None
    for eta0 in np.linspace(0.05, 0.95, num):
        q = circuit_report(CircuitParams(r, eta0))
        gap = (q.Ent_BA * q.Ent_BC - q.M_B) / q.M_B
        if gap > worst:
            worst, where = gap, eta0
    return worst, where


def test_c4_ent_product_saturates_bound():
    gate, gate_at = ent_bound_gap(C4_GATE_R)
    tight, tight_at = ent_bound_gap(C4_R)
    gate_ok = gate <= C4_GATE_TOL
    ok = gate_ok and tight <= C4_TOL
    assert report_line(
        "C4 Ent product saturates M_B",
        ok,
        f"r={C4_GATE_R:g} gate: max rel gap {gate:.4f} at eta0={gate_at:.3f} (tol {C4_GATE_TOL:g}, "
        f"{'pass' if gate_ok else 'fail'}); r={C4_R:g}: max rel gap {tight:.4f} at eta0={tight_at:.3f} (tol {C4_TOL:g})",
    )


def test_c5_property_suite():
    start = time.perf_counter()
    report = fuzz_monogamy(C5_TRIALS, 0, C5_DEPTH)
    elapsed = time.perf_counter() - start
    res = min(report.min_residuals.values())
    prod = report.min_extras["steering_product"]
    coll = report.min_extras["collective_gain"]
    ok = (
        report.trials == C5_TRIALS
        and not report.nonphysical
        and res >= -C5_RESIDUAL_TOL
        and prod >= -C5_PRODUCT_TOL
        and coll >= -C5_COLLECTIVE_TOL
        and elapsed < C5_SECONDS
    )
    assert report_line(
        "C5 property suite",
        ok,
        f"{report.trials} states, min residual {res:.3e} (tol -{C5_RESIDUAL_TOL:g}), "
        f"min S_BA S_BC - 1 = {prod:.3e} (tol -{C5_PRODUCT_TOL:g}), min S_single - S_coll = {coll:.3e} "
        f"(tol -{C5_COLLECTIVE_TOL:g}), steering fraction {report.steering_fraction:.2f}; "
        f"{elapsed:.1f} s (limit {C5_SECONDS:g} s)",
    )


def test_c6_monte_carlo_oracle():
    start = time.perf_counter()
    state = build_circuit(CircuitParams(1.0, 0.5))
    batch = sample_wigner(state, C6_COUNT, 0)
    reg_worst = bin_worst = 0.0
    sigma_ok = True
    for quad in (X, P):
        target = (MODE_B, quad)
        for steerers in ([MODE_A], [MODE_C], [MODE_A, MODE_C]):
            exact, angles = optimal_inference(state, target, steerers)
            conds = list(zip(steerers, angles))
            reg = regression_conditional_variance(batch, target, conds)
            binned, se = empirical_conditional_variance(batch, target, conds, return_stderr=True)
            reg_worst = max(reg_worst, abs(reg / exact - 1))
            bin_worst = max(bin_worst, abs(binned / exact - 1))
            # binning bias is non-negative
            sigma_ok &= binned >= exact - C6_SIGMAS * se
        # a linear estimator never beats the optimal one
        angle = optimal_inference(state, target, [MODE_A])[1][0]
        cond, cse = regression_conditional_variance(batch, target, [(MODE_A, angle)], return_stderr=True)
        for g in np.linspace(-3, 3, 61):
            v, vse = empirical_linear_variance(batch, target, (MODE_A, angle), g)
            sigma_ok &= v >= cond - C6_SIGMAS * math.hypot(vse, cse)
        # adding a conditioner never hurts
        both_angles = optimal_inference(state, target, [MODE_A, MODE_C])[1]
        both, bse = regression_conditional_variance(
            batch, target, list(zip([MODE_A, MODE_C], both_angles)), return_stderr=True
        )
        sigma_ok &= both <= cond + C6_SIGMAS * math.hypot(bse, cse)
    elapsed = time.perf_counter() - start
    ok = reg_worst <= C6_REG_REL and bin_worst <= C6_BIN_REL and sigma_ok and elapsed < C6_SECONDS
    assert report_line(
        "C6 Monte Carlo oracle",
        ok,
        f"regression max rel err {reg_worst:.4f} (tol {C6_REG_REL:g}), binned {bin_worst:.4f} (tol {C6_BIN_REL:g}), "
        f"{C6_SIGMAS:g}-sigma inequalities {'hold' if sigma_ok else 'FAIL'}; {elapsed:.1f} s (limit {C6_SECONDS:g} s)",
    )


def test_c7_thermal_crossover():
    r = 1.0

    def excess(n):
        s = build_circuit(CircuitParams(r, 0.5, nB=n, nF=n))
        return steering_S_collective(s, MODE_B, [MODE_A, MODE_C]) - 1.0

    crossing = brentq(excess, 0.0, 3.0, xtol=1e-14, rtol=4 * np.finfo(float).eps)
    expected = (math.cosh(2 * r) - 1) / 2
    worst_r2 = min(
        circuit_report(CircuitParams(r, eta0, nB=n, nF=n)).r2
        for eta0 in (0.2, 0.5, 0.8)
        for n in np.linspace(0.0, 3.0, 61)
    )
    ok = abs(crossing - expected) <= C7_TOL and worst_r2 >= -C7_RESIDUAL_TOL
    assert report_line(
        "C7 thermal crossover",
        ok,
        f"S_coll = 1 at n_th = {crossing:.12f}, expected {expected:.12f}, |delta| = {abs(crossing - expected):.1e} "
        f"(tol {C7_TOL:g}); min r2 over n_th in [0, 3] = {worst_r2:.3e} (tol -{C7_RESIDUAL_TOL:g})",
    )


def test_c8_preset_determinism():
    spec = get_preset("fig3b")
    first, second = to_csv(spec, run_sweep(spec)), to_csv(spec, run_sweep(spec))
    lines = first.splitlines()
    header = lines[0].split(",")
    last = dict(zip(header, lines[-1].split(",")))
    anchor = abs(float(last["D_BA"]) - math.exp(-4))
    ok = first.encode() == second.encode() and float(last["eta0"]) == 1.0 and anchor <= C8_TOL
    assert report_line(
        "C8 preset determinism",
        ok,
        f"fig3b byte-identical: {first.encode() == second.encode()}; |D_BA(eta0=1) - e^-4| = {anchor:.1e} (tol {C8_TOL:g})",
    )


if __name__ == "__main__":
    failures = 0
    for name, fn in sorted((k, v) for k, v in globals().items() if k.startswith("test_c")):
        try:
            fn()
        except AssertionError:
            failures += 1
    sys.exit(1 if failures else 0)
