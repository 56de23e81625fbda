"""Acceptance battery: one criterion per test, one printed pass/fail line.

Tolerances follow the verification conventions: analytic bounds get 1e-9
headroom, realization identities 1e-12, structural identities are exact.
Run with `pytest tests/test_acceptance.py -v -s` to see the summary lines.
"""

import math
import time

import numpy as np
import pytest

from anncalc import (
    RELU,
    param_count,
    realize,
    run_suite,
    square_refinement_level,
    square_unit,
    tent_f,
    tent_g,
)
from anncalc.verification import ABS_TOL, REALIZE_TOL

SEED = 7

_reports = {}


def suite(name):
    if name not in _reports:
        t0 = time.perf_counter()
        _reports[name] = (run_suite(name, SEED), time.perf_counter() - t0)
    return _reports[name]


def announce(number, label, ok, detail=""):
    status = "PASS" if ok else "FAIL"
    print(f"criterion {number} ({label}): {status}{' - ' + detail if detail else ''}")
    assert ok, f"criterion {number} ({label}) failed: {detail}"


def entries_pass(report, prefix):
    picked = [e for e in report.entries if e.name.startswith(prefix)]
    assert picked, f"no entries match {prefix!r}"
    bad = [e.name for e in picked if not e.passed]
    return not bad, f"{len(picked)} checks" + (f", failing: {bad}" if bad else "")


def test_criterion_1_square_on_unit_interval():
    t0 = time.perf_counter()
    grid = np.linspace(0.0, 1.0, 100_000)
    outside = np.concatenate(
        [np.linspace(-3.0, 0.0, 500, endpoint=False), np.linspace(1.0, 3.0, 500)[1:]]
    )
    ok = True
    for eps in (1.0, 2.0**-4, 2.0**-10, 2.0**-20):
        net = square_unit(eps)
        M = square_refinement_level(eps)
        vals = realize(net, RELU, grid[:, None])[:, 0]
        ok &= float(np.max(np.abs(vals - grid**2))) <= eps + ABS_TOL
        ok &= param_count(net) == 20 * M - 27
        ok &= param_count(net) <= max(10.0 * math.log2(1.0 / eps) - 7.0, 13.0)
        ok &= net.depth == M <= max(0.5 * math.log2(1.0 / eps) + 1.0, 2.0)
        out_vals = realize(net, RELU, outside[:, None])[:, 0]
        ok &= float(np.max(np.abs(out_vals - np.maximum(outside, 0.0)))) <= 1e-12
    elapsed = time.perf_counter() - t0
    ok &= elapsed < 1.0
    announce(1, "square on [0,1]", ok, f"{elapsed:.2f}s")


def test_criterion_2_tent_oracle_identities():
    grid = np.linspace(0.0, 1.0, 10_000)
    worst_series = 0.0
    for n in range(1, 11):
        series = grid - sum(np.ldexp(tent_g(m, grid), -2 * m) for m in range(1, n + 1))
        worst_series = max(worst_series, float(np.max(np.abs(tent_f(n, grid) - series))))
    worst_gap = 0.0
    for n in range(0, 11):
        mids = (2.0 * np.arange(2**n) + 1.0) / 2.0 ** (n + 1)
        gap = tent_f(n, mids) - mids**2
        worst_gap = max(worst_gap, float(np.max(np.abs(gap - 2.0 ** (-2 * n - 2)))))
    ok = worst_series <= 1e-12 and worst_gap <= 1e-14
    announce(2, "tent oracle identities", ok,
             f"series err {worst_series:.2e}, gap err {worst_gap:.2e}")


def test_criterion_3_product():
    t0 = time.perf_counter()
    report, _ = suite("product")
    elapsed = time.perf_counter() - t0
    ok, detail = entries_pass(report, "product_")
    ok &= elapsed < 5.0
    announce(3, "product approximator", ok, f"{detail}, {elapsed:.2f}s")


def test_criterion_4_scalar_vector_product():
    report, _ = suite("scalvec")
    ok, detail = entries_pass(report, "scalvec_")
    announce(4, "scalar-vector product", ok, detail)


def test_criterion_5_calculus_algebra():
    report, elapsed = suite("calculus")
    ok, detail = entries_pass(report, "")
    ok &= elapsed < 10.0
    announce(5, "calculus algebra", ok, f"{detail}, {elapsed:.2f}s")


def test_criterion_6_euler_exactness():
    report, _ = suite("euler")
    ok1, d1 = entries_pass(report, "euler_space_exactness")
    ok2, d2 = entries_pass(report, "euler_space_adaptedness")
    ok3, d3 = entries_pass(report, "euler_space_continuity")
    announce(6, "Euler representation exactness", ok1 and ok2 and ok3,
             "; ".join([d1, d2, d3]))


def test_criterion_7_spacetime_bounds():
    report, elapsed = suite("spacetime")
    ok, detail = entries_pass(report, "spacetime_")
    ok &= elapsed < 60.0
    announce(7, "space-time bounds", ok, f"{detail}, {elapsed:.2f}s")


def test_criterion_8_headline_scaling():
    report, _ = suite("thm1")
    ok, detail = entries_pass(report, "thm1_")
    slope = [e for e in report.entries if e.name == "thm1_param_slope_in_N"]
    detail += f", slope {slope[0].measured:.3f} <= 6.1"
    announce(8, "headline scaling with proof constants", ok, detail)


def test_criterion_9_gronwall():
    report, _ = suite("euler")
    ok, detail = entries_pass(report, "gronwall_")
    announce(9, "a priori iterate bound", ok, detail)
