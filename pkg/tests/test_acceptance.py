"""Acceptance suite: one test per criterion, each printing a single PASS/FAIL line.

Run with ``pytest tests/test_acceptance.py -s`` to see the lines, or directly
with ``python3 tests/test_acceptance.py``.
"""

import math
import sys
from pathlib import Path

import numpy as np

sys.path.insert(0, str(Path(__file__).parent))

from conftest import sample_max_ratio  # noqa: E402
from katolab.closed_forms import GAP_BOUND, gap_certificate_63, kappa_closed, planar_kappa, scalar_kappa  # noqa: E402
from katolab.equatorial_stability import (  # noqa: E402
    ParameterError,
    build_certificate,
    certificate_grid,
    ode_residual,
)
from katolab.kato_search import SearchConfig, inner_max, outer_search  # noqa: E402
from katolab.pointwise_inequalities import (  # noqa: E402
    fuzz_kato2d_case1,
    fuzz_kato2d_case2,
    fuzz_mixed_csk,
    near_equality_mixed_csk,
)
from katolab.regularity_constants import constants_row, eps3_closed, thresholds  # noqa: E402
from katolab.tensor_core import GradientDirection, Params  # noqa: E402

SEARCH = SearchConfig(restarts=256)
LN2 = math.log(2.0)


def _verdict(k, title, ok, detail):
    print(f"[{'PASS' if ok else 'FAIL'}] criterion {k}: {title} ({detail})")
    assert ok, f"criterion {k} failed: {detail}"


def test_criterion_1_sharp_planar_kato():
    worst = 0.0
    for p in (1.25, 1.5, 2.0, 1.0 + math.sqrt(2.0), 2.5, 3.0):
        for d in (1, 2, 3):
            est = outer_search(Params(p, 2, d), SEARCH)
            worst = max(worst, abs(est.kappa_upper - min(2.0, 1.0 + (p - 1.0) ** 2)))
    _verdict(1, "sharp 2-D Kato constant", worst <= 1e-4, f"max error {worst:.2e} <= 1e-4")


def test_criterion_2_scalar_closed_form():
    worst = 0.0
    for p in (1.5, 2.0, 2.5, 3.0):
        for n in (2, 3, 4):
            est = outer_search(Params(p, n, 1), SEARCH)
            worst = max(worst, abs(est.kappa_upper - min(2.0, 1.0 + (p - 1.0) ** 2 / (n - 1))))
    _verdict(2, "scalar closed form", worst <= 1e-4, f"max error {worst:.2e} <= 1e-4")


def test_criterion_3_gap_phenomenon():
    p = 1.0 + math.sqrt(2.0)
    wit = gap_certificate_63()
    est = outer_search(Params(p, 3, 2), SEARCH)
    k2 = est.kappa_upper
    k1 = kappa_closed(Params(p, 3, 1)).value
    checks = [
        wit.constraint_residual_norm <= 1e-12 and abs(wit.kappa_bound - GAP_BOUND) <= 1e-12,
        wit.kappa_bound <= 1.98775 + 1e-5,
        k2 <= 1.98775 + 1e-5,
        abs(k2 - 1.9876817) <= 2e-4,
        k1 == 2.0,
        k1 - k2 >= 0.012,
    ]
    _verdict(3, "gap between d=1 and d=2 at p=1+sqrt2, n=3", all(checks),
             f"kappa(d=2)={k2:.8f}, witness bound={wit.kappa_bound:.8f}, kappa(d=1)={k1}, gap={k1 - k2:.5f}")


def test_criterion_4_stabilization_and_monotonicity():
    grid = np.linspace(1.5, 3.0, 10)
    worst_stab, worst_mono = 0.0, -np.inf
    for p in grid:
        ks = [outer_search(Params(float(p), 3, d), SEARCH).kappa_upper for d in (1, 2, 3, 4)]
        worst_stab = max(worst_stab, abs(ks[3] - ks[2]))
        worst_mono = max(worst_mono, max(b - a for a, b in zip(ks, ks[1:])))
    ok = worst_stab <= 2e-4 and worst_mono <= 2e-4
    _verdict(4, "stabilization in d and monotonicity", ok,
             f"max |k(d=4)-k(d=3)| {worst_stab:.2e}, max increase in d {worst_mono:.2e}")


def test_criterion_5_constants():
    r3, r2 = constants_row(3.0), constants_row(2.0)
    th = thresholds()
    errs = {
        "C_HL(3)": abs(r3.C_HL - 8.0 / (17.0 - 24.0 * LN2)),
        "C_T(3)": abs(r3.C_T - 3**1.5 / 2 ** (13 / 6)),
        "alpha_star(3)": abs(r3.alpha_star - 2 ** (5 / 3) / 3**1.5),
        "C_P(3)": abs(r3.C_P - 3**4.5 / 2**6),
        "C_HL(2)": abs(r2.C_HL - 1.0 / (6.0 * LN2 - 4.0)),
    }
    ok = (
        all(e <= 1e-9 for e in errs.values())
        and abs(r3.C_HL - 21.9498) < 1e-4
        and abs(th.eps3 - eps3_closed()) <= 1e-10
        and abs(th.eps3_grid - th.eps3) <= 1e-10
        and th.p0 == (3.0 + math.sqrt(3.0)) / 2.0
    )
    worst = max(errs, key=errs.get)
    _verdict(5, "explicit constants and thresholds", ok,
             f"worst {worst} error {errs[worst]:.1e}, eps3 grid diff {abs(th.eps3_grid - th.eps3):.1e}")


def test_criterion_6_inequality_fuzz():
    reports = [fuzz_mixed_csk(10**6, 0), fuzz_kato2d_case1(10**6, 0), fuzz_kato2d_case2(10**6, 0)]
    margin, _ = near_equality_mixed_csk()
    violations = sum(r.violations for r in reports)
    ok = violations == 0 and all(r.samples == 10**6 for r in reports) and margin <= 1e-6
    _verdict(6, "pointwise inequality fuzz", ok,
             f"{violations} violations in 3 x 1e6 samples, near-equality margin {margin:.1e}")


def test_criterion_7_equatorial_instability():
    bad = []
    for n, p in certificate_grid(50):
        cert = build_certificate(n, p)
        if not (cert.integral_value < 0
                and abs(cert.integral_value - cert.analytic_value) <= 10 * cert.quad_error
                and ode_residual(cert) <= 1e-9):
            bad.append((n, p))
    try:
        build_certificate(7, 2.0)
        rejected = False
    except ParameterError:
        rejected = True
    _verdict(7, "equatorial map instability", not bad and rejected,
             f"{50 - len(bad)}/50 certificates valid, (7, 2) rejected: {rejected}")


def test_criterion_8_oracle_equivalence():
    rng = np.random.default_rng(8)
    worst_gap, worst_excess = 0.0, -np.inf
    for _ in range(30):
        p = float(rng.uniform(1.0, 4.0))
        n, d = int(rng.integers(2, 5)), int(rng.integers(1, 5))
        v = GradientDirection(rng.standard_normal((n, d)))
        lam, _ = inner_max(v, Params(p, n, d))
        oracle = sample_max_ratio(v.entries, p, 10**5, rng)
        worst_gap = max(worst_gap, lam - oracle)
        worst_excess = max(worst_excess, oracle - lam)
    ok = worst_excess <= 1e-12 and worst_gap <= 1e-3
    _verdict(8, "inner solver vs sampling oracle", ok,
             f"max lambda - oracle {worst_gap:.2e} <= 1e-3, max oracle excess {worst_excess:.1e}")


if __name__ == "__main__":
    failed = 0
    for name, fn in list(globals().items()):
        if name.startswith("test_criterion_"):
            try:
                fn()
            except AssertionError:
                failed += 1
    sys.exit(1 if failed else 0)
