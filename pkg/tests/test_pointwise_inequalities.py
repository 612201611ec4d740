import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from katolab.pointwise_inequalities import (
    csk_vs_separate,
    fuzz_kato2d_case1,
    fuzz_kato2d_case2,
    fuzz_mixed_csk,
    kato2d_margin_case1,
    kato2d_margin_case2,
    mixed_csk_discriminant,
    mixed_csk_margin,
    mixed_csk_sides,
    near_equality_mixed_csk,
    sharpness_example,
)

angles = st.floats(0.0, math.pi / 2)
coords = st.floats(-1e3, 1e3)
scales = st.floats(1e-3, 1e3)


def _unit(phi):
    return math.cos(phi), math.sin(phi)


def test_mixed_margin_simple_case():
    for p in (2.0, 2.5, 3.0):
        assert math.isclose(mixed_csk_margin(1.0, 0.0, 0.0, 1.0, p), 6.0 / p)


def test_mixed_margin_rejects_bad_input():
    with pytest.raises(ValueError):
        mixed_csk_margin(1.0, 0.0, 1.0, 1.0, 2.5)
    with pytest.raises(ValueError):
        mixed_csk_margin(1.0, 0.0, 1.0, 0.0, 3.5)


@settings(max_examples=200, deadline=None)
@given(coords, coords, angles, st.floats(2.0, 3.0))
def test_rotated_margin_matches_literal_sides(x, y, phi, p):
    t1, t2 = _unit(phi)
    lhs, rhs = mixed_csk_sides(x, y, t1, t2, p)
    scale = max(1.0, abs(lhs), abs(rhs))
    assert abs(mixed_csk_margin(x, y, t1, t2, p) - (rhs - lhs)) <= 1e-12 * scale


@settings(max_examples=100, deadline=None)
@given(coords, coords, angles, scales, st.floats(2.0, 3.0), st.floats(1.0, 2.0), st.floats(2.0 + 1e-6, 4.0))
def test_margins_are_degree_two_homogeneous(x, y, phi, t, p_mixed, p2, p1):
    a1, a2 = _unit(phi)
    pairs = [
        (lambda u, v: mixed_csk_margin(u, v, a1, a2, p_mixed)),
        (lambda u, v: kato2d_margin_case1(u, v, a1, a2, p1)),
        (lambda u, v: kato2d_margin_case2(u, v, a1, a2, p2)),
    ]
    for m in pairs:
        base = m(x, y)
        size = max(abs(base), 1e-300)
        # rounding of t*x enters at the level of the individual terms
        bound = 1e-12 * max(size, x * x + y * y) * t * t
        assert abs(m(t * x, t * y) - t * t * base) <= bound


def test_case1_cross_term_free():
    z, w = np.array([1.0, -2.0, 0.3]), np.array([0.5, 4.0, -1.0])
    assert np.allclose(kato2d_margin_case1(z, w, 1.0, 0.0, 2.5), 2.5 * z**2 + 4.0 * w**2)
    assert kato2d_margin_case1(0.0, 0.0, 0.6, 0.8, 3.0) == 0.0
    with pytest.raises(ValueError):
        kato2d_margin_case1(1.0, 1.0, 1.0, 0.0, 2.0)


@settings(max_examples=100, deadline=None)
@given(coords, coords, angles)
def test_case2_endpoint_identities(z, w, phi):
    a1, a2 = _unit(phi)
    scale = max(1.0, z * z + w * w)
    assert abs(kato2d_margin_case2(z, w, a1, a2, 2.0) - 2.0 * w * w) <= 1e-12 * scale
    target = (a2 * z - a1 * w) ** 2 + (1.0 + a2**2) * w**2
    assert abs(kato2d_margin_case2(z, w, a1, a2, 1.0) - target) <= 1e-12 * scale


def test_case2_example_on_kernel_line():
    a1, a2 = 0.6, 0.8
    assert math.isclose(kato2d_margin_case2(a1, a2, a1, a2, 1.0), (1 + a2**2) * a2**2)
    with pytest.raises(ValueError):
        kato2d_margin_case2(1.0, 1.0, 1.0, 0.0, 2.5)


@settings(max_examples=100, deadline=None)
@given(coords, coords, angles, st.floats(1.0, 2.0))
def test_case2_interior_dominates_endpoints(z, w, phi, p):
    # the margin is concave in p, so interior values stay above the endpoint minimum
    a1, a2 = _unit(phi)
    m = kato2d_margin_case2(z, w, a1, a2, p)
    ends = min(kato2d_margin_case2(z, w, a1, a2, 1.0), kato2d_margin_case2(z, w, a1, a2, 2.0))
    assert m >= ends - 1e-12 * max(1.0, z * z + w * w)


def test_discriminant_examples():
    assert math.isclose(mixed_csk_discriminant(1.0, 0.0, 2.5), -60.0)
    r = 1 / math.sqrt(2)
    d = mixed_csk_discriminant(r, r, 3.0)
    assert math.isclose(d, 9 / 4 - 18.0)
    # same ray through the margin: strictly positive on the unit circle in (z, w)
    for phi in np.linspace(0, 2 * math.pi, 97):
        x, y = math.cos(phi), math.sin(phi)
        assert mixed_csk_margin(x, y, r, r, 3.0) > 0


def test_discriminant_sweep_is_negative():
    worst = max(
        mixed_csk_discriminant(t1, math.sqrt(1 - t1 * t1), p)
        for t1 in np.linspace(0.1, 1.0, 10)
        for p in np.linspace(2.01, 3.0, 100)
    )
    assert worst < 0
    assert mixed_csk_discriminant(0.0, 1.0, 2.5) == 0.0


def test_discriminant_at_p2_uses_margin():
    assert mixed_csk_discriminant(0.6, 0.8, 2.0) == 0.0


@settings(max_examples=60, deadline=None)
@given(st.floats(0.05, math.pi / 2 - 0.05), st.floats(2.01, 3.0))
def test_negative_discriminant_means_positive_margin(phi, p):
    t1, t2 = _unit(phi)
    if mixed_csk_discriminant(t1, t2, p) < 0:
        psi = np.linspace(0, 2 * math.pi, 721)
        z, w = np.cos(psi), np.sin(psi)
        # invert the rotation (it is an involution) to get raw variables
        x, y = t1 * z + t2 * w, t2 * z - t1 * w
        assert np.min(mixed_csk_margin(x, y, t1, t2, p)) > 0


def test_csk_vs_separate():
    assert csk_vs_separate(2.0) == (1.5, 1.5)
    assert csk_vs_separate(3.0) == (1.0, 4.0 / 3.0)
    assert all(math.isclose(a, b) for a, b in zip(csk_vs_separate(2.5), (1.2, 1.4)))


@pytest.mark.parametrize("p", [2.0, 2.5, 3.0])
def test_sharpness_example_is_equality(p):
    lhs, rhs = sharpness_example(p)
    assert math.isclose(lhs, rhs, rel_tol=1e-15)


def test_sharp_point_in_raw_variables():
    # theta = (0, 1) and (x, y) = (0, 1) is the extremal configuration of u = x + x y
    for p in (2.0, 2.4, 3.0):
        assert abs(mixed_csk_margin(0.0, 1.0, 0.0, 1.0, p)) <= 1e-15


def test_near_equality_search():
    margin, sample = near_equality_mixed_csk(p=2.5)
    assert 0.0 - 1e-12 <= margin <= 1e-6
    assert math.isclose(sample["theta1"] ** 2 + sample["theta2"] ** 2, 1.0, rel_tol=1e-12)


def test_fuzzers_small_batches_are_clean_and_seeded():
    for fuzz in (fuzz_mixed_csk, fuzz_kato2d_case1, fuzz_kato2d_case2):
        rep = fuzz(20_000, seed=3)
        assert rep.samples == 20_000 and rep.violations == 0
        assert rep.as_dict() == fuzz(20_000, seed=3).as_dict()
        assert rep.worst_margin >= -1e-12
