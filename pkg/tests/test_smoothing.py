"""Profile table construction and its contract checks."""

import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from symsector.smoothing import (
    SmoothingError,
    build_smoothing_table,
    norm_m,
    norm_m_prime,
    norm_value,
    pure_m,
    pure_norm,
)


def test_pure_profile_closed_form():
    t = build_smoothing_table(16.0, "pure")
    r = np.linspace(0.0, 100.0, 501)
    assert np.allclose(norm_value(r, t), np.sqrt(r * r + 16.0), rtol=0, atol=1e-12)
    assert float(norm_value(0.0, t)) == pytest.approx(4.0, abs=1e-15)


def test_pure_m_matches_derivative():
    eps = 7.0
    r = np.linspace(0.1, 30.0, 200)
    h = 1e-6
    dn = (pure_norm(r + h, eps) - pure_norm(r - h, eps)) / (2 * h)
    assert np.allclose(pure_m(r, eps), r * dn, rtol=1e-7, atol=1e-9)


def test_cutoff_outer_exact():
    t = build_smoothing_table(16.0, "cutoff")
    r = np.linspace(16.0, 200.0, 301)
    assert np.max(np.abs(norm_value(r, t) - r)) <= 1e-9
    assert np.max(np.abs(norm_m(r, t) - r)) <= 1e-9
    assert np.max(np.abs(norm_m_prime(r, t) - 1.0)) <= 1e-12


def test_cutoff_inner_pure():
    t = build_smoothing_table(16.0, "cutoff")
    r0 = t[2]
    r = np.linspace(0.0, r0 * (1.0 - 1e-9), 101)
    assert np.allclose(norm_value(r, t), pure_norm(r, 16.0), rtol=0, atol=1e-12)


def test_cutoff_knot_continuity():
    t = build_smoothing_table(16.0, "cutoff")
    for knot in (t[2], t[3], t[4]):
        lo = float(norm_value(knot * (1 - 1e-9), t))
        hi = float(norm_value(knot * (1 + 1e-9), t))
        assert abs(hi - lo) <= 1e-7 * (1.0 + knot)
        mlo = float(norm_m(knot * (1 - 1e-9), t))
        mhi = float(norm_m(knot * (1 + 1e-9), t))
        assert abs(mhi - mlo) <= 1e-6 * (1.0 + knot)


def test_cutoff_monotone_m():
    for eps in (2.4, 3.0, 4.0, 16.0, 100.0):
        t = build_smoothing_table(eps, "cutoff")
        grid = np.linspace(t[2], t[4], 2001)
        assert float(np.min(norm_m_prime(grid, t))) > 0.0


def test_cutoff_infeasible_low_epsilon():
    for eps in (0.25, 1.0, 2.0):
        with pytest.raises(SmoothingError):
            build_smoothing_table(eps, "cutoff")


@pytest.mark.parametrize("bad", [0.0, -1.0, float("nan"), float("inf")])
def test_epsilon_validation(bad):
    with pytest.raises(SmoothingError):
        build_smoothing_table(bad, "pure")


def test_unknown_mode_rejected():
    with pytest.raises(SmoothingError):
        build_smoothing_table(16.0, "smoothest")


def test_build_is_deterministic():
    a = build_smoothing_table(16.0, "cutoff")
    b = build_smoothing_table(16.0, "cutoff")
    assert np.array_equal(a, b)


@given(st.floats(math.log(2.5), math.log(1000.0)))
def test_cutoff_contract_across_scales(log_eps):
    eps = math.exp(log_eps)
    t = build_smoothing_table(eps, "cutoff")
    r0, rm, r1 = t[2], t[3], t[4]
    assert 0.0 < r0 < rm < r1 == eps
    # n continuous at every knot
    for knot in (r0, rm, r1):
        lo = float(norm_value(knot * (1 - 1e-9), t))
        hi = float(norm_value(knot * (1 + 1e-9), t))
        assert abs(hi - lo) <= 1e-7 * (1.0 + knot)
    # exact beyond the support, pure below the bridge
    assert float(norm_value(2.0 * eps, t)) == pytest.approx(2.0 * eps, rel=1e-12)
    assert float(norm_value(0.5 * r0, t)) == pytest.approx(
        math.sqrt(0.25 * r0 * r0 + eps), rel=1e-12
    )
    # subharmonicity: m' > 0 across the bridge
    grid = np.linspace(r0, r1, 801)
    assert float(np.min(norm_m_prime(grid, t))) > 0.0
