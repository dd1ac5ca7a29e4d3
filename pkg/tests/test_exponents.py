"""Exponent algebra, special solutions, and their numerical anchors."""

import math

import numpy as np
import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from fraclap.exponents import (
    ExponentTable,
    ModelParams,
    calibrate_profile_scale,
    derive_exponents,
    extinction_constant_quadrature,
    extinction_profile_eval,
    huang_profile_eval,
    kpp_spreading_rates,
    linear_kernel_eval,
    profile_pinned_amplitude,
)
from fraclap.grid import Field, FracOrder, GridSpec, ValidationError
from fraclap.operators import frac_laplacian_spectral


@given(s=st.floats(0.06, 0.94), m=st.floats(0.05, 4.9), n=st.sampled_from([1, 2]))
@settings(max_examples=200, deadline=None)
def test_scaling_identities(s, m, n):
    t = derive_exponents(ModelParams(n, s, m))
    assert t.m_critical == max(0.0, (n - 2 * s) / n)
    assert t.m_linear_tail == n / (n + 2 * s)
    assert t.m_exact_profile == (n + 2 - 2 * s) / (n + 2 * s)
    if m > t.m_critical:
        # alpha (m-1) + 2 s beta = 1 and alpha = N beta close the scaling
        assert t.alpha == pytest.approx(n * t.beta, rel=1e-14)
        assert t.alpha * (m - 1) + 2 * s * t.beta == pytest.approx(1.0, rel=1e-12)
        assert t.smoothing_decay(1.0) == pytest.approx(t.alpha, rel=1e-12)
    else:
        assert t.alpha is None and t.beta is None and t.tail_power is None


@given(s=st.floats(0.06, 0.94))
@settings(max_examples=50, deadline=None)
def test_tail_power_continuous_at_linear_tail_threshold(s):
    m1 = 1.0 / (1.0 + 2 * s)
    lo = derive_exponents(ModelParams(1, s, m1 - 1e-9)).tail_power
    hi = derive_exponents(ModelParams(1, s, m1 + 1e-9)).tail_power
    assert lo == pytest.approx(-(1 + 2 * s), abs=1e-6)
    assert hi == -(1 + 2 * s)


def test_tail_power_by_regime():
    t_fast = derive_exponents(ModelParams(1, 0.5, 2.0))
    assert t_fast.tail_power == -2.0
    t_slow = derive_exponents(ModelParams(1, 0.25, 0.6))
    assert t_slow.tail_power == pytest.approx(-0.5 / 0.4, rel=1e-14)


def test_extinction_block_frozen_values():
    # closed Gamma product at N=1, s=1/4, m=3/10, gamma = 3/14,
    # cross-checked by independent 30-digit quadrature
    t = derive_exponents(ModelParams(1, 0.25, 0.3))
    assert t.gamma_extinction == pytest.approx(3.0 / 14.0, rel=1e-14)
    assert t.kappa_extinction == pytest.approx(0.13743943547290752, rel=1e-12)
    assert t.extinction_constant == pytest.approx(0.09620760483103526, rel=1e-12)


def test_extinction_constant_quadrature_matches_gamma_product():
    p = ModelParams(1, 0.25, 0.3)
    direct = extinction_constant_quadrature(p)
    closed = derive_exponents(p).extinction_constant
    assert direct == pytest.approx(closed, rel=1e-8)


def test_extinction_absent_above_critical():
    t = derive_exponents(ModelParams(1, 0.25, 0.7))
    assert t.gamma_extinction is None and t.extinction_constant is None
    with pytest.raises(ValidationError):
        extinction_profile_eval(ModelParams(1, 0.25, 0.7), np.array([1.0]), 0.0, 1.0)


def test_extinction_profile_identity_and_vanishing():
    p = ModelParams(1, 0.25, 0.3)
    c = derive_exponents(p).extinction_constant
    x = np.array([0.5, 1.0, 2.0, 7.0])
    u = extinction_profile_eval(p, x, t=0.25, t_end=1.0)
    assert np.all(u ** (1 - 0.3) * np.abs(x) ** (2 * 0.25) == pytest.approx(c * 0.75, rel=1e-12))
    assert np.all(extinction_profile_eval(p, x, t=1.0, t_end=1.0) == 0.0)


def test_smoothing_decay_regimes():
    t = derive_exponents(ModelParams(1, 0.25, 0.4))  # below m_c = 0.5
    assert t.alpha is None
    # smoothing from L^p data survives below m_c once p is large enough
    assert t.smoothing_decay(1.0) is None
    assert t.smoothing_decay(2.0) == pytest.approx(1.0 / (0.4 - 1.0 + 1.0), rel=1e-12)
    with pytest.raises(ValidationError):
        t.smoothing_decay(0.5)


def test_front_rate_bounds_by_regime():
    slow = kpp_spreading_rates(ModelParams(1, 0.25, 0.6))
    assert slow["exact"] == pytest.approx(0.8, rel=1e-14)
    lin = kpp_spreading_rates(ModelParams(1, 0.5, 1.0))
    assert lin["exact"] == pytest.approx(0.5, rel=1e-14)
    deg = kpp_spreading_rates(ModelParams(1, 0.5, 2.0))
    assert deg["exact"] is None
    assert deg["lower"] == pytest.approx(0.5, rel=1e-14)
    assert deg["upper"] == pytest.approx(0.75, rel=1e-14)
    scaled = kpp_spreading_rates(ModelParams(1, 0.5, 1.0), f_prime0=2.5)
    assert scaled["exact"] == pytest.approx(1.25, rel=1e-14)
    with pytest.raises(ValidationError):
        kpp_spreading_rates(ModelParams(1, 0.5, 1.0), f_prime0=0.0)


def test_linear_kernel_cauchy_closed_form():
    x = np.array([0.0, 0.5, 2.0])
    got = linear_kernel_eval(FracOrder(0.5), x, t=1.3)
    want = (1.3 / math.pi) / (1.69 + x**2)
    assert np.max(np.abs(got - want)) <= 1e-14


def test_linear_kernel_quadrature_branch_frozen():
    # 30-digit oscillatory-quadrature values at s = 0.3, t = 1
    got = linear_kernel_eval(FracOrder(0.3), np.array([0.0, 1.0, 3.0]), t=1.0)
    # the oscillatory-weight rule resolves ~1e-8 absolute
    assert got[0] == pytest.approx(0.47892125242027408, abs=5e-8)
    assert got[1] == pytest.approx(0.10176168684242227, abs=5e-8)
    assert got[2] == pytest.approx(0.026449282578604364, abs=5e-8)


def test_linear_kernel_rejects_bad_time():
    with pytest.raises(ValidationError):
        linear_kernel_eval(FracOrder(0.5), np.array([0.0]), t=0.0)


def test_profile_mass_pinning():
    p = ModelParams(1, 0.25, 5.0 / 3.0)
    grid = GridSpec(dimension=1, n=4096, half_length=400.0)
    y = grid.axis_coords()
    prof = huang_profile_eval(p, y, mass=2.3, r_scale=0.7)
    # |y|^(-3/2) tail: the missing mass beyond the box is ~ 4 lam L^(-1/2)
    lam = profile_pinned_amplitude(p, 2.3, 0.7)
    missing = 4.0 * lam * 400.0 ** (-0.5)
    assert np.sum(prof) * grid.h == pytest.approx(2.3, abs=3 * missing)


@pytest.mark.parametrize(
    "s,m,r_star",
    [(0.5, 1.0, 1.0), (0.25, 5.0 / 3.0, 0.42597351145135789)],
)
def test_profile_calibration_recovers_exact_scale(s, m, r_star):
    # targets from a 25-digit root of the profile identity at the origin
    grid = GridSpec(dimension=1, n=1024, half_length=16 * math.pi)
    y = grid.axis_coords()
    p = ModelParams(1, s, m)
    order = FracOrder(s)
    apply_ = lambda v: frac_laplacian_spectral(Field(grid, v), order).values
    cal = calibrate_profile_scale(p, mass=1.0, apply_op=apply_, y=y)
    assert cal["r_scale"] == pytest.approx(r_star, abs=2e-3)
    assert cal["residual"] <= 3e-2


def test_calibration_requires_supercritical_power():
    grid = GridSpec(dimension=1, n=128, half_length=8.0)
    p = ModelParams(1, 0.25, 0.3)
    with pytest.raises(ValidationError):
        calibrate_profile_scale(p, 1.0, lambda v: v, grid.axis_coords())


def test_model_params_validation():
    with pytest.raises(ValidationError):
        ModelParams(3, 0.5, 1.0)
    with pytest.raises(ValidationError):
        ModelParams(1, 0.99, 1.0)
    with pytest.raises(ValidationError):
        ModelParams(1, 0.5, 0.0)
