"""Evolution tests: exact linear decay, conservation, guards, restart."""

import math

import numpy as np
import pytest

from fraclap.grid import Field, FracOrder, GridSpec, ValidationError, field_from_callable
from fraclap.operators import OperatorSpec, dirichlet_points
from fraclap.solver import (
    DirichletResult,
    Nonlinearity,
    Reaction,
    RunResult,
    SolverConfig,
    dealias_two_thirds,
    solve,
    solve_dirichlet,
)

GRID = GridSpec(1, 256, 8.0)
S06 = FracOrder(0.6)


def _mode(k):
    return field_from_callable(GRID, lambda x: np.cos(np.pi * k * x / GRID.half_length))


class TestLinearDecay:
    """m = 1 on a single Fourier mode has the closed form e^{-lam t} cos."""

    def test_explicit_matches_exact_mode_decay(self):
        lam = (3.0 * np.pi / 8.0) ** (2 * S06.s)
        res = solve(
            _mode(3),
            S06,
            Nonlinearity(exponent=1.0),
            1.0,
            SolverConfig(dt_cap=1e-4),
            snapshots=[1.0],
        )
        assert res.status == "completed"
        exact = math.exp(-lam) * _mode(3).values
        err = np.max(np.abs(res.snapshot_at(1.0).values - exact))
        assert err < 5e-5

    def test_imex_matches_exact_mode_decay(self):
        lam = (3.0 * np.pi / 8.0) ** (2 * S06.s)
        res = solve(
            _mode(3),
            S06,
            Nonlinearity(exponent=1.0),
            1.0,
            SolverConfig(scheme="imex-linear", dt_cap=1e-3),
            snapshots=[1.0],
        )
        exact = math.exp(-lam) * _mode(3).values
        err = np.max(np.abs(res.snapshot_at(1.0).values - exact))
        assert err < 5e-4

    def test_imex_rejects_nonlinear_or_nonspectral(self):
        with pytest.raises(ValidationError):
            solve(_mode(1), S06, Nonlinearity(exponent=2.0), 0.1,
                  SolverConfig(scheme="imex-linear"))
        with pytest.raises(ValidationError):
            solve(_mode(1), S06, Nonlinearity(exponent=1.0), 0.1,
                  SolverConfig(scheme="imex-linear", operator=OperatorSpec(kind="quadrature")))


class TestConservationAndDeterminism:
    def test_porous_medium_mass_exact(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        res = solve(u0, FracOrder(0.5), Nonlinearity(exponent=2.0), 0.6, SolverConfig())
        assert res.status == "completed"
        drift = abs(res.series["mass"][-1] - res.series["mass"][0])
        assert drift <= 1e-13

    def test_rerun_is_bit_identical(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        nl = Nonlinearity(exponent=2.0)
        a = solve(u0, FracOrder(0.5), nl, 0.4, SolverConfig(), snapshots=[0.4])
        b = solve(u0, FracOrder(0.5), nl, 0.4, SolverConfig(), snapshots=[0.4])
        assert np.array_equal(a.snapshot_at(0.4).values, b.snapshot_at(0.4).values)

    def test_restart_from_snapshot_is_bit_identical(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        nl = Nonlinearity(exponent=2.0)
        full = solve(u0, FracOrder(0.5), nl, 0.6, SolverConfig(), snapshots=[0.3, 0.6])
        span = 0.6 - 0.3
        cont = solve(full.snapshot_at(0.3), FracOrder(0.5), nl, span,
                     SolverConfig(), snapshots=[span])
        assert np.array_equal(full.snapshot_at(0.6).values, cont.snapshots[-1][1].values)


class TestScheduling:
    def test_snapshots_land_on_requested_times(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        times = [0.11, 0.23, 0.37]
        res = solve(u0, S06, Nonlinearity(exponent=1.5), 0.5, SolverConfig(), snapshots=times)
        recorded = [t for t, _ in res.snapshots]
        assert recorded == times
        with pytest.raises(KeyError):
            res.snapshot_at(0.19)

    def test_duplicate_targets_merge(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        res = solve(u0, S06, Nonlinearity(exponent=1.5), 0.3, SolverConfig(),
                    snapshots=[0.1, 0.1 + 1e-14, 0.3])
        assert len(res.snapshots) == 2

    def test_initial_snapshot_when_requested(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        res = solve(u0, S06, Nonlinearity(exponent=1.5), 0.1, SolverConfig(),
                    snapshots=[0.0, 0.1])
        assert res.snapshots[0][0] == 0.0
        assert np.max(np.abs(res.snapshots[0][1].values - u0.values)) < 1e-12


class TestGuards:
    def test_blowup_status(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        reac = Reaction(kind="custom", f_fn=lambda u: 50.0 * u, slope0=50.0)
        res = solve(u0, S06, Nonlinearity(exponent=1.0), 5.0,
                    SolverConfig(blowup_ceiling=1e4), reaction=reac)
        assert res.status == "blowup"

    def test_deadlock_status(self):
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        stiff = Nonlinearity(kind="custom",
                             phi_fn=lambda u: 1e20 * u,
                             dphi_fn=lambda u: 1e20 * np.ones_like(u))
        res = solve(u0, S06, stiff, 1.0, SolverConfig())
        assert res.status == "deadlock"
        assert res.steps == 0

    def test_fast_diffusion_extinction(self):
        grid = GridSpec(1, 256, 8.0)
        u0 = field_from_callable(grid, lambda x: 0.1 * np.exp(-(x**2) / 4.0))
        cfg = SolverConfig(operator=OperatorSpec(kind="quadrature"),
                           cfl_amp_floor_rel=3e-2, extinction_threshold=1e-9)
        res = solve(u0, FracOrder(0.25), Nonlinearity(exponent=0.3), 3.0, cfg)
        assert res.status == "extinct"
        lo, hi = res.extinction_bracket
        assert lo <= hi
        assert abs(lo - 0.4834) < 5e-3
        assert hi - lo < 1e-3


class TestNonlinearityAndReaction:
    def test_dphi_sup_fast_diffusion_uses_floor(self):
        nl = Nonlinearity(exponent=0.5)
        assert nl.dphi_sup(1.0, 1e-6) == pytest.approx(0.5 * 1e3)

    def test_dphi_sup_slow_diffusion_uses_amplitude(self):
        nl = Nonlinearity(exponent=3.0)
        assert nl.dphi_sup(2.0, 1e-6) == pytest.approx(12.0)

    def test_phi_odd_extension(self):
        nl = Nonlinearity(exponent=0.5)
        out = nl.phi(np.array([-4.0, 0.0, 9.0]))
        np.testing.assert_allclose(out, [-2.0, 0.0, 3.0])

    def test_logarithmic_phi(self):
        nl = Nonlinearity(kind="logarithmic")
        out = nl.phi(np.array([math.e - 1.0, -(math.e - 1.0)]))
        np.testing.assert_allclose(out, [1.0, -1.0], atol=1e-14)

    def test_kpp_stays_bounded_and_grows(self):
        u0 = field_from_callable(GRID, lambda x: 0.5 * np.exp(-(x**2)))
        res = solve(u0, FracOrder(0.5), Nonlinearity(exponent=1.0), 4.0,
                    SolverConfig(), reaction=Reaction(kind="kpp", rate=1.0))
        assert res.status == "completed"
        assert res.series["linf"][-1] > 0.7
        assert res.series["linf"].max() <= 1.0 + 1e-6

    def test_validation(self):
        with pytest.raises(ValidationError):
            Nonlinearity(kind="weird")
        with pytest.raises(ValidationError):
            Nonlinearity(exponent=0.0)
        with pytest.raises(ValidationError):
            Nonlinearity(kind="custom")
        with pytest.raises(ValidationError):
            Reaction(kind="kpp", rate=0.0)
        with pytest.raises(ValidationError):
            Reaction(kind="custom")
        with pytest.raises(ValidationError):
            SolverConfig(scheme="leapfrog")
        with pytest.raises(ValidationError):
            SolverConfig(c_cfl=0.0)
        with pytest.raises(ValidationError):
            SolverConfig(record_every=0)
        u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
        with pytest.raises(ValidationError):
            solve(u0, S06, Nonlinearity(), 0.0)


class TestDealias:
    def test_projection_removes_high_modes(self):
        k_high = GRID.n // 3 + 5
        f = _mode(k_high)
        out = dealias_two_thirds(f.values, GRID)
        assert np.max(np.abs(out)) < 1e-12

    def test_projection_keeps_low_modes(self):
        f = _mode(3)
        out = dealias_two_thirds(f.values, GRID)
        assert np.max(np.abs(out - f.values)) < 1e-13

    def test_2d_projection(self):
        grid = GridSpec(2, 48, 4.0)
        k_high = grid.n // 3 + 3
        f = field_from_callable(
            grid, lambda x, y: np.cos(np.pi * k_high * x / grid.half_length) * np.cos(np.pi * y / grid.half_length)
        )
        out = dealias_two_thirds(f.values, grid)
        assert np.max(np.abs(out)) < 1e-12


class TestTwoDimensional:
    def test_porous_medium_2d_runs_and_conserves(self):
        grid = GridSpec(2, 64, 8.0)
        u0 = field_from_callable(grid, lambda x, y: np.exp(-(x**2 + y**2)))
        res = solve(u0, FracOrder(0.5), Nonlinearity(exponent=2.0), 0.2, SolverConfig())
        assert res.status == "completed"
        drift = abs(res.series["mass"][-1] - res.series["mass"][0])
        assert drift <= 1e-12
        assert res.series["linf"][-1] < res.series["linf"][0]

    def test_imex_2d_mode_decay(self):
        grid = GridSpec(2, 64, 8.0)
        lam = (2.0 * (np.pi * 2.0 / 8.0) ** 2) ** 0.5
        u0 = field_from_callable(
            grid,
            lambda x, y: np.cos(np.pi * 2 * x / 8.0) * np.cos(np.pi * 2 * y / 8.0),
        )
        res = solve(u0, FracOrder(0.5), Nonlinearity(exponent=1.0), 0.5,
                    SolverConfig(scheme="imex-linear", dt_cap=1e-3), snapshots=[0.5])
        exact = math.exp(-0.5 * lam) * u0.values
        assert np.max(np.abs(res.snapshot_at(0.5).values - exact)) < 1e-3


class TestDirichlet:
    def test_linear_ground_mode_decay(self):
        n = 128
        x = dirichlet_points(n)
        res = solve_dirichlet(np.sin(x), FracOrder(0.5), 1.0, 1.0,
                              snapshots=[1.0], dt_cap=1e-4)
        assert res.status == "completed"
        # ground eigenvalue is 1^{2s} = 1, so the first-mode pairing decays as e^{-t}
        ratio = res.first_mode[-1] / res.first_mode[0]
        assert abs(ratio - math.exp(-1.0)) < 1e-3
        assert np.max(np.abs(res.snapshots[-1][1] - math.exp(-1.0) * np.sin(x))) < 1e-3

    def test_porous_medium_sup_decays(self):
        n = 128
        x = dirichlet_points(n)
        res = solve_dirichlet(np.sin(x), FracOrder(0.5), 2.0, 2.0)
        assert res.status == "completed"
        assert res.sup[-1] < 0.5 * res.sup[0]
        assert np.all(np.diff(res.sup) <= 1e-12)

    def test_t_end_in_snapshots_is_not_a_deadlock(self):
        n = 64
        x = dirichlet_points(n)
        res = solve_dirichlet(np.sin(x), FracOrder(0.5), 1.0, 0.2, snapshots=[0.1, 0.2])
        assert res.status == "completed"
        assert [t for t, _ in res.snapshots] == [0.1, 0.2]


def test_result_series_keys():
    u0 = field_from_callable(GRID, lambda x: np.exp(-(x**2)))
    res = solve(u0, S06, Nonlinearity(exponent=2.0), 0.05, SolverConfig())
    for key in ("mass", "l1", "l2", "l4", "linf", "min", "energy", "max_rate"):
        assert key in res.series
        assert res.series[key].shape == res.times.shape
