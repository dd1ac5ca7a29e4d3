"""Verification suites: one executable check per acceptance claim.

Each criterion function runs a desk-scale experiment and returns verdict
blocks {claim, fitted, target, tolerance, pass}.  Suites group the
criteria by theme; `run_suite` executes one (optionally fanning the
criteria out over worker threads) and reports overall pass/fail.
"""

from __future__ import annotations

import math
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from .diagnostics import (
    FrontSeries,
    decay_rate_fit,
    front_radius,
    front_rate_fit,
    norms,
    self_similar_defect,
    tail_exponent_fit,
    weighted_mass,
)
from .exponents import (
    ModelParams,
    derive_exponents,
    extinction_profile_eval,
    huang_profile_eval,
    kpp_spreading_rates,
    linear_kernel_eval,
)
from .grid import Field, FracOrder, GridSpec, field_from_callable
from .io import band_verdict, tolerance_verdict, verdict_block
from .operators import OperatorSpec, dirichlet_points, frac_laplacian_spectral
from .rearrange import concentration_compare, schwarz_rearrange
from .solver import Nonlinearity, Reaction, SolverConfig, solve, solve_dirichlet


def _bump(grid: GridSpec, radius: float = 2.0) -> Field:
    """C^1 compactly supported hill of height 1."""
    r = grid.radius()
    return Field(grid, np.maximum(1.0 - (r / radius) ** 2, 0.0) ** 2)


def _near_delta(grid: GridSpec, mass: float = 1.0, widths: float = 1.0) -> Field:
    """Gaussian of `widths` grid cells: the discrete stand-in for a point mass."""
    w = widths * grid.h
    amp = mass / (w * math.sqrt(2.0 * math.pi))
    if grid.dimension == 2:
        amp = mass / (2.0 * math.pi * w * w)
    return Field(grid, amp * np.exp(-grid.radius() ** 2 / (2.0 * w * w)))


# ---------------------------------------------------------------------------
# Criterion 1: the four realizations agree on smooth fields


def criterion_operators() -> list:
    grid = GridSpec(1, 1024, 16.0 * math.pi)
    f = field_from_callable(grid, lambda x: np.exp(-x * x / 2.0))
    inner = np.abs(grid.axis_coords()) <= grid.half_length / 2.0
    out = []
    for s in (0.25, 0.5, 0.75):
        order = FracOrder(s)
        ref = frac_laplacian_spectral(f, order).values
        scale = float(np.max(np.abs(ref[inner])))
        for kind, tol in (("quadrature", 1e-2), ("semigroup", 1e-3), ("extension", 2e-2)):
            got = OperatorSpec(kind=kind).bind(grid, order)(f.values)
            err = float(np.max(np.abs(got - ref)[inner])) / scale
            out.append(verdict_block(f"C1-spectral-vs-{kind}-s{s}", err, 0.0, tol, err <= tol))
    return out


# ---------------------------------------------------------------------------
# Criterion 2: closed-form kernel at m = 1, s = 1/2


def criterion_linear_kernel() -> list:
    # Quadrature realization: its zero-exterior semantics match the
    # free-space kernel, so the algebraic tail is not lifted by images.
    grid = GridSpec(1, 2048, 20.0 * math.pi)
    order = FracOrder(0.5)
    res = solve(
        _near_delta(grid),
        order,
        Nonlinearity(exponent=1.0),
        1.0,
        SolverConfig(operator=OperatorSpec(kind="quadrature"), dt_cap=1e-3),
        snapshots=[1.0],
    )
    u1 = res.snapshot_at(1.0)
    exact = linear_kernel_eval(order, grid.axis_coords(), 1.0)
    err = float(np.max(np.abs(u1.values - exact))) / float(np.max(np.abs(exact)))
    fit = tail_exponent_fit(u1, (8.0, 25.0))
    return [
        verdict_block("C2-kernel-sup-error", err, 0.0, 0.02, err <= 0.02),
        tolerance_verdict("C2-kernel-tail-slope", fit.slope, -2.0, 0.1),
    ]


# ---------------------------------------------------------------------------
# Criterion 3: semigroup properties (conservation, monotonicity, ordering)


def criterion_semigroup_properties() -> list:
    out = []
    grid = GridSpec(1, 512, 16.0)
    bump = _bump(grid)
    worst_drift = 0.0
    worst_inc = -math.inf
    worst_min = math.inf
    for m, s in ((2.0, 0.5), (0.75, 0.5), (1.0, 0.25)):
        res = solve(bump, FracOrder(s), Nonlinearity(exponent=m), 0.5,
                    SolverConfig(), snapshots=[0.1])
        drift = abs(res.series["mass"][-1] - res.series["mass"][0]) / 0.5
        worst_drift = max(worst_drift, drift)
        for p in ("l1", "l2", "l4", "linf"):
            rel = float(np.max(np.diff(res.series[p]))) / res.series[p][0]
            worst_inc = max(worst_inc, rel)
        worst_min = min(worst_min, float(np.min(res.snapshot_at(0.1).values)))
    out.append(verdict_block("C3-mass-drift-per-time", worst_drift, 0.0, 1e-8,
                             worst_drift <= 1e-8))
    out.append(verdict_block("C3-lp-monotone", worst_inc, 0.0, 1e-12, worst_inc <= 1e-12))
    out.append(verdict_block("C3-positivity-t0.1", worst_min, None, None, worst_min > 0.0))

    # L1 contraction on ordered pairs of smooth random data
    gridc = GridSpec(1, 256, 16.0)
    x = gridc.axis_coords()
    vol = gridc.cell_volume()
    worst_contract = -math.inf
    for i, (m, s) in enumerate(((2.0, 0.5), (0.75, 0.5), (1.0, 0.25), (2.0, 0.5), (0.75, 0.5))):
        rng = np.random.default_rng(100 + i)

        def smooth():
            c = rng.standard_normal(12)
            v = sum(c[k] * np.cos(np.pi * k * x / 16.0 + rng.uniform(0.0, 2.0 * np.pi))
                    for k in range(12))
            return v - v.min() + 0.05

        u0 = smooth()
        v0 = u0 + np.maximum(smooth() - 1.0, 0.0)
        snaps = [0.05, 0.1, 0.2, 0.3]
        ru = solve(Field(gridc, u0), FracOrder(s), Nonlinearity(exponent=m), 0.3,
                   SolverConfig(), snapshots=snaps)
        rv = solve(Field(gridc, v0), FracOrder(s), Nonlinearity(exponent=m), 0.3,
                   SolverConfig(), snapshots=snaps)
        d0 = float(np.sum(np.abs(v0 - u0)) * vol)
        for t in snaps:
            d = float(np.sum(np.abs(rv.snapshot_at(t).values - ru.snapshot_at(t).values)) * vol)
            worst_contract = max(worst_contract, (d - d0) / d0)
    out.append(verdict_block("C3-l1-contraction-5-pairs", worst_contract, 0.0, 1e-12,
                             worst_contract <= 1e-12))
    return out


# ---------------------------------------------------------------------------
# Criterion 12: exponent lattice identities


def criterion_exponent_lattice() -> list:
    worst_ab = 0.0
    worst_scaling = 0.0
    worst_limit = 0.0
    ordering_ok = True
    count = 0
    for dim in (1, 2):
        for s in (0.1, 0.3, 0.5, 0.7, 0.9):
            for m in (0.4, 0.8, 1.0, 1.5, 2.5):
                count += 1
                t = derive_exponents(ModelParams(dimension=dim, s=s, m=m))
                ordering_ok &= t.m_critical < t.m_linear_tail < t.m_exact_profile
                if t.alpha is None:
                    continue
                worst_ab = max(worst_ab, abs(t.alpha - dim * t.beta))
                worst_scaling = max(worst_scaling, abs((m - 1.0) * t.alpha + 2.0 * s * t.beta - 1.0))
                # the gap to the classical exponent closes linearly in (1-s):
                # beta(s) - beta(1) = 2 (1-s) beta(s) beta(1), exactly
                beta_cl = 1.0 / (dim * (m - 1.0) + 2.0)
                worst_limit = max(
                    worst_limit,
                    abs((t.beta - beta_cl) - 2.0 * (1.0 - s) * t.beta * beta_cl),
                )
    return [
        verdict_block("C12-lattice-size", float(count), 50.0, 0.0, count == 50),
        verdict_block("C12-alpha-equals-N-beta", worst_ab, 0.0, 1e-12, worst_ab <= 1e-12),
        verdict_block("C12-scaling-identity", worst_scaling, 0.0, 1e-12,
                      worst_scaling <= 1e-12),
        verdict_block("C12-critical-ordering", None, None, None, ordering_ok),
        verdict_block("C12-classical-limit-gap", worst_limit, 0.0, 1e-12,
                      worst_limit <= 1e-12),
    ]


# ---------------------------------------------------------------------------
# Criteria 4 and 6: smoothing decay exponents plus algebraic tail laws


def criterion_smoothing_and_tails() -> list:
    out = []
    # (m, s, n, L, window): sup decay fitted over the run's final decade,
    # the tail over a window past the crossover but clear of the box edge
    for m, s, n, L, tail_win, tail_target, tail_tol in (
        (2.0, 0.5, 2048, 100.0, (20.0, 40.0), -2.0, 0.2),
        (1.5, 0.25, 2048, 150.0, (20.0, 60.0), -1.5, 0.15),
    ):
        grid = GridSpec(1, n, L)
        res = solve(_near_delta(grid), FracOrder(s), Nonlinearity(exponent=m), 10.0,
                    SolverConfig(operator=OperatorSpec(kind="quadrature"),
                                 record_every=4),
                    snapshots=[10.0])
        alpha = derive_exponents(ModelParams(dimension=1, m=m, s=s)).alpha
        dfit = decay_rate_fit(res.times, res.series["linf"], (1.0, 10.0))
        tag = f"m{m:g}-s{s:g}"
        out.append(tolerance_verdict(f"C4-decay-slope-{tag}", dfit.slope,
                                     -alpha, 0.1 * alpha))
        out.append(verdict_block(f"C4-decay-residual-{tag}", dfit.residual_rms,
                                 0.0, 0.1, dfit.residual_rms <= 0.1))
        tfit = tail_exponent_fit(res.snapshot_at(10.0), tail_win)
        out.append(tolerance_verdict(f"C6-tail-slope-{tag}", tfit.slope,
                                     tail_target, tail_tol))

    # fat-tail band m_c < m < m1: stop before the spreading scale t^beta
    # (beta = 10 here) outruns the box and drains it
    grid = GridSpec(1, 2048, 300.0)
    res = solve(_near_delta(grid), FracOrder(0.25), Nonlinearity(exponent=0.6), 1.0,
                SolverConfig(operator=OperatorSpec(kind="quadrature"),
                             cfl_amp_floor_rel=3e-2),
                snapshots=[1.0])
    tfit = tail_exponent_fit(res.snapshot_at(1.0), (30.0, 100.0))
    out.append(tolerance_verdict("C6-tail-slope-vss-m0.6-s0.25", tfit.slope,
                                 -1.25, 0.125))
    return out


# ---------------------------------------------------------------------------
# Criterion 5: attraction to the self-similar profile
#
# At s = 1/2 on the line the exact-profile power m_ex equals 1 and the
# closed-form profile is the Cauchy kernel shape, so both the rescaled-gap
# decay and the 5% endpoint claim are checked there.  A second run at m = 2
# checks attraction without a closed form: the rescaled snapshot-to-snapshot
# defect must fall down the ladder.


def criterion_profile_attraction() -> list:
    params = ModelParams(dimension=1, m=1.0, s=0.5)
    table = derive_exponents(params)
    grid = GridSpec(1, 2048, 200.0)
    x = grid.axis_coords()
    u0v = (0.5 / (0.8 * math.sqrt(2.0 * math.pi))) * np.exp(-((x + 3.0) ** 2) / (2.0 * 0.8**2)) \
        + (0.5 / (1.4 * math.sqrt(2.0 * math.pi))) * np.exp(-((x - 3.0) ** 2) / (2.0 * 1.4**2))
    u0 = Field(grid, u0v)
    mass = float(np.sum(u0v)) * grid.h
    times = list(np.geomspace(1.5, 15.0, 9))
    res = solve(u0, FracOrder(0.5), Nonlinearity(exponent=1.0), 15.0,
                SolverConfig(), snapshots=times)
    gaps = []
    final_rel = None
    for tt in times:
        u = res.snapshot_at(tt)
        y = x / tt**table.beta
        ref = tt ** (-table.alpha) * huang_profile_eval(params, y, mass, 1.0)
        sup = float(np.max(np.abs(u.values - ref)))
        gaps.append(tt**table.alpha * sup)
        final_rel = sup / float(np.max(ref))
    gaps = np.asarray(gaps)
    worst_step = float(np.max(np.diff(gaps)))
    out = [
        verdict_block("C5-rescaled-gap-monotone", worst_step, 0.0, 0.0,
                      worst_step < 0.0),
        verdict_block("C5-rescaled-gap-ratio", float(gaps[-1] / gaps[0]), 0.0, 0.2,
                      gaps[-1] <= 0.2 * gaps[0]),
        verdict_block("C5-final-profile-error", final_rel, 0.0, 0.05,
                      final_rel <= 0.05),
    ]

    grid2 = GridSpec(1, 2048, 100.0)
    res2 = solve(_near_delta(grid2), FracOrder(0.5), Nonlinearity(exponent=2.0), 10.0,
                 SolverConfig(operator=OperatorSpec(kind="quadrature")),
                 snapshots=[1.25, 2.5, 5.0, 10.0])
    tab2 = derive_exponents(ModelParams(dimension=1, m=2.0, s=0.5))
    defects = [
        self_similar_defect(res2.snapshot_at(a), res2.snapshot_at(b), a, b,
                            tab2.alpha, tab2.beta, 6.0)
        for a, b in ((1.25, 2.5), (2.5, 5.0), (5.0, 10.0))
    ]
    decreasing = defects[0] > defects[1] > defects[2]
    out.append(verdict_block("C5-defect-ladder-m2", defects[-1] / defects[0],
                             0.0, 0.6, decreasing and defects[-1] <= 0.6 * defects[0]))
    return out


# ---------------------------------------------------------------------------
# Criterion 7: finite-time extinction below the critical power
#
# The separable vanishing solution is exact on the whole line; on a box the
# zero exterior removes a far field whose relative weight is scale-invariant,
# so no resolution reaches the free-space constant.  The seeded check
# therefore calibrates the constant dynamically on a pilot grid and tests
# that the calibrated solution's extinction time transfers to a finer grid.


def _seeded_extinction_time(n: int, constant: float, params: ModelParams) -> float:
    grid = GridSpec(1, n, 100.0)
    x = np.maximum(np.abs(grid.axis_coords()), grid.h)
    seed = Field(grid, extinction_profile_eval(params, x, 0.0, 1.0, constant=constant))
    res = solve(seed, params.order, Nonlinearity(exponent=params.m), 2.5,
                SolverConfig(operator=OperatorSpec(kind="quadrature"),
                             cfl_amp_floor_rel=3e-2),
                snapshots=[])
    if res.extinction_bracket is None:
        return math.nan
    lo, hi = res.extinction_bracket
    return 0.5 * (lo + hi)


def criterion_extinction() -> list:
    params = ModelParams(dimension=1, m=0.3, s=0.25)
    one_m = 1.0 - params.m

    grid = GridSpec(1, 512, 16.0)
    snaps = list(np.linspace(0.2, 1.8, 9))
    bump = _bump(grid)
    res = solve(bump, params.order, Nonlinearity(exponent=params.m), 5.0,
                SolverConfig(operator=OperatorSpec(kind="quadrature"),
                             cfl_amp_floor_rel=3e-2, extinction_threshold=1e-9),
                snapshots=snaps)
    extinct = res.status == "extinct" and res.extinction_bracket is not None
    t_num = 0.5 * sum(res.extinction_bracket) if extinct else math.nan
    out = [verdict_block("C7-bounded-data-extinguish", t_num, None, None, extinct)]

    pilot = _seeded_extinction_time(1024, None, params)
    table = derive_exponents(params)
    calibrated = table.extinction_constant / pilot
    recovered = _seeded_extinction_time(2048, calibrated, params)
    out.append(tolerance_verdict("C7-seeded-recovery", recovered, 1.0, 0.15))

    # weighted-mass lower bound: T >= W0(R)^(1-m) / (C1 R^(N(1-m)-2s)) with
    # C1 the largest observed drop rate of W^(1-m) over the same radii
    radii = (2.0, 4.0, 8.0)
    expo = params.dimension * one_m - 2.0 * params.s
    stamps = [0.0] + snaps
    weighted = {
        r: [weighted_mass(bump, r, alpha=2.0)]
        + [weighted_mass(res.snapshot_at(tt), r, alpha=2.0) for tt in snaps]
        for r in radii
    }
    c1 = 0.0
    for r in radii:
        w_pow = np.asarray(weighted[r]) ** one_m
        drops = -np.diff(w_pow) / np.diff(np.asarray(stamps)) / r**expo
        c1 = max(c1, float(np.max(drops)))
    margin = min(
        t_num * c1 * r**expo / weighted[r][0] ** one_m for r in radii
    )
    out.append(verdict_block("C7-weighted-lower-bound", margin, 1.0, 0.0,
                             margin >= 1.0 - 1e-9))
    return out


# ---------------------------------------------------------------------------
# Criterion 8: the weighted-mass drop rate scales with the weight radius


def criterion_weighted_growth() -> list:
    m, s, alpha = 0.75, 0.375, 1.5
    one_m = 1.0 - m
    expo = 2.0 * s - one_m
    grid = GridSpec(1, 1536, 150.0)
    u0 = _near_delta(grid)
    snaps = list(np.linspace(0.25, 6.0, 24))
    res = solve(u0, FracOrder(s), Nonlinearity(exponent=m), 6.0,
                SolverConfig(operator=OperatorSpec(kind="quadrature"),
                             cfl_amp_floor_rel=3e-2),
                snapshots=snaps)
    stamps = np.asarray([0.0] + snaps)
    radii = (4.0, 8.0, 16.0)
    rates = []
    for r in radii:
        w = [weighted_mass(u0, r, alpha=alpha)]
        w += [weighted_mass(res.snapshot_at(tt), r, alpha=alpha) for tt in snaps]
        w_pow = np.asarray(w) ** one_m
        rates.append(float(np.max(-np.diff(w_pow) / np.diff(stamps))))
    slope = float(np.polyfit(np.log(radii), np.log(rates), 1)[0])
    return [tolerance_verdict("C8-weighted-rate-scaling", slope, -expo, 0.2)]


# ---------------------------------------------------------------------------
# Criterion 9: symmetrization never loses concentration


def _random_bumps(grid: GridSpec, rng: np.random.Generator) -> Field:
    x = grid.axis_coords()
    v = np.zeros_like(x)
    for _ in range(int(rng.integers(2, 5))):
        center = rng.uniform(-grid.half_length * 0.5, grid.half_length * 0.5)
        width = rng.uniform(0.4, 1.5)
        v += rng.uniform(0.3, 1.2) * np.exp(-((x - center) ** 2) / (2.0 * width**2))
    return Field(grid, v)


def criterion_symmetrization() -> list:
    grid = GridSpec(1, 256, 12.0)
    snaps = [0.05, 0.15, 0.5]
    nonlinearities = (Nonlinearity(exponent=0.8), Nonlinearity(kind="logarithmic"))
    rng = np.random.default_rng(20240817)
    worst_margin = -math.inf
    worst_lp = 0.0
    for _ in range(10):
        u0 = _random_bumps(grid, rng)
        v0 = schwarz_rearrange(u0)
        nu, nv = norms(u0), norms(v0)
        for key in ("l1", "l2", "l4", "linf"):
            worst_lp = max(worst_lp, abs(nu[key] - nv[key]) / nu[key])
        for nl in nonlinearities:
            cfg = SolverConfig(cfl_amp_floor_rel=3e-2)
            run_u = solve(u0, FracOrder(0.5), nl, 0.5, cfg, snapshots=snaps)
            run_v = solve(v0, FracOrder(0.5), nl, 0.5, cfg, snapshots=snaps)
            for tt in snaps:
                comp = concentration_compare(run_u.snapshot_at(tt),
                                             run_v.snapshot_at(tt), slack=1e-10)
                worst_margin = max(worst_margin, comp["worst_margin"])
    return [
        verdict_block("C9-concentration-domination", worst_margin, 0.0, 1e-10,
                      worst_margin <= 1e-10),
        verdict_block("C9-lp-preservation", worst_lp, 0.0, 1e-12,
                      worst_lp <= 1e-12),
    ]


# ---------------------------------------------------------------------------
# Criterion 10: KPP level sets propagate exponentially at the predicted rate


def criterion_kpp() -> list:
    out = []
    worst_model_ratio = 0.0
    runs = (
        # m, s, n, L, operator, floor, t_end, window
        (0.6, 0.25, 2048, 200.0, "quadrature", 3e-2, 7.0, (2.0, 7.0)),
        (1.0, 0.50, 1024, 400.0, "spectral", 0.0, 9.0, (4.0, 9.0)),
        (2.0, 0.50, 512, 100.0, "spectral", 0.0, 7.0, (2.0, 7.0)),
    )
    for m, s, n, L, kind, floor, t_end, window in runs:
        grid = GridSpec(1, n, L)
        u0 = Field(grid, np.where(grid.radius() <= 2.0, 0.5, 0.0))
        cfg = SolverConfig(operator=OperatorSpec(kind=kind),
                           cfl_amp_floor_rel=floor if floor else 1e-6)
        res = solve(u0, FracOrder(s), Nonlinearity(exponent=m), t_end, cfg,
                    snapshots=list(np.linspace(window[0], t_end, 21)),
                    reaction=Reaction(kind="kpp", rate=1.0))
        series = FrontSeries(threshold=0.25)
        for tt in np.linspace(window[0], t_end, 21):
            series.record(float(tt), res.snapshot_at(float(tt)))
        fit = front_rate_fit(series, window)
        rates = kpp_spreading_rates(ModelParams(dimension=1, m=m, s=s), 1.0)
        tag = f"m{m:g}-s{s:g}"
        if rates["exact"] is not None:
            out.append(tolerance_verdict(f"C10-front-rate-{tag}", fit["rate"],
                                         rates["exact"], 0.2 * rates["exact"]))
        else:
            out.append(band_verdict(f"C10-front-rate-{tag}", fit["rate"],
                                    0.8 * rates["lower"], 1.2 * rates["upper"]))
        worst_model_ratio = max(worst_model_ratio,
                                fit["rms_exponential"] / fit["rms_algebraic"])
    out.append(verdict_block("C10-exponential-beats-algebraic", worst_model_ratio,
                             0.0, 1.0, worst_model_ratio < 1.0))
    return out


# ---------------------------------------------------------------------------
# Criterion 11: Dirichlet decay rate and the boundary-ratio band


def criterion_dirichlet() -> list:
    n = 256
    x = dirichlet_points(n)
    u0 = 1.2 * np.sin(x) + 0.3 * np.sin(2.0 * x)
    times = list(np.geomspace(5.0, 50.0, 9))
    res = solve_dirichlet(u0, FracOrder(0.5), 2.0, 50.0, snapshots=times)
    fit = decay_rate_fit(np.asarray(res.times), np.asarray(res.sup), (5.0, 50.0))
    ground_root = np.sin(x) ** 0.5
    band_lo, band_hi = math.inf, -math.inf
    for t_snap, values in res.snapshots:
        ratio = values * t_snap / ground_root
        band_lo = min(band_lo, float(np.min(ratio)))
        band_hi = max(band_hi, float(np.max(ratio)))
    return [
        tolerance_verdict("C11-sup-decay-slope", fit.slope, -1.0, 0.1),
        verdict_block("C11-harnack-band-positive", band_lo, 0.0, 0.0, band_lo > 0.0),
        verdict_block("C11-harnack-band-width", band_hi / band_lo, 1.0, 4.0,
                      0.0 < band_hi / band_lo <= 4.0),
    ]


SUITES = {
    "operators": (criterion_operators, criterion_exponent_lattice),
    "semigroup-properties": (criterion_semigroup_properties,),
    "barenblatt": (criterion_linear_kernel, criterion_smoothing_and_tails,
                   criterion_profile_attraction),
    "extinction": (criterion_extinction, criterion_weighted_growth),
    "symmetrization": (criterion_symmetrization,),
    "kpp": (criterion_kpp,),
    "dirichlet": (criterion_dirichlet,),
}


def suite_names() -> tuple:
    return tuple(SUITES.keys()) + ("all",)


def run_suite(name: str, threads: int = 1) -> dict:
    """Execute one suite; returns {"suite", "verdicts", "pass"}."""
    if name == "all":
        fns = []
        seen = set()
        for group in SUITES.values():
            for fn in group:
                if fn not in seen:
                    seen.add(fn)
                    fns.append(fn)
    else:
        if name not in SUITES:
            raise KeyError(f"unknown suite {name!r}; know {suite_names()}")
        fns = list(SUITES[name])

    if threads > 1 and len(fns) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            groups = list(pool.map(lambda f: f(), fns))
    else:
        groups = [fn() for fn in fns]
    verdicts = [v for g in groups for v in g]
    return {
        "suite": name,
        "verdicts": verdicts,
        "pass": all(v["pass"] for v in verdicts),
    }
