"""Norms, fitted exponents, and window utilities for run analysis.

Fits here are deliberately plain: least squares on log-transformed data
over explicit windows, with the window and point count recorded next to
every fitted number so a verdict can always be traced back to the cells
it used.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional, Sequence

import numpy as np

from .grid import Field, FracOrder, GridSpec, ValidationError
from .operators import _rfft_wavenumbers


def norms(f: Field) -> dict:
    """Cell-sum norms plus pointwise extremes of a field."""
    vol = f.grid.cell_volume()
    v = f.values
    return {
        "mass": float(np.sum(v) * vol),
        "l1": float(np.sum(np.abs(v)) * vol),
        "l2": float(math.sqrt(np.sum(v * v) * vol)),
        "l4": float(np.sum(v**4) * vol) ** 0.25,
        "linf": float(np.max(np.abs(v))),
        "min": float(np.min(v)),
    }


def spectral_energy(f: Field, order: FracOrder) -> float:
    """Quadratic form int |(-Delta)^(s/2) u|^2 via the rfft and Parseval."""
    grid = f.grid
    xi2 = _rfft_wavenumbers(grid)
    sym = np.zeros_like(xi2)
    np.power(xi2, order.s, out=sym, where=xi2 > 0.0)
    if grid.dimension == 1:
        hat = np.fft.rfft(f.values)
        w = np.full(hat.shape, 2.0)
        w[0] = 1.0
        if grid.n % 2 == 0:
            w[-1] = 1.0
    else:
        hat = np.fft.rfftn(f.values, axes=(0, 1))
        w = np.full(hat.shape, 2.0)
        w[:, 0] = 1.0
        if grid.n % 2 == 0:
            w[:, -1] = 1.0
    scale = grid.cell_volume() / grid.size
    return float(scale * np.sum(w * sym * np.abs(hat) ** 2))


def decay_weight(f: Field, alpha: float) -> np.ndarray:
    """Smooth weight equal to 1 inside the unit ball, ~ |x|^(-alpha) far out."""
    r = f.grid.radius()
    w = np.ones_like(r)
    out = r > 1.0
    w[out] = (1.0 + (r[out] ** 2 - 1.0) ** 4) ** (-alpha / 8.0)
    return w


def weighted_mass(f: Field, radius: float, alpha: Optional[float] = None) -> float:
    """int u phi_R with phi_R(x) = phi(x/R), the standard decay weight.

    `alpha` is the far-field decay power of the weight; the default N+1
    is integrable in any regime, but estimates with an admissibility band
    for alpha should pass their own value.
    """
    if radius <= 0.0:
        raise ValidationError(f"weight radius must be positive, got {radius}")
    grid = f.grid
    r = grid.radius() / radius
    w = np.ones_like(r)
    out = r > 1.0
    if alpha is None:
        alpha = grid.dimension + 1.0
    w[out] = (1.0 + (r[out] ** 2 - 1.0) ** 4) ** (-alpha / 8.0)
    return float(np.sum(f.values * w) * grid.cell_volume())


def edge_fraction(f: Field, rel: float = 0.05) -> float:
    """sup |u| over the outer `rel` shell of the box, relative to sup |u|."""
    grid = f.grid
    cut = grid.half_length * (1.0 - rel)
    shell = grid.radius() >= cut
    top = float(np.max(np.abs(f.values)))
    if top == 0.0:
        return 0.0
    return float(np.max(np.abs(f.values)[shell])) / top


@dataclass(frozen=True)
class FitResult:
    """Least-squares slope with the data that produced it."""

    slope: float
    intercept: float
    stderr: float
    window: tuple
    count: int
    residual_rms: float


def _loglog_fit(x: np.ndarray, y: np.ndarray, window: tuple) -> FitResult:
    lo, hi = window
    keep = (x >= lo) & (x <= hi) & (y > 0.0) & np.isfinite(y)
    if int(np.sum(keep)) < 8:
        raise ValidationError(
            f"fit window [{lo:g}, {hi:g}] holds {int(np.sum(keep))} usable points; need >= 8"
        )
    lx, ly = np.log(x[keep]), np.log(y[keep])
    a = np.vstack([lx, np.ones_like(lx)]).T
    coef, res, _, _ = np.linalg.lstsq(a, ly, rcond=None)
    fitted = a @ coef
    rms = float(np.sqrt(np.mean((ly - fitted) ** 2)))
    denom = float(np.sum((lx - lx.mean()) ** 2))
    stderr = rms / math.sqrt(denom) if denom > 0.0 else float("inf")
    return FitResult(
        slope=float(coef[0]),
        intercept=float(coef[1]),
        stderr=stderr,
        window=(float(lo), float(hi)),
        count=int(np.sum(keep)),
        residual_rms=rms,
    )


def tail_exponent_fit(f: Field, window: tuple) -> FitResult:
    """Power of |x| in the far field: slope of log |u| vs log |x| over `window`.

    1-D fields use both arms; radial symmetry is not assumed, every cell
    in the annulus enters the regression.
    """
    r = f.grid.radius().ravel()
    v = np.abs(f.values).ravel()
    return _loglog_fit(r, v, window)


def decay_rate_fit(times: Sequence[float], values: Sequence[float], window: tuple) -> FitResult:
    """Power of t: slope of log(values) vs log(t) over the time window."""
    return _loglog_fit(np.asarray(times, dtype=float), np.asarray(values, dtype=float), window)


def auto_window(r: np.ndarray, inner_mult: float, outer_frac: float, half_length: float) -> tuple:
    """Geometric window [inner_mult, outer_frac * L] for tail fits."""
    lo = float(inner_mult)
    hi = float(outer_frac * half_length)
    if lo >= hi:
        raise ValidationError(f"window degenerate: [{lo:g}, {hi:g}]")
    return (lo, hi)


def self_similar_defect(
    early: Field,
    late: Field,
    t_early: float,
    t_late: float,
    alpha: float,
    beta: float,
    compare_radius: float,
) -> float:
    """Sup distance between the two snapshots after self-similar rescaling.

    Both fields are mapped to renormalized variables v = t^alpha u(t^beta y)
    and compared on |y| <= compare_radius (linear interpolation onto the
    early snapshot's y-grid), relative to the early sup.
    """
    if early.grid.dimension != 1:
        raise ValidationError("rescaling comparison is 1-D only")
    x_e = early.grid.axis_coords()
    x_l = late.grid.axis_coords()
    y = x_e / t_early**beta
    keep = np.abs(y) <= compare_radius
    v_e = t_early**alpha * early.values
    v_l_interp = t_late**alpha * np.interp(t_late**beta * y[keep], x_l, late.values)
    top = float(np.max(np.abs(v_e[keep])))
    if top == 0.0:
        raise ValidationError("early snapshot vanishes on the comparison window")
    return float(np.max(np.abs(v_e[keep] - v_l_interp))) / top


def profile_error(
    f: Field,
    t: float,
    reference: np.ndarray,
    alpha: float,
    beta: float,
    compare_radius: float,
    ref_coords: np.ndarray,
) -> float:
    """Sup distance between t^alpha u(t^beta y) and a reference profile F(y)."""
    x = f.grid.axis_coords()
    y = x / t**beta
    keep = np.abs(y) <= compare_radius
    v = t**alpha * f.values
    ref = np.interp(y[keep], ref_coords, reference)
    top = float(np.max(np.abs(ref)))
    if top == 0.0:
        raise ValidationError("reference profile vanishes on the comparison window")
    return float(np.max(np.abs(v[keep] - ref))) / top


@dataclass
class FrontSeries:
    """Level-set radius history r_c(t) for a fixed threshold c."""

    threshold: float
    times: list = dc_field(default_factory=list)
    radii: list = dc_field(default_factory=list)

    def record(self, t: float, f: Field):
        self.times.append(float(t))
        self.radii.append(front_radius(f, self.threshold))


def front_radius(f: Field, threshold: float) -> float:
    """Largest |x| where u crosses `threshold` (0 when never crossed)."""
    if threshold <= 0.0:
        raise ValidationError(f"front threshold must be positive, got {threshold}")
    above = f.values >= threshold
    if not np.any(above):
        return 0.0
    return float(np.max(f.grid.radius()[above]))


def front_rate_fit(series: FrontSeries, window: tuple) -> dict:
    """Exponential front speed: slope of log r_c(t) vs t over the window.

    Returns the fitted rate plus the rms residuals of the exponential
    (log-linear) and algebraic (log-log) models on the same points, so a
    caller can check which growth law the data actually follows.
    """
    t = np.asarray(series.times, dtype=float)
    r = np.asarray(series.radii, dtype=float)
    lo, hi = window
    keep = (t >= lo) & (t <= hi) & (r > 0.0)
    if int(np.sum(keep)) < 8:
        raise ValidationError(
            f"front window [{lo:g}, {hi:g}] holds {int(np.sum(keep))} usable points; need >= 8"
        )
    tt, rr = t[keep], np.log(r[keep])

    a_exp = np.vstack([tt, np.ones_like(tt)]).T
    coef_exp, _, _, _ = np.linalg.lstsq(a_exp, rr, rcond=None)
    rms_exp = float(np.sqrt(np.mean((rr - a_exp @ coef_exp) ** 2)))

    a_alg = np.vstack([np.log(tt), np.ones_like(tt)]).T
    coef_alg, _, _, _ = np.linalg.lstsq(a_alg, rr, rcond=None)
    rms_alg = float(np.sqrt(np.mean((rr - a_alg @ coef_alg) ** 2)))

    return {
        "rate": float(coef_exp[0]),
        "rms_exponential": rms_exp,
        "rms_algebraic": rms_alg,
        "count": int(np.sum(keep)),
        "window": (float(lo), float(hi)),
    }


def extinction_time_from_bracket(bracket: Optional[tuple]) -> Optional[float]:
    """Midpoint estimate of the vanishing time from a solver bracket."""
    if bracket is None:
        return None
    lo, hi = bracket
    return 0.5 * (float(lo) + float(hi))
