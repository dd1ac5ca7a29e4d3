"""Realizations of the fractional Laplacian on periodic boxes.

Five interchangeable realizations are provided:

* spectral multiplier |xi|^(2s) on the periodic box (the reference),
* singular-integral quadrature in 1-D with zero extension outside the box,
* heat-semigroup time quadrature,
* weighted extension problem with boundary flux recovery,
* spectral powers of the Dirichlet Laplacian on (0, pi) in a sine basis.

All of them agree on smooth, effectively compactly supported fields to
the tolerances asserted in the test suite; they differ in how they treat
what lies outside the box, which is exactly why more than one is kept.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field
from typing import Optional

import numpy as np
import scipy.fft as sfft
from scipy.fft import dst, idst
from scipy.integrate import simpson
from scipy.special import gammaincc

from .grid import Field, FracOrder, GridSpec, ValidationError

__all__ = [
    "OperatorError",
    "SemigroupWindowError",
    "ExtensionMeshError",
    "quadrature_constant",
    "extension_flux_constant",
    "spectral_symbol",
    "frac_laplacian_spectral",
    "riesz_inverse",
    "frac_laplacian_quadrature",
    "frac_laplacian_semigroup",
    "ExtensionMesh",
    "frac_laplacian_extension",
    "dirichlet_points",
    "dirichlet_spectral_apply",
    "OperatorSpec",
]


class OperatorError(ValueError):
    """Raised when an operator's hypotheses are violated."""


class SemigroupWindowError(OperatorError):
    """Semigroup quadrature window too narrow for the requested tolerance."""


class ExtensionMeshError(OperatorError):
    """Extension mesh too coarse: boundary flux not converged."""


def quadrature_constant(dimension: int, s: float) -> float:
    """Normalizing constant of the singular-integral form.

    C_{N,2s} = 2^(2s) * s * Gamma((N+2s)/2) / (pi^(N/2) * Gamma(1-s)),
    chosen so the integral form has symbol |xi|^(2s).  At N=1, s=1/2
    this is 1/pi.
    """
    n, two_s = dimension, 2.0 * s
    return (
        2.0**two_s
        * s
        * math.gamma((n + two_s) / 2.0)
        / (math.pi ** (n / 2.0) * math.gamma(1.0 - s))
    )


def extension_flux_constant(sigma: float) -> float:
    """mu_sigma = 2^(sigma-1) * Gamma(sigma/2) / Gamma(1 - sigma/2).

    Relates the weighted boundary flux of the extension to (-Delta)^(sigma/2);
    equals 1 at sigma = 1.
    """
    return 2.0 ** (sigma - 1.0) * math.gamma(sigma / 2.0) / math.gamma(1.0 - sigma / 2.0)


# ---------------------------------------------------------------------------
# spectral realization


def _rfft_wavenumbers(grid: GridSpec):
    """|xi|^2 on the rfft(n) layout; xi = pi*k/L along each axis."""
    two_pi = 2.0 * math.pi
    if grid.dimension == 1:
        xi = two_pi * np.fft.rfftfreq(grid.n, d=grid.h)
        return xi**2
    xi_full = two_pi * np.fft.fftfreq(grid.n, d=grid.h)
    xi_half = two_pi * np.fft.rfftfreq(grid.n, d=grid.h)
    return xi_full[:, None] ** 2 + xi_half[None, :] ** 2


def spectral_symbol(grid: GridSpec, s: float) -> np.ndarray:
    """Multiplier |xi|^(2s) on the rfft layout, zero at the zero mode."""
    xi2 = _rfft_wavenumbers(grid)
    sym = np.zeros_like(xi2)
    nz = xi2 > 0.0
    sym[nz] = xi2[nz] ** s
    return sym


def _apply_multiplier(values: np.ndarray, mult: np.ndarray, dimension: int) -> np.ndarray:
    if dimension == 1:
        return np.fft.irfft(mult * np.fft.rfft(values), n=values.shape[0])
    axes = tuple(range(values.ndim))
    return np.fft.irfftn(mult * np.fft.rfftn(values, axes=axes), s=values.shape, axes=axes)


def frac_laplacian_spectral(g: Field, order: FracOrder) -> Field:
    """(-Delta)^s g via the Fourier multiplier |xi|^(2s).

    Exact on the discrete trigonometric basis; the zero mode maps to zero,
    so the output always has zero mean.
    """
    sym = spectral_symbol(g.grid, order.s)
    out = _apply_multiplier(g.values, sym, g.grid.dimension)
    return g.with_values(out, {"realization": "spectral", "s": order.s})


def riesz_inverse(g: Field, order: FracOrder, mean_tol: float = 1e-10) -> Field:
    """Inverse of the spectral realization on mean-zero fields.

    Divides by |xi|^(2s) away from the zero mode.  The input must have
    |mean| <= mean_tol * sup|g|; the inverse of a constant does not exist.
    """
    sup = float(np.max(np.abs(g.values)))
    mean = float(np.mean(g.values))
    if sup > 0.0 and abs(mean) > mean_tol * sup:
        raise OperatorError(
            f"riesz_inverse needs mean-zero input: |mean|={abs(mean):.3e} "
            f"exceeds {mean_tol:.1e} * sup"
        )
    sym = spectral_symbol(g.grid, order.s)
    inv = np.zeros_like(sym)
    nz = sym > 0.0
    inv[nz] = 1.0 / sym[nz]
    out = _apply_multiplier(g.values - mean, inv, g.grid.dimension)
    return g.with_values(out, {"realization": "riesz-inverse", "s": order.s})


# ---------------------------------------------------------------------------
# singular-integral quadrature (1-D, zero extension)


class _QuadratureKernel:
    """Precomputed cell weights for the symmetrized second-difference form.

    The integral over y > 0 of D(x,y) / y^(1+2s), with the second
    difference D(x,y) = 2g(x) - g(x+y) - g(x-y) known at the grid offsets
    y_j = j h, is discretized on cells [jh - h/2, jh + h/2].  On each cell
    D is reconstructed by the quadratic through its three nearest offsets
    (D(x,0) = 0 supplies the left node of the first cell) and integrated
    against the exact kernel moments of the cell, so the kernel
    singularity never meets a polynomial approximation error larger than
    O(h^(4-2s)).  The near-origin cell [0, h/2] uses the evenness of D,
    interpolating in y^2 through D at offsets h and 2h; beyond the last
    cell both shifted arguments leave the box, D == 2g(x), and the tail
    integral is attached in closed form.
    """

    def __init__(self, grid: GridSpec, s: float):
        if grid.dimension != 1:
            raise OperatorError("quadrature realization is 1-D only")
        n, h = grid.n, grid.h
        two_s = 2.0 * s
        self.grid, self.s = grid, s
        self.constant = quadrature_constant(1, s)

        jmax = n + 2
        j = np.arange(1, jmax + 1, dtype=float)
        lo, hi = (j - 0.5) * h, (j + 0.5) * h

        def mom(p, a, b):
            q = p - two_s
            if abs(q) < 1e-12:  # logarithmic moment, e.g. p = 1 at s = 1/2
                return np.log(b / a)
            return (b**q - a**q) / q

        m0 = mom(0.0, lo, hi)
        m1 = mom(1.0, lo, hi)
        m2 = mom(2.0, lo, hi)

        # quadratic Lagrange on offsets {(j-1)h, jh, (j+1)h} integrated
        # against the kernel over cell j
        ya, yb, yc = (j - 1.0) * h, j * h, (j + 1.0) * h
        c_left = (m2 - (yb + yc) * m1 + yb * yc * m0) / (2.0 * h * h)
        c_mid = -(m2 - (ya + yc) * m1 + ya * yc * m0) / (h * h)
        c_right = (m2 - (ya + yb) * m1 + ya * yb * m0) / (2.0 * h * h)

        w = np.zeros(jmax + 1)
        np.add.at(w, np.arange(1, jmax + 1), c_mid)
        np.add.at(w, np.arange(0, jmax), c_left)
        np.add.at(w, np.arange(2, jmax + 2)[: jmax - 1], c_right[: jmax - 1])
        # the last cell's right node sits past the cutoff where D == 2g;
        # fold it into the tail coefficient instead of the stencil
        tail_from_stencil = c_right[-1]

        # origin cell [0, h/2]: D is even, D(0) = 0; interpolate in y^2
        # through D(h), D(2h) and integrate the exact moments
        m2o = (h / 2.0) ** (2.0 - two_s) / (2.0 - two_s)
        m4o = (h / 2.0) ** (4.0 - two_s) / (4.0 - two_s)
        w[1] += (4.0 * h * h * m2o - m4o) / (3.0 * h**4)
        w[2] += (m4o - h * h * m2o) / (12.0 * h**4)

        self.offset_weights = w[1:]  # weight of D(x, jh), j = 1..jmax+1
        self.tail = hi[-1] ** (-two_s) / two_s + tail_from_stencil
        self.cutoff = hi[-1]

        m = self.offset_weights.size
        kern = np.zeros(2 * m + 1)
        kern[m + 1 :] = self.offset_weights
        kern[:m] = self.offset_weights[::-1]
        self._m = m
        self._pad = sfft.next_fast_len(n + kern.size - 1)
        self._kern_hat = np.fft.rfft(kern, self._pad)
        self.diag = 2.0 * (self.offset_weights.sum() + self.tail)

    def apply(self, values: np.ndarray) -> np.ndarray:
        full = np.fft.irfft(np.fft.rfft(values, self._pad) * self._kern_hat, self._pad)
        cross = full[self._m : self._m + values.size]
        return self.constant * (self.diag * values - cross)


_QUAD_CACHE: dict = {}


def _quadrature_kernel(grid: GridSpec, s: float) -> _QuadratureKernel:
    key = (grid.n, grid.half_length, s)
    kern = _QUAD_CACHE.get(key)
    if kern is None:
        kern = _QuadratureKernel(grid, s)
        if len(_QUAD_CACHE) > 32:
            _QUAD_CACHE.clear()
        _QUAD_CACHE[key] = kern
    return kern


def frac_laplacian_quadrature(g: Field, order: FracOrder) -> Field:
    """(-Delta)^s g by singular-integral quadrature, 1-D.

    g is treated as extended by zero outside [-L, L), so the result
    differs from the periodic spectral realization by the box-truncation
    error; on smooth fields that vanish well inside the box the two agree
    away from the edges.
    """
    kern = _quadrature_kernel(g.grid, order.s)
    out = kern.apply(g.values)
    meta = {
        "realization": "quadrature",
        "s": order.s,
        "constant": kern.constant,
        "extension": "zero",
        "tail_cutoff": kern.cutoff,
    }
    return g.with_values(out, meta)


# ---------------------------------------------------------------------------
# heat-semigroup quadrature


def _gamma_upper_neg(s: float, x: np.ndarray) -> np.ndarray:
    """Gamma(-s, x) for s in (0,1), by recurrence from Gamma(1-s, x)."""
    upper_1ms = math.gamma(1.0 - s) * gammaincc(1.0 - s, x)
    return (upper_1ms - x ** (-s) * np.exp(-x)) / (-s)


def _semigroup_symbol(lam: np.ndarray, s: float, t_min: float, t_max: float, nodes: int):
    """Approximate lambda^s via (1/Gamma(-s)) int (e^(-t*lam) - 1) t^(-1-s) dt.

    Composite Simpson rule on log-spaced nodes over [t_min, t_max]; both
    endpoint remainders int_0^{t_min} and int_{t_max}^inf are integrated
    analytically in terms of the upper incomplete Gamma function, so the
    only approximation left is the window quadrature itself.
    """
    gam_neg_s = math.gamma(-s)  # negative for s in (0,1)
    tau = np.exp(np.linspace(math.log(t_min), math.log(t_max), nodes))
    lam_c = lam[:, None]
    integrand = np.expm1(-lam_c * tau[None, :]) * tau[None, :] ** (-s)  # f(t) * t
    mid = simpson(integrand, x=np.log(tau), axis=1)

    # int_0^{t_min} (e^(-lam t) - 1) t^(-1-s) dt, exactly:
    # Gamma(-s) lam^s + t_min^(-s)/s - lam^s Gamma(-s, lam t_min)
    x0 = lam * t_min
    small = gam_neg_s * lam**s + t_min ** (-s) / s - lam**s * _gamma_upper_neg(s, x0)

    # int_{t_max}^inf: the -1 part is -t_max^(-s)/s, the e^(-lam t) part
    # is lam^s Gamma(-s, lam t_max)
    x1 = lam * t_max
    big = -t_max ** (-s) / s + lam**s * _gamma_upper_neg(s, x1)

    sym = (mid + small + big) / gam_neg_s
    rem = np.abs(small / gam_neg_s)
    return sym, rem


def frac_laplacian_semigroup(
    g: Field,
    order: FracOrder,
    t_min: float = 1e-6,
    t_max: float = 1e3,
    nodes: int = 256,
    tol: float = 1e-3,
) -> Field:
    """(-Delta)^s g through the heat semigroup e^(t*Delta).

    Diagonal in Fourier, so the time integral reduces per mode to a scalar
    quadrature of (e^(-t|xi|^2) - 1) t^(-1-s).  The estimated truncation
    error (small-t Taylor remainder plus a node-halving check) is reported
    in the metadata; if it exceeds `tol` relative to the symbol the window
    is rejected.
    """
    if nodes < 32:
        raise OperatorError(f"semigroup quadrature needs >= 32 nodes, got {nodes}")
    if not (0.0 < t_min < t_max):
        raise OperatorError("semigroup window must satisfy 0 < t_min < t_max")
    s = order.s
    xi2 = _rfft_wavenumbers(g.grid)
    lam, inv = np.unique(xi2.ravel(), return_inverse=True)
    pos = lam > 0.0

    sym_pos, rem = _semigroup_symbol(lam[pos], s, t_min, t_max, nodes)
    # node-halving probe; deliberately below the primary floor so the
    # comparison never degenerates into the identical rule
    sym_half, _ = _semigroup_symbol(lam[pos], s, t_min, t_max, nodes // 2 + 1)
    exact_scale = lam[pos] ** s
    rel_err = np.abs(sym_pos - sym_half) / exact_scale
    worst = float(np.max(rel_err)) if rel_err.size else 0.0
    if worst > tol:
        raise SemigroupWindowError(
            f"estimated truncation error {worst:.2e} exceeds tol {tol:.1e}; "
            "widen [t_min, t_max] or add nodes"
        )

    sym = np.zeros_like(lam)
    sym[pos] = sym_pos
    mult = sym[inv].reshape(xi2.shape)
    out = _apply_multiplier(g.values, mult, g.grid.dimension)
    meta = {
        "realization": "semigroup",
        "s": s,
        "t_min": t_min,
        "t_max": t_max,
        "nodes": nodes,
        "small_t_remainder_bound": float(np.max(rem)) if rem.size else 0.0,
        "estimated_rel_error": worst,
    }
    return g.with_values(out, meta)


# ---------------------------------------------------------------------------
# extension problem


@dataclass(frozen=True)
class ExtensionMesh:
    """Graded mesh 0 < y_1 < ... < y_M = Y for the extension variable.

    The default grading y_j = Y (j/M)^(2/sigma) concentrates nodes at the
    degenerate boundary y = 0 where the weight y^(1-sigma) loses
    integrability of its reciprocal.
    """

    nodes: np.ndarray
    cap: float

    def __post_init__(self):
        y = np.asarray(self.nodes, dtype=float)
        if y.ndim != 1 or y.size < 8:
            raise ValidationError("extension mesh needs at least 8 nodes")
        if not (np.all(np.diff(y) > 0.0) and y[0] > 0.0):
            raise ValidationError("extension mesh nodes must be strictly increasing and positive")
        if not math.isclose(y[-1], self.cap):
            raise ValidationError("last mesh node must equal the cap Y")
        object.__setattr__(self, "nodes", y)

    @classmethod
    def graded(
        cls,
        order: FracOrder,
        cap: float,
        first: float,
        gamma: Optional[float] = None,
        node_count: Optional[int] = None,
    ):
        """Mesh y_j = Y (j/M)^gamma with grading exponent 2/sigma by default.

        `first` bounds the finest cell: M is raised until y_1 <= first.
        The default M also carries a resolution floor of 256 nodes; the
        boundary flux converges like y_1^(2-sigma), so sigma close to 2
        needs y_1 well below the horizontal spacing and the y_1 <= first
        constraint dominates there.
        """
        if gamma is None:
            # 2/sigma makes the singular branch y^sigma uniform in j; the
            # two-point conductances are exact on that branch for any mesh,
            # so for sigma > 1 the binding constraint is the first-cell
            # height (flux error ~ y_1^(2-sigma)) and stronger grading wins
            gamma = max(2.0, 2.0 / order.sigma)
        m_first = int(math.ceil((cap / first) ** (1.0 / gamma))) + 2
        if node_count is None:
            m = max(512, 2 * m_first)
            if order.sigma > 1.0:
                # first-cell flux error ~ y_1^(2-sigma); aim y_1 small
                # enough for a few-per-mille budget, capped for runtime
                y1_target = 5e-3 ** (1.0 / (2.0 - order.sigma))
                m = max(m, min(8192, int(math.ceil((cap / y1_target) ** (1.0 / gamma)))))
        else:
            m = int(node_count)
        if m < 8:
            raise ValidationError("extension mesh needs at least 8 nodes")
        j = np.arange(1, m + 1, dtype=float)
        return cls(cap * (j / m) ** gamma, cap)


def frac_laplacian_extension(
    g: Field,
    order: FracOrder,
    mesh: Optional[ExtensionMesh] = None,
    cap_factor: float = 10.0,
    flux_tol: float = 0.10,
) -> Field:
    """(-Delta)^(sigma/2) g from the weighted extension problem.

    Solves div(y^(1-sigma) grad v) = 0 on box x (0, Y) with v(x,0) = g and
    v(x,Y) = 0, diagonalized per Fourier mode in x, with a two-point flux
    discretization in y whose conductances integrate the weight exactly.
    The operator is -mu_sigma times the first-cell weighted flux.  If the
    flux estimates from the two finest cells disagree by more than
    `flux_tol` relative to the output, the mesh is rejected.
    """
    if g.grid.dimension != 1:
        raise OperatorError("extension realization is 1-D only")
    sigma = order.sigma
    h = g.grid.h
    if mesh is None:
        mesh = ExtensionMesh.graded(order, cap_factor * g.grid.half_length, h)
    y = mesh.nodes
    if y[0] > h * (1.0 + 1e-12):
        raise ExtensionMeshError(
            f"first mesh node y1={y[0]:.3e} coarser than grid spacing h={h:.3e}"
        )

    yfull = np.concatenate(([0.0], y))  # y_0 = 0 holds the data
    m_nodes = y.size
    # conductance over [y_j, y_j+1]: sigma / (y_{j+1}^sigma - y_j^sigma)
    cond = sigma / np.diff(yfull**sigma)
    # weight mass per control volume around interior nodes 1..M-1
    mid = 0.5 * (yfull[1:] + yfull[:-1])
    mom = mid ** (2.0 - sigma) / (2.0 - sigma)
    mass = np.diff(mom)

    ghat = np.fft.rfft(g.values)
    lam = _rfft_wavenumbers(g.grid)

    n_int = m_nodes - 1
    lower = -cond[1:n_int]
    upper = -cond[1:n_int]
    diag = cond[:n_int] + cond[1 : n_int + 1] + np.multiply.outer(lam, mass[:n_int])

    # Thomas elimination vectorized over modes
    v = np.zeros((lam.size, n_int), dtype=complex)
    rhs = np.zeros_like(v)
    rhs[:, 0] = cond[0] * ghat
    cp = np.zeros((lam.size, n_int - 1))
    dp = np.zeros_like(v)
    cp[:, 0] = upper[0] / diag[:, 0]
    dp[:, 0] = rhs[:, 0] / diag[:, 0]
    for j in range(1, n_int):
        denom = diag[:, j] - lower[j - 1] * cp[:, j - 1]
        if j < n_int - 1:
            cp[:, j] = upper[j] / denom
        dp[:, j] = (rhs[:, j] - lower[j - 1] * dp[:, j - 1]) / denom
    v[:, n_int - 1] = dp[:, n_int - 1]
    for j in range(n_int - 2, -1, -1):
        v[:, j] = dp[:, j] - cp[:, j] * v[:, j + 1]

    mu = extension_flux_constant(sigma)
    flux1 = cond[0] * (v[:, 0] - ghat)
    flux2 = cond[1] * (v[:, 1] - v[:, 0])
    out1 = np.fft.irfft(-mu * flux1, n=g.grid.n)
    out2 = np.fft.irfft(-mu * flux2, n=g.grid.n)
    scale = float(np.max(np.abs(out1)))
    drift = float(np.max(np.abs(out1 - out2)))
    if scale > 0.0 and drift > flux_tol * scale:
        raise ExtensionMeshError(
            f"boundary flux not converged: finest-cell estimates differ by "
            f"{drift / scale:.1%} (> {flux_tol:.0%}); refine the mesh"
        )
    meta = {
        "realization": "extension",
        "s": order.s,
        "sigma": sigma,
        "cap": mesh.cap,
        "mesh_nodes": int(m_nodes),
        "flux_constant": mu,
        "flux_drift_rel": drift / scale if scale > 0.0 else 0.0,
    }
    return g.with_values(out1, meta)


# ---------------------------------------------------------------------------
# spectral Dirichlet operator on (0, pi)


def dirichlet_points(n: int) -> np.ndarray:
    """Interior uniform grid x_i = i*pi/n, i = 1..n-1."""
    if n < 8:
        raise ValidationError(f"dirichlet grid needs n >= 8, got {n}")
    return math.pi * np.arange(1, n) / n


def dirichlet_spectral_apply(
    values: np.ndarray, order: FracOrder, modes: Optional[int] = None
) -> np.ndarray:
    """Spectral fractional Dirichlet Laplacian on (0, pi).

    Expands in the sine eigenbasis sin(j x) (eigenvalues j^2) via DST-I on
    the interior grid and multiplies coefficient j by j^(2s).  Homogeneous
    boundary values are implicit in the basis.
    """
    v = np.asarray(values, dtype=float)
    m = v.shape[0]
    j = np.arange(1, m + 1, dtype=float)
    mult = j ** (2.0 * order.s)
    if modes is not None:
        if not (1 <= modes <= m):
            raise OperatorError(f"modes must be in [1, {m}], got {modes}")
        mult = np.where(j <= modes, mult, 0.0)
    coeffs = dst(v, type=1)
    return idst(coeffs * mult, type=1)


# ---------------------------------------------------------------------------
# realization selector


@dataclass(frozen=True)
class OperatorSpec:
    """Which realization of (-Delta)^s a run applies, plus its knobs."""

    kind: str = "spectral"
    t_min: float = 1e-6
    t_max: float = 1e3
    nodes: int = 256
    cap_factor: float = 10.0
    modes: Optional[int] = None

    KINDS = ("spectral", "quadrature", "semigroup", "extension", "dirichlet")

    def __post_init__(self):
        if self.kind not in self.KINDS:
            raise ValidationError(f"unknown operator kind {self.kind!r}")

    def bind(self, grid: GridSpec, order: FracOrder):
        """Return apply(values) -> values with everything precomputed."""
        if self.kind == "spectral":
            sym = spectral_symbol(grid, order.s)
            dim = grid.dimension

            def apply_spectral(values):
                return _apply_multiplier(values, sym, dim)

            return apply_spectral

        if self.kind == "quadrature":
            kern = _quadrature_kernel(grid, order.s)
            return kern.apply

        if self.kind == "semigroup":
            probe = Field(grid, np.zeros(grid.shape))
            spec = self

            def apply_semigroup(values):
                out = frac_laplacian_semigroup(
                    probe.with_values(values),
                    order,
                    t_min=spec.t_min,
                    t_max=spec.t_max,
                    nodes=spec.nodes,
                )
                return out.values

            return apply_semigroup

        if self.kind == "extension":
            mesh = ExtensionMesh.graded(order, self.cap_factor * grid.half_length, grid.h)
            probe = Field(grid, np.zeros(grid.shape))

            def apply_extension(values):
                return frac_laplacian_extension(probe.with_values(values), order, mesh).values

            return apply_extension

        raise OperatorError("dirichlet realization binds through the dirichlet solver")
