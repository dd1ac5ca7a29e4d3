"""Time integration of d_t u + (-Delta)^s phi(u) = f(u) on the periodic box.

Explicit Euler under a symbol-based CFL bound, with an implicit-explicit
variant for the linear diffusion case.  The stepper is deliberately
deterministic: step sizes depend only on the current state and the time
left in the current snapshot segment, never on the absolute clock, so
reruns are bit-identical and a run restarted from a recorded snapshot
reproduces the continuation bit for bit when marched over the same
segment spans.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field as dc_field, replace
from typing import Callable, Optional, Sequence

import numpy as np

from .diagnostics import norms, spectral_energy
from .grid import Field, FracOrder, GridSpec, ValidationError
from .operators import OperatorSpec, _rfft_wavenumbers, dirichlet_points, dirichlet_spectral_apply

_TINY_AMP = 1e-30


@dataclass(frozen=True)
class Nonlinearity:
    """phi(u) entering the diffusion term; odd-extended so small negative
    undershoots from dealiasing stay harmless."""

    kind: str = "power"
    exponent: float = 1.0
    phi_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    dphi_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None

    def __post_init__(self):
        if self.kind not in ("power", "logarithmic", "custom"):
            raise ValidationError(f"unknown nonlinearity kind: {self.kind!r}")
        if self.kind == "power" and not (0.0 < self.exponent <= 5.0):
            raise ValidationError(f"power exponent must lie in (0, 5], got {self.exponent}")
        if self.kind == "custom" and (self.phi_fn is None or self.dphi_fn is None):
            raise ValidationError("custom nonlinearity needs phi_fn and dphi_fn")

    def phi(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "power":
            m = self.exponent
            if m == 1.0:
                return u
            return np.sign(u) * np.abs(u) ** m
        if self.kind == "logarithmic":
            return np.sign(u) * np.log1p(np.abs(u))
        return self.phi_fn(u)

    def dphi_sup(self, amp: float, floor: float) -> float:
        """Largest phi' on amplitudes [floor, amp]; the CFL denominator."""
        lo = max(floor, _TINY_AMP)
        hi = max(amp, lo)
        if self.kind == "power":
            m = self.exponent
            if m == 1.0:
                return 1.0
            # phi' = m |u|^(m-1): increasing for m > 1, diverging at 0 for m < 1
            return m * hi ** (m - 1.0) if m > 1.0 else m * lo ** (m - 1.0)
        if self.kind == "logarithmic":
            return 1.0 / (1.0 + lo)
        probe = np.geomspace(lo, hi, 64)
        return float(np.max(np.abs(self.dphi_fn(probe))))


@dataclass(frozen=True)
class Reaction:
    """Source term f(u); `kpp` is the concave logistic r u (1 - u)."""

    kind: str = "none"
    rate: float = 0.0
    f_fn: Optional[Callable[[np.ndarray], np.ndarray]] = None
    slope0: float = 0.0

    def __post_init__(self):
        if self.kind not in ("none", "kpp", "custom"):
            raise ValidationError(f"unknown reaction kind: {self.kind!r}")
        if self.kind == "kpp" and self.rate <= 0.0:
            raise ValidationError("kpp reaction needs a positive rate")
        if self.kind == "custom" and self.f_fn is None:
            raise ValidationError("custom reaction needs f_fn")

    @property
    def active(self) -> bool:
        return self.kind != "none"

    def f(self, u: np.ndarray) -> np.ndarray:
        if self.kind == "none":
            return np.zeros_like(u)
        if self.kind == "kpp":
            return self.rate * u * (1.0 - u)
        return self.f_fn(u)

    def slope_at_zero(self) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "kpp":
            return self.rate
        return self.slope0

    def stiffness(self, amp: float) -> float:
        if self.kind == "none":
            return 0.0
        if self.kind == "kpp":
            # |f'(u)| = r |1 - 2u| on [0, amp]
            return self.rate * max(1.0, abs(1.0 - 2.0 * amp))
        return abs(self.slope0)


@dataclass(frozen=True)
class SolverConfig:
    operator: OperatorSpec = dc_field(default_factory=OperatorSpec)
    scheme: str = "explicit"
    c_cfl: float = 0.2
    dt_cap: Optional[float] = None
    dt_floor: float = 1e-13
    cfl_amp_floor_rel: float = 1e-6
    dealias: bool = True
    blowup_ceiling: float = 1e8
    extinction_threshold: float = 1e-10
    record_every: int = 1
    max_steps: int = 2_000_000

    def __post_init__(self):
        if self.scheme not in ("explicit", "imex-linear"):
            raise ValidationError(f"unknown scheme: {self.scheme!r}")
        if not (0.0 < self.c_cfl <= 1.0):
            raise ValidationError(f"c_cfl must lie in (0, 1], got {self.c_cfl}")
        if self.record_every < 1:
            raise ValidationError("record_every must be >= 1")


@dataclass
class RunResult:
    """State snapshots plus per-step series of the conserved and decaying
    quantities; `status` tells how the run ended."""

    status: str
    times: np.ndarray
    series: dict
    snapshots: list
    steps: int
    extinction_bracket: Optional[tuple] = None
    meta: dict = dc_field(default_factory=dict)

    def snapshot_at(self, t: float) -> Field:
        for tt, f in self.snapshots:
            if math.isclose(tt, t, rel_tol=0.0, abs_tol=1e-12 * max(1.0, abs(t))):
                return f
        raise KeyError(f"no snapshot recorded at t = {t}")


def dealias_two_thirds(values: np.ndarray, grid: GridSpec) -> np.ndarray:
    """Zero every mode above 2/3 of the Nyquist index."""
    cut = grid.n // 3
    if grid.dimension == 1:
        hat = np.fft.rfft(values)
        k = np.arange(hat.size)
        hat[k > cut] = 0.0
        return np.fft.irfft(hat, n=grid.n)
    hat = np.fft.rfftn(values, axes=(0, 1))
    k0 = np.abs(np.fft.fftfreq(grid.n) * grid.n)
    k1 = np.arange(hat.shape[1])
    hat[k0 > cut, :] = 0.0
    hat[:, k1 > cut] = 0.0
    return np.fft.irfftn(hat, s=values.shape, axes=(0, 1))


def _symbol_top(grid: GridSpec, order: FracOrder) -> float:
    xi2 = _rfft_wavenumbers(grid)
    return float(np.max(xi2) ** order.s)


def _record(series: dict, t: float, f: Field, order: FracOrder, rate: float):
    row = norms(f)
    series["t"].append(t)
    for k, v in row.items():
        series[k].append(v)
    series["energy"].append(spectral_energy(f, order))
    series["max_rate"].append(rate)


def solve(
    initial: Field,
    order: FracOrder,
    nonlinearity: Nonlinearity,
    t_end: float,
    config: Optional[SolverConfig] = None,
    reaction: Optional[Reaction] = None,
    snapshots: Sequence[float] = (),
) -> RunResult:
    """March d_t u = -(-Delta)^s phi(u) + f(u) from `initial` to `t_end`.

    Snapshot times are hit exactly (the step is clipped, never interpolated).
    Ends early with status "extinct" when sup|u| falls below the
    extinction threshold (recording a bracket around the vanishing time),
    "blowup" past the ceiling, or "deadlock" when the admissible step
    collapses below dt_floor.
    """
    cfg = config or SolverConfig()
    reac = reaction or Reaction()
    if t_end <= 0.0:
        raise ValidationError(f"t_end must be positive, got {t_end}")
    if cfg.scheme == "imex-linear":
        if not (nonlinearity.kind == "power" and nonlinearity.exponent == 1.0):
            raise ValidationError("imex-linear scheme requires the identity nonlinearity")
        if cfg.operator.kind != "spectral":
            raise ValidationError("imex-linear scheme requires the spectral operator")

    grid, u = initial.grid, initial.values.copy()
    if cfg.dealias and cfg.scheme == "explicit":
        # the state lives in the truncated space: modes above the cutoff
        # would otherwise never couple to the damping applied to phi(u).
        # Skip the projection when it changes nothing beyond roundoff so a
        # restart from a snapshot keeps the exact recorded bits.
        proj = dealias_two_thirds(u, grid)
        amp0 = float(np.max(np.abs(u)))
        if float(np.max(np.abs(proj - u))) > 1e-13 * max(1.0, amp0):
            u = proj
    apply_op = cfg.operator.bind(grid, order)
    lam_top = _symbol_top(grid, order)
    sym = None
    if cfg.scheme == "imex-linear":
        xi2 = _rfft_wavenumbers(grid)
        sym = np.zeros_like(xi2)
        np.power(xi2, order.s, out=sym, where=xi2 > 0.0)

    user_snaps = set(float(t) for t in snapshots if 0.0 < float(t) <= t_end)
    raw = sorted(user_snaps | {float(t_end)})
    targets, want_snap = [raw[0]], [raw[0] in user_snaps]
    for t_next in raw[1:]:  # merge targets that differ only in rounding
        if t_next - targets[-1] > 1e-12 * max(1.0, t_next):
            targets.append(t_next)
            want_snap.append(t_next in user_snaps)
        else:
            want_snap[-1] = want_snap[-1] or (t_next in user_snaps)

    series = {k: [] for k in ("t", "mass", "l1", "l2", "l4", "linf", "min", "energy", "max_rate")}
    snaps = []
    f0 = Field(grid, u.copy(), {"t": 0.0})
    if 0.0 in set(float(t) for t in snapshots):
        snaps.append((0.0, f0))
    _record(series, 0.0, f0, order, 0.0)

    steps = 0
    status = "completed"
    bracket = None
    prev = 0.0
    last_alive_t = 0.0

    for target, keep in zip(targets, want_snap):
        span = target - prev
        if not span > 0.0:
            prev = target
            continue
        tau = 0.0  # clock within this segment; decisions never see `prev`
        while status == "completed":
            t = prev + tau
            amp = float(np.max(np.abs(u)))
            if not math.isfinite(amp) or amp > cfg.blowup_ceiling:
                status = "blowup"
                break
            if amp < cfg.extinction_threshold:
                status = "extinct"
                bracket = (last_alive_t, t)
                break
            last_alive_t = t

            floor = cfg.cfl_amp_floor_rel * amp
            denom = nonlinearity.dphi_sup(amp, floor) * lam_top + reac.stiffness(amp)
            if cfg.scheme == "imex-linear":
                denom = reac.stiffness(amp) if reac.active else 0.0
                dt = cfg.c_cfl / denom if denom > 0.0 else (cfg.dt_cap or (span - tau))
            else:
                dt = cfg.c_cfl / denom if denom > 0.0 else (span - tau)
            if cfg.dt_cap is not None:
                dt = min(dt, cfg.dt_cap)
            hit = tau + dt >= span - 1e-15 * max(1.0, span)
            if hit:
                dt = span - tau
            if dt < cfg.dt_floor:
                if not hit:
                    status = "deadlock"
                    break
                # the clock is already at the target to rounding: land
                # without a step instead of tripping the deadlock guard
                f_now = Field(grid, u.copy(), {"t": target})
                _record(series, target, f_now, order, 0.0)
                if keep:
                    snaps.append((target, f_now))
                break

            if cfg.scheme == "imex-linear":
                rhs = u + dt * reac.f(u) if reac.active else u
                u_new = np.fft.irfft(np.fft.rfft(rhs) / (1.0 + dt * sym), n=grid.n) \
                    if grid.dimension == 1 else _imex_2d(rhs, dt, sym, grid)
            else:
                w = nonlinearity.phi(u)
                if cfg.dealias:
                    w = dealias_two_thirds(w, grid)
                du = -apply_op(w)
                if reac.active:
                    du += reac.f(u)
                u_new = u + dt * du
                if cfg.dealias:
                    u_new = dealias_two_thirds(u_new, grid)

            rate = float(np.max(np.abs(u_new - u))) / dt
            u = u_new
            tau = span if hit else tau + dt
            t = target if hit else prev + tau
            steps += 1

            f_now = Field(grid, u.copy(), {"t": t})
            if steps % cfg.record_every == 0 or hit:
                _record(series, t, f_now, order, rate)
            if hit:
                if keep:
                    snaps.append((t, f_now))
                break
            if steps >= cfg.max_steps:
                status = "deadlock"
                break
        if status != "completed":
            break
        prev = target

    return RunResult(
        status=status,
        times=np.asarray(series["t"]),
        series={k: np.asarray(v) for k, v in series.items() if k != "t"},
        snapshots=snaps,
        steps=steps,
        extinction_bracket=bracket,
        meta={
            "scheme": cfg.scheme,
            "operator": cfg.operator.kind,
            "s": order.s,
            "lam_top": lam_top,
            "t_end": t_end,
        },
    )


def _imex_2d(rhs: np.ndarray, dt: float, sym: np.ndarray, grid: GridSpec) -> np.ndarray:
    hat = np.fft.rfftn(rhs, axes=(0, 1))
    return np.fft.irfftn(hat / (1.0 + dt * sym), s=rhs.shape, axes=(0, 1))


# ---------------------------------------------------------------------------
# Dirichlet evolution on (0, pi)


@dataclass
class DirichletResult:
    status: str
    times: np.ndarray
    first_mode: np.ndarray
    sup: np.ndarray
    snapshots: list
    steps: int


def solve_dirichlet(
    u0: np.ndarray,
    order: FracOrder,
    exponent: float,
    t_end: float,
    snapshots: Sequence[float] = (),
    c_cfl: float = 0.2,
    dt_cap: Optional[float] = None,
    record_every: int = 1,
    max_steps: int = 2_000_000,
) -> DirichletResult:
    """March d_t u + (-Delta_D)^s u^m = 0 on the interval with zero exterior.

    `u0` holds interior values on dirichlet_points(n); the series tracks
    sup u and the pairing int u sin(x) dx against the ground mode.
    """
    u = np.asarray(u0, dtype=float).copy()
    n = u.size + 1
    x = dirichlet_points(n)
    h = math.pi / n
    phi1 = np.sin(x)
    nl = Nonlinearity(kind="power", exponent=exponent)
    lam_top = float((n - 1) ** (2.0 * order.s))

    t = 0.0
    steps = 0
    status = "completed"
    targets = sorted(
        set(float(tt) for tt in snapshots if 0.0 < float(tt) <= t_end) | {float(t_end)}
    )
    next_idx = 0
    times, first_mode, sup = [0.0], [float(np.sum(u * phi1) * h)], [float(np.max(np.abs(u)))]
    snaps = []
    if 0.0 in set(float(tt) for tt in snapshots):
        snaps.append((0.0, u.copy()))

    while t < t_end * (1.0 - 1e-15):
        amp = float(np.max(np.abs(u)))
        if not math.isfinite(amp) or amp > 1e8:
            status = "blowup"
            break
        if amp < 1e-14:
            status = "extinct"
            break
        floor = 1e-6 * amp
        dt = c_cfl / (nl.dphi_sup(amp, floor) * lam_top)
        if dt_cap is not None:
            dt = min(dt, dt_cap)
        target = targets[next_idx]
        hit = False
        if t + dt >= target - 1e-15 * max(1.0, target):
            dt = target - t
            hit = True
        if dt < 1e-13:
            if not hit:
                status = "deadlock"
                break
            # already at the target to rounding: land without a step
            t = target
            times.append(t)
            first_mode.append(float(np.sum(u * phi1) * h))
            sup.append(float(np.max(np.abs(u))))
            snaps.append((t, u.copy()))
            next_idx += 1
            if next_idx >= len(targets):
                break
            continue
        u = u - dt * dirichlet_spectral_apply(nl.phi(u), order)
        t = target if hit else t + dt
        steps += 1
        if steps % record_every == 0 or hit:
            times.append(t)
            first_mode.append(float(np.sum(u * phi1) * h))
            sup.append(float(np.max(np.abs(u))))
        if hit:
            snaps.append((t, u.copy()))
            next_idx += 1
            if next_idx >= len(targets):
                break
        if steps >= max_steps:
            status = "deadlock"
            break

    return DirichletResult(
        status=status,
        times=np.asarray(times),
        first_mode=np.asarray(first_mode),
        sup=np.asarray(sup),
        snapshots=snaps,
        steps=steps,
    )
