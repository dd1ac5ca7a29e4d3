"""Execute one run configuration end to end and write its artifacts.

A run directory holds: diagnostics.csv (one row per recorded step),
snapshot_XXX.f64 raw fields with JSON sidecars, final.csv, front.csv for
reaction runs, summary.json, and manifest.json referencing every file.
"""

from __future__ import annotations

from dataclasses import dataclass
from pathlib import Path

import numpy as np

from . import __version__
from .config import (
    RunManifest,
    grid_from_doc,
    initial_field,
    model_params_from_doc,
    nonlinearity_from_doc,
    order_from_doc,
    reaction_from_doc,
    schedule_from_doc,
    solver_config_from_doc,
)
from .diagnostics import (
    FrontSeries,
    decay_rate_fit,
    edge_fraction,
    extinction_time_from_bracket,
    norms,
    tail_exponent_fit,
)
from .exponents import kpp_spreading_rates
from .grid import Field, ValidationError
from .io import band_verdict, curve_to_csv, field_to_csv, field_to_raw, json_dump, series_to_csv
from .solver import RunResult, solve

EXIT_OK = 0
EXIT_FAILED = 1
EXIT_BLOWUP = 2
EXIT_DEADLOCK = 3
EXIT_USAGE = 64

_STATUS_EXIT = {"completed": EXIT_OK, "extinct": EXIT_OK,
                "blowup": EXIT_BLOWUP, "deadlock": EXIT_DEADLOCK}


@dataclass
class RunArtifacts:
    run_dir: Path
    result: RunResult
    summary: dict
    exit_code: int


def run_directory(config: dict, out_root) -> Path:
    name = config.get("output", {}).get("dir") or config.get("experiment", "run")
    return Path(out_root) / name


def execute_run(config: dict, out_root=".") -> RunArtifacts:
    """Solve the configured problem and write the artifact set."""
    grid = grid_from_doc(config.get("grid", {}))
    order = order_from_doc(config.get("order", {}))
    nl = nonlinearity_from_doc(config.get("nonlinearity", {}))
    reac = reaction_from_doc(config.get("reaction", {}))
    cfg = solver_config_from_doc(config)
    t_end, snaps = schedule_from_doc(config)
    u0 = initial_field(config, grid)

    res = solve(u0, order, nl, t_end, cfg, reaction=reac, snapshots=snaps)

    run_dir = run_directory(config, out_root)
    run_dir.mkdir(parents=True, exist_ok=True)
    manifest = RunManifest.fresh(config, __version__)
    written = []

    p = series_to_csv(res.times, res.series, run_dir / "diagnostics.csv")
    written.append(p.name)

    for i, (t, f) in enumerate(res.snapshots):
        f.meta = dict(f.meta or {}, operator=cfg.operator.kind, s=order.s)
        p = field_to_raw(f, run_dir / f"snapshot_{i:03d}.f64")
        written += [p.name, p.name + ".json"]

    final = res.snapshots[-1][1] if res.snapshots else Field(grid, u0.values)
    written.append(field_to_csv(final, run_dir / "final.csv").name)

    summary = _summarize(config, res, final)
    if reac.active and len(res.snapshots) >= 8:
        front_doc = _front_analysis(config, res, run_dir)
        if front_doc:
            summary["front"] = front_doc
            written.append("front.csv")

    written.append(json_dump(summary, run_dir / "summary.json").name)
    manifest.outputs = sorted(set(written)) + ["manifest.json"]
    json_dump(manifest.to_doc(), run_dir / "manifest.json")

    return RunArtifacts(
        run_dir=run_dir,
        result=res,
        summary=summary,
        exit_code=_STATUS_EXIT[res.status],
    )


def _summarize(config: dict, res: RunResult, final: Field) -> dict:
    times = res.times
    summary = {
        "status": res.status,
        "steps": res.steps,
        "t_final": float(times[-1]),
        "final_norms": norms(final),
        "mass_drift": float(abs(res.series["mass"][-1] - res.series["mass"][0])),
        "edge_fraction": edge_fraction(final),
        "extinction_time": extinction_time_from_bracket(res.extinction_bracket),
        "extinction_bracket": list(res.extinction_bracket) if res.extinction_bracket else None,
    }
    diag = config.get("diagnostics", {})

    window = diag.get("decay_window")
    if window and res.status in ("completed", "extinct"):
        try:
            fit = decay_rate_fit(times, res.series["linf"], tuple(window))
            summary["decay_fit"] = {
                "quantity": "linf",
                "slope": fit.slope,
                "window": list(fit.window),
                "count": fit.count,
                "residual_rms": fit.residual_rms,
            }
        except ValidationError as e:
            summary["decay_fit"] = {"error": str(e)}

    window = diag.get("tail_window")
    if window and res.status == "completed":
        try:
            fit = tail_exponent_fit(final, tuple(window))
            summary["tail_fit"] = {
                "slope": fit.slope,
                "window": list(fit.window),
                "count": fit.count,
                "residual_rms": fit.residual_rms,
            }
        except ValidationError as e:
            summary["tail_fit"] = {"error": str(e)}
    return summary


def _front_analysis(config: dict, res: RunResult, run_dir: Path):
    """Level-set radius history, its exponential rate, and the rate verdict."""
    diag = config.get("diagnostics", {})
    threshold = float(diag.get("front_threshold", 0.5))
    series = FrontSeries(threshold=threshold)
    for t, f in res.snapshots:
        series.record(t, f)
    curve_to_csv({"t": series.times, "radius": series.radii}, run_dir / "front.csv")

    window = diag.get("front_window")
    if not window:
        return {"threshold": threshold, "series": "front.csv"}
    from .diagnostics import front_rate_fit

    try:
        fit = front_rate_fit(series, tuple(window))
    except ValidationError as e:
        return {"threshold": threshold, "series": "front.csv", "error": str(e)}

    doc = {
        "threshold": threshold,
        "series": "front.csv",
        "rate": fit["rate"],
        "rms_exponential": fit["rms_exponential"],
        "rms_algebraic": fit["rms_algebraic"],
        "window": list(fit["window"]),
    }
    params = model_params_from_doc(config)
    reac = reaction_from_doc(config.get("reaction", {}))
    if params is not None and reac.kind == "kpp":
        rates = kpp_spreading_rates(params, f_prime0=reac.rate)
        if params.m > 1.0:
            lo, hi = 0.8 * rates["lower"], 1.2 * rates["upper"]
        else:
            lo, hi = 0.8 * rates["exact"], 1.2 * rates["exact"]
        doc["rate_verdict"] = band_verdict("front-rate", fit["rate"], lo, hi)
        doc["predicted"] = rates
    return doc
