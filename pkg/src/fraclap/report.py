"""Figure rendering for completed run directories.

Reads only the delimited artifacts (diagnostics.csv, final.csv, front.csv),
never the raw snapshots, so a report can be rebuilt from a trimmed archive.
Figures land next to the CSVs and are appended to the run manifest.
"""

from __future__ import annotations

from pathlib import Path

import matplotlib

matplotlib.use("Agg")

import matplotlib.pyplot as plt
import numpy as np

from .grid import ValidationError
from .io import json_dump, json_load

_DPI = 140


def _read_csv(path: Path) -> dict:
    data = np.genfromtxt(path, delimiter=",", names=True)
    if data.dtype.names is None:
        raise ValidationError(f"{path.name} has no header row")
    # 0-d result for single-row files; promote so columns stay arrays
    data = np.atleast_1d(data)
    return {name: np.asarray(data[name], dtype=float) for name in data.dtype.names}


def _norms_figure(diag: dict, path: Path):
    fig, (ax_n, ax_m) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    t = diag["t"]
    positive = t > 0
    for key in ("l1", "l2", "linf"):
        if key in diag and np.any(diag[key][positive] > 0):
            ax_n.loglog(t[positive], diag[key][positive], label=key)
    ax_n.set_xlabel("t")
    ax_n.set_ylabel("norm")
    ax_n.legend(frameon=False)
    ax_n.set_title("norm decay")
    ax_m.plot(t, diag["mass"])
    ax_m.set_xlabel("t")
    ax_m.set_ylabel("mass")
    ax_m.set_title("mass")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _profile_figure(final: dict, path: Path):
    fig, (ax_p, ax_t) = plt.subplots(1, 2, figsize=(9.0, 3.6))
    x, v = final["x"], final["value"]
    ax_p.plot(x, v)
    ax_p.set_xlabel("x")
    ax_p.set_ylabel("u")
    ax_p.set_title("final profile")
    right = (x > 0) & (np.abs(v) > 0)
    if np.count_nonzero(right) >= 8:
        ax_t.loglog(x[right], np.abs(v[right]))
        ax_t.set_title("tail (log-log)")
    else:
        ax_t.set_title("tail (no positive support)")
    ax_t.set_xlabel("|x|")
    ax_t.set_ylabel("|u|")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def _front_figure(front: dict, path: Path):
    fig, ax = plt.subplots(figsize=(4.8, 3.6))
    keep = front["radius"] > 0
    ax.semilogy(front["t"][keep], front["radius"][keep])
    ax.set_xlabel("t")
    ax.set_ylabel("front radius")
    ax.set_title("front propagation")
    fig.tight_layout()
    fig.savefig(path, dpi=_DPI)
    plt.close(fig)


def render_run_report(run_dir) -> list:
    """Render every figure the directory's artifacts support; return names."""
    run_dir = Path(run_dir)
    if not (run_dir / "manifest.json").exists():
        raise ValidationError(f"{run_dir} is not a run directory (no manifest)")
    figures = []

    diag_path = run_dir / "diagnostics.csv"
    if diag_path.exists():
        _norms_figure(_read_csv(diag_path), run_dir / "norms.png")
        figures.append("norms.png")

    final_path = run_dir / "final.csv"
    if final_path.exists():
        final = _read_csv(final_path)
        if "x" in final and "value" in final:
            _profile_figure(final, run_dir / "profile.png")
            figures.append("profile.png")

    front_path = run_dir / "front.csv"
    if front_path.exists():
        _front_figure(_read_csv(front_path), run_dir / "front.png")
        figures.append("front.png")

    manifest = json_load(run_dir / "manifest.json")
    outputs = [name for name in manifest.get("outputs", []) if name != "manifest.json"]
    manifest["outputs"] = sorted(set(outputs) | set(figures)) + ["manifest.json"]
    json_dump(manifest, run_dir / "manifest.json")
    return figures
