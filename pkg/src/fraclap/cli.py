"""Command-line front end: configs in, artifacts and verdicts out.

Subcommands:
  operator-check  cross-validate the operator realizations on smooth fields
  solve           run one configured evolution and write its artifact set
  verify          run a named verification suite (or "all")
  exponents       print the exponent table for one (dimension, m, s) triple
  rearrange       emit the decreasing rearrangement of a configured field
  report          render figures from an existing run directory

Every subcommand honors --out (falling back to the FRACLAP_OUT environment
variable, then the working directory).  Exit codes: 0 success, 1 failed
tolerance, 2 blowup, 3 deadlock, 64 bad usage or configuration.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import os
import sys
from pathlib import Path

import numpy as np

from . import __version__
from .config import grid_from_doc, initial_field, preset_doc
from .diagnostics import norms
from .exponents import ModelParams, derive_exponents
from .grid import Field, FracOrder, GridSpec, ValidationError, field_from_callable
from .io import curve_to_csv, json_dump, verdict_block
from .operators import (
    OperatorSpec,
    frac_laplacian_extension,
    frac_laplacian_quadrature,
    frac_laplacian_semigroup,
    frac_laplacian_spectral,
)
from .rearrange import radial_profile, schwarz_rearrange
from .run import EXIT_FAILED, EXIT_OK, EXIT_USAGE, execute_run
from .verify import run_suite, suite_names

_DEFAULT_CHECK = {
    "grid": {"dimension": 1, "n": 1024, "half_length": 16.0 * np.pi},
    "orders": [0.25, 0.5, 0.75],
    "tolerances": {"quadrature": 1e-2, "semigroup": 1e-3, "extension": 2e-2},
}


def _out_root(args) -> Path:
    if args.out:
        return Path(args.out)
    env = os.environ.get("FRACLAP_OUT")
    return Path(env) if env else Path(".")


def _load_config(path: str) -> dict:
    with open(path, "r", encoding="utf-8") as fh:
        doc = json.load(fh)
    if not isinstance(doc, dict):
        raise ValidationError("config root must be a JSON object")
    if "preset" in doc:
        base = preset_doc(doc.pop("preset"))
        base.update(doc)
        doc = base
    return doc


def _print_verdicts(verdicts) -> bool:
    ok = True
    for v in verdicts:
        ok &= bool(v["pass"])
        mark = "PASS" if v["pass"] else "FAIL"
        print(f"{mark} {v['claim']}: fitted={v['fitted']} "
              f"target={v.get('target')} tolerance={v.get('tolerance')}")
    return ok


def cmd_operator_check(args) -> int:
    doc = _load_config(args.config) if args.config else dict(_DEFAULT_CHECK)
    grid = grid_from_doc(doc.get("grid", _DEFAULT_CHECK["grid"]))
    tols = dict(_DEFAULT_CHECK["tolerances"], **doc.get("tolerances", {}))
    f = field_from_callable(grid, lambda x: np.exp(-(x**2) / 2.0))
    inner = np.abs(grid.axis_coords()) <= grid.half_length / 2.0
    appliers = {
        "quadrature": frac_laplacian_quadrature,
        "semigroup": frac_laplacian_semigroup,
        "extension": frac_laplacian_extension,
    }
    verdicts = []
    for s in doc.get("orders", _DEFAULT_CHECK["orders"]):
        order = FracOrder(float(s))
        ref = frac_laplacian_spectral(f, order).values
        scale = float(np.max(np.abs(ref[inner])))
        for name, tol in tols.items():
            got = appliers[name](f, order).values
            err = float(np.max(np.abs((got - ref)[inner]))) / scale
            verdicts.append(verdict_block(
                f"operator-{name}-vs-spectral-s{s:g}", err, 0.0, tol, err <= tol))
    ok = _print_verdicts(verdicts)
    root = _out_root(args)
    root.mkdir(parents=True, exist_ok=True)
    json_dump({"verdicts": verdicts, "pass": ok}, root / "operator_check.json")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_solve(args) -> int:
    config = _load_config(args.config)
    artifacts = execute_run(config, _out_root(args))
    print(f"status={artifacts.result.status} steps={artifacts.result.steps} "
          f"dir={artifacts.run_dir}")
    return artifacts.exit_code


def cmd_verify(args) -> int:
    report = run_suite(args.suite, threads=args.threads)
    ok = _print_verdicts(report["verdicts"])
    root = _out_root(args)
    root.mkdir(parents=True, exist_ok=True)
    json_dump(report, root / f"verify_{args.suite}.json")
    print(f"suite={args.suite} pass={ok}")
    return EXIT_OK if ok else EXIT_FAILED


def cmd_exponents(args) -> int:
    doc = _load_config(args.config) if args.config else {}
    params = ModelParams(
        dimension=int(doc.get("dimension", args.dimension)),
        m=float(doc.get("m", args.m)),
        s=float(doc.get("s", args.s)),
    )
    payload = dataclasses.asdict(derive_exponents(params))
    print(json.dumps(payload, indent=2, sort_keys=True, default=float))
    width = max(len(k) for k in payload)
    for key in sorted(payload):
        print(f"{key:<{width}}  {payload[key]}")
    if args.out:
        root = _out_root(args)
        root.mkdir(parents=True, exist_ok=True)
        json_dump(payload, root / "exponents.json")
    return EXIT_OK


def cmd_rearrange(args) -> int:
    config = _load_config(args.config)
    grid = grid_from_doc(config.get("grid", {}))
    f = initial_field(config, grid)
    star = schwarz_rearrange(f)
    prof = radial_profile(star)
    root = _out_root(args)
    root.mkdir(parents=True, exist_ok=True)
    curve_to_csv({"radius": prof.radii, "value": prof.values},
                 root / "rearranged_profile.csv")
    order = np.argsort(prof.radii, kind="stable")
    cum = np.cumsum(prof.values[order]) * grid.cell_volume()
    curve_to_csv({"radius": prof.radii[order], "cumulative_mass": cum},
                 root / "rearranged_cumulative.csv")
    before, after = norms(f), norms(star)
    print(f"rearranged {grid.n ** grid.dimension} cells; "
          f"l1 {before['l1']:.6g} -> {after['l1']:.6g}, "
          f"linf {before['linf']:.6g} -> {after['linf']:.6g}")
    return EXIT_OK


def cmd_report(args) -> int:
    from .report import render_run_report

    run_dir = Path(args.config)
    figures = render_run_report(run_dir)
    for name in figures:
        print(f"wrote {run_dir / name}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="fraclap",
        description="fractional Laplacian realizations and porous-medium runs",
    )
    parser.add_argument("--version", action="version", version=__version__)
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, config_required: bool):
        p.add_argument("--config", required=config_required,
                       help="path to a JSON configuration document")
        p.add_argument("--out", default=None,
                       help="output root (default: FRACLAP_OUT or '.')")
        p.add_argument("--threads", type=int, default=1,
                       help="worker threads where the subcommand supports them")

    p = sub.add_parser("operator-check",
                       help="cross-validate operator realizations")
    common(p, config_required=False)
    p.set_defaults(fn=cmd_operator_check)

    p = sub.add_parser("solve", help="run one configured evolution")
    common(p, config_required=True)
    p.set_defaults(fn=cmd_solve)

    p = sub.add_parser("verify", help="run a verification suite")
    p.add_argument("suite", choices=suite_names())
    common(p, config_required=False)
    p.set_defaults(fn=cmd_verify)

    p = sub.add_parser("exponents", help="print the exponent table")
    common(p, config_required=False)
    p.add_argument("--dimension", type=int, default=1)
    p.add_argument("--m", type=float, default=2.0)
    p.add_argument("--s", type=float, default=0.5)
    p.set_defaults(fn=cmd_exponents)

    p = sub.add_parser("rearrange",
                       help="decreasing rearrangement of a configured field")
    common(p, config_required=True)
    p.set_defaults(fn=cmd_rearrange)

    p = sub.add_parser("report", help="render figures for a run directory")
    common(p, config_required=True)
    p.set_defaults(fn=cmd_report)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        # argparse exits 2 on bad usage; the contract says 64
        if exc.code not in (0, None):
            return EXIT_USAGE
        return 0
    try:
        return args.fn(args)
    except (ValidationError, KeyError, FileNotFoundError, json.JSONDecodeError,
            ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
