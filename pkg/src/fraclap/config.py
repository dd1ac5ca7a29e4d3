"""Run configuration: one JSON document describing grid, model, and schedule.

The document is the unit of exchange; everything a run does must be
reconstructible from it.  Parsing is strict about enumerated names and
silent about extra keys, and parse(emit(doc)) is the identity on the
kept keys.
"""

from __future__ import annotations

import time
from dataclasses import dataclass, field as dc_field

import numpy as np

from .exponents import ModelParams, extinction_profile_eval, huang_profile_eval
from .grid import Field, FracOrder, GridSpec, ValidationError
from .io import table_from_csv
from .operators import OperatorSpec
from .solver import Nonlinearity, Reaction, SolverConfig

RECIPES = ("gaussian", "indicator", "explicit-profile", "custom-table")


@dataclass
class RunManifest:
    """What a finished run directory contains and where it came from."""

    experiment: str
    config: dict
    code_version: str
    created: str
    outputs: list = dc_field(default_factory=list)

    def to_doc(self) -> dict:
        return {
            "experiment": self.experiment,
            "config": self.config,
            "code_version": self.code_version,
            "created": self.created,
            "outputs": list(self.outputs),
        }

    @classmethod
    def from_doc(cls, doc: dict) -> "RunManifest":
        return cls(
            experiment=doc["experiment"],
            config=doc["config"],
            code_version=doc["code_version"],
            created=doc["created"],
            outputs=list(doc.get("outputs", [])),
        )

    @classmethod
    def fresh(cls, config: dict, version: str) -> "RunManifest":
        return cls(
            experiment=config.get("experiment", "run"),
            config=config,
            code_version=version,
            created=time.strftime("%Y-%m-%dT%H:%M:%SZ", time.gmtime()),
        )


def grid_from_doc(doc: dict) -> GridSpec:
    try:
        return GridSpec(
            dimension=int(doc.get("dimension", 1)),
            n=int(doc["n"]),
            half_length=float(doc["half_length"]),
        )
    except KeyError as e:
        raise ValidationError(f"grid block missing {e}")


def order_from_doc(doc: dict) -> FracOrder:
    try:
        return FracOrder(float(doc["s"]))
    except KeyError:
        raise ValidationError("order block needs s")


def operator_from_doc(doc: dict) -> OperatorSpec:
    kw = {k: doc[k] for k in ("t_min", "t_max", "nodes", "cap_factor", "modes") if k in doc}
    return OperatorSpec(kind=doc.get("kind", "spectral"), **kw)


def nonlinearity_from_doc(doc: dict) -> Nonlinearity:
    kind = doc.get("kind", "power")
    if kind == "custom":
        raise ValidationError("custom nonlinearities are code-only, not configurable")
    return Nonlinearity(kind=kind, exponent=float(doc.get("exponent", 1.0)))


def reaction_from_doc(doc: dict) -> Reaction:
    kind = doc.get("kind", "none")
    if kind == "custom":
        raise ValidationError("custom reactions are code-only, not configurable")
    return Reaction(kind=kind, rate=float(doc.get("rate", 0.0)))


def solver_config_from_doc(config: dict) -> SolverConfig:
    sol = config.get("solver", {})
    kw = {
        k: sol[k]
        for k in (
            "scheme",
            "c_cfl",
            "dt_cap",
            "dt_floor",
            "cfl_amp_floor_rel",
            "dealias",
            "blowup_ceiling",
            "extinction_threshold",
            "record_every",
            "max_steps",
        )
        if k in sol
    }
    return SolverConfig(operator=operator_from_doc(config.get("operator", {})), **kw)


def model_params_from_doc(config: dict):
    """ModelParams when the nonlinearity is a power, else None."""
    nl = config.get("nonlinearity", {})
    if nl.get("kind", "power") != "power":
        return None
    grid = grid_from_doc(config["grid"])
    order = order_from_doc(config["order"])
    return ModelParams(
        dimension=grid.dimension, s=order.s, m=float(nl.get("exponent", 1.0))
    )


def initial_field(config: dict, grid: GridSpec) -> Field:
    """Build the initial data from its declarative recipe block."""
    doc = config.get("initial")
    if not doc:
        raise ValidationError("config needs an initial block")
    recipe = doc.get("recipe")
    if recipe not in RECIPES:
        raise ValidationError(f"unknown initial recipe {recipe!r}; know {RECIPES}")
    r = grid.radius()

    if recipe == "gaussian":
        mass = float(doc.get("mass", 1.0))
        width = float(doc["width"])
        if width <= 0.0:
            raise ValidationError("gaussian recipe needs width > 0")
        if grid.dimension == 1:
            amp = mass / (width * np.sqrt(2.0 * np.pi))
        else:
            amp = mass / (2.0 * np.pi * width**2)
        return Field(grid, amp * np.exp(-(r**2) / (2.0 * width**2)))

    if recipe == "indicator":
        radius = float(doc["radius"])
        if radius <= 0.0:
            raise ValidationError("indicator recipe needs radius > 0")
        height = float(doc.get("height", 1.0))
        return Field(grid, height * (r < radius).astype(float))

    if recipe == "explicit-profile":
        params = model_params_from_doc(config)
        if params is None:
            raise ValidationError("explicit-profile recipes need a power nonlinearity")
        kind = doc.get("kind")
        if kind == "huang":
            vals = huang_profile_eval(
                params, r, float(doc.get("mass", 1.0)), float(doc["r_scale"])
            )
            return Field(grid, vals)
        if kind == "vanishing":
            t_end = float(doc["extinction_time"])
            t0 = float(doc.get("t0", 0.0))
            cap_radius = float(doc.get("cap_radius", grid.h))
            vals = extinction_profile_eval(params, np.maximum(r, cap_radius), t0, t_end)
            return Field(grid, vals)
        raise ValidationError(f"unknown explicit-profile kind {kind!r}")

    # custom-table: two columns; nonnegative coordinates mean radial data
    xs, vs = table_from_csv(doc["path"])
    if grid.dimension == 1 and xs[0] < 0.0:
        query = grid.axis_coords()
    else:
        query = r
    return Field(grid, np.interp(query, xs, vs, left=0.0, right=0.0))


def schedule_from_doc(config: dict) -> tuple:
    sched = config.get("schedule", {})
    try:
        t_end = float(sched["t_end"])
    except KeyError:
        raise ValidationError("schedule block needs t_end")
    snaps = [float(t) for t in sched.get("snapshots", [])]
    return t_end, snaps


def preset_doc(name: str) -> dict:
    """Ready-to-run configurations for the two reference experiments."""
    if name == "barenblatt":
        return {
            "experiment": "barenblatt",
            "grid": {"dimension": 1, "n": 1024, "half_length": 62.8318530717958647},
            "order": {"s": 0.5},
            "operator": {"kind": "spectral"},
            "nonlinearity": {"kind": "power", "exponent": 2.0},
            "reaction": {"kind": "none"},
            "solver": {"scheme": "explicit", "dt_cap": 0.002, "record_every": 8},
            "schedule": {
                "t_end": 10.0,
                "snapshots": [0.625, 1.25, 2.5, 5.0, 10.0],
            },
            "initial": {"recipe": "gaussian", "mass": 1.0, "width": 0.25},
            "diagnostics": {"decay_window": [1.0, 10.0], "tail_window": [8.0, 30.0]},
            "output": {"dir": "barenblatt"},
        }
    if name == "kpp":
        return {
            "experiment": "kpp",
            "grid": {"dimension": 1, "n": 512, "half_length": 100.0},
            "order": {"s": 0.5},
            "operator": {"kind": "spectral"},
            "nonlinearity": {"kind": "power", "exponent": 2.0},
            "reaction": {"kind": "kpp", "rate": 1.0},
            "solver": {"scheme": "explicit", "record_every": 4},
            "schedule": {
                "t_end": 7.0,
                "snapshots": [float(t) for t in np.linspace(2.0, 7.0, 21)],
            },
            "initial": {"recipe": "indicator", "radius": 2.0, "height": 0.5},
            "diagnostics": {"front_threshold": 0.25, "front_window": [2.0, 7.0]},
            "output": {"dir": "kpp"},
        }
    raise ValidationError(f"unknown preset {name!r}; know ('barenblatt', 'kpp')")
