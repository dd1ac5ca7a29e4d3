"""Serialization round-trips, byte determinism, and verdict helpers."""

import numpy as np
import pytest
from hypothesis import given, strategies as st

from fraclap.grid import Field, GridSpec, ValidationError, field_from_callable
from fraclap.io import (
    band_verdict,
    curve_to_csv,
    field_from_raw,
    field_to_csv,
    field_to_raw,
    json_dump,
    json_load,
    series_to_csv,
    table_from_csv,
    tolerance_verdict,
    verdict_block,
)


@pytest.fixture
def field_1d():
    grid = GridSpec(dimension=1, n=64, half_length=4.0)
    return field_from_callable(grid, lambda x: np.exp(-(x**2)) * np.cos(3 * x))


def test_csv_round_trip_recovers_table(tmp_path, field_1d):
    path = field_to_csv(field_1d, tmp_path / "f.csv")
    xs, vs = table_from_csv(path)
    np.testing.assert_array_equal(xs, field_1d.grid.axis_coords())
    np.testing.assert_array_equal(vs, field_1d.values)


def test_raw_round_trip_is_exact(tmp_path, field_1d):
    field_1d.meta = {"operator": "spectral", "s": 0.5}
    path = field_to_raw(field_1d, tmp_path / "f.f64")
    back = field_from_raw(path)
    assert back.grid == field_1d.grid
    np.testing.assert_array_equal(back.values, field_1d.values)
    assert back.meta == {"operator": "spectral", "s": 0.5}


def test_raw_round_trip_2d(tmp_path):
    grid = GridSpec(dimension=2, n=16, half_length=2.0)
    rng = np.random.default_rng(7)
    f = Field(grid, rng.standard_normal(grid.shape))
    back = field_from_raw(field_to_raw(f, tmp_path / "g.f64"))
    assert back.values.shape == grid.shape
    np.testing.assert_array_equal(back.values, f.values)


def test_raw_size_mismatch_rejected(tmp_path, field_1d):
    path = field_to_raw(field_1d, tmp_path / "f.f64")
    data = path.read_bytes()
    path.write_bytes(data[:-16])
    with pytest.raises(ValidationError):
        field_from_raw(path)


def test_field_csv_bytes_deterministic(tmp_path, field_1d):
    a = field_to_csv(field_1d, tmp_path / "a.csv").read_bytes()
    b = field_to_csv(field_1d, tmp_path / "b.csv").read_bytes()
    assert a == b


def test_series_csv_layout(tmp_path):
    times = np.array([0.0, 0.5, 1.0])
    series = {"mass": [1.0, 1.0, 1.0], "linf": [2.0, 1.5, 1.25]}
    path = series_to_csv(times, series, tmp_path / "d.csv")
    lines = path.read_text().strip().splitlines()
    assert lines[0] == "t,mass,linf"
    assert len(lines) == 4
    assert lines[1].split(",") == ["0.0", "1.0", "2.0"]


def test_curve_columns_must_align(tmp_path):
    with pytest.raises(ValidationError):
        curve_to_csv({"a": [1.0, 2.0], "b": [1.0]}, tmp_path / "c.csv")


def test_table_needs_two_rows(tmp_path):
    p = tmp_path / "short.csv"
    p.write_text("x,value\n1.0,2.0\n")
    with pytest.raises(ValidationError):
        table_from_csv(p)


def test_json_dump_handles_numpy(tmp_path):
    doc = {"a": np.float64(1.5), "b": np.int64(3), "c": np.arange(3.0)}
    path = json_dump(doc, tmp_path / "d.json")
    back = json_load(path)
    assert back == {"a": 1.5, "b": 3, "c": [0.0, 1.0, 2.0]}
    assert path.read_text().endswith("\n")


def test_json_dump_bytes_deterministic(tmp_path):
    doc = {"z": 1, "a": [1, 2, 3], "m": {"y": 2.5, "x": 1.5}}
    a = json_dump(doc, tmp_path / "a.json").read_bytes()
    b = json_dump(dict(reversed(list(doc.items()))), tmp_path / "b.json").read_bytes()
    assert a == b


@given(st.floats(allow_nan=False, allow_infinity=False, width=64))
def test_float_text_round_trip(x):
    # repr of a float is its shortest exact decimal form
    assert float(repr(float(x))) == float(x)


def test_tolerance_verdict_boundary():
    assert tolerance_verdict("c", 1.25, 1.0, 0.25)["pass"]
    assert not tolerance_verdict("c", 1.2500001, 1.0, 0.25)["pass"]


def test_band_verdict_inclusive():
    assert band_verdict("c", 0.8, 0.8, 1.2)["pass"]
    assert band_verdict("c", 1.2, 0.8, 1.2)["pass"]
    assert not band_verdict("c", 1.21, 0.8, 1.2)["pass"]


def test_verdict_block_band_form():
    v = verdict_block("c", 0.5, (0.4, 0.6), None, True)
    assert v["target"] == [0.4, 0.6]
    assert v["tolerance"] is None
    assert set(v) == {"claim", "fitted", "target", "tolerance", "pass"}


def test_verdict_block_allows_missing_fit():
    v = verdict_block("c", None, None, None, True)
    assert v["fitted"] is None and v["pass"] is True
