"""Periodic box grids and sampled fields.

The computational domain is the box [-L, L)^N with uniform spacing
h = 2L/n along each axis.  Fields are real samples on that lattice;
spectral operations use the discrete wavenumbers pi*k/L.
"""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Optional

import numpy as np

S_MIN = 0.05
S_MAX = 0.95


class ValidationError(ValueError):
    """Raised when a domain object violates its declared constraints."""


@dataclass(frozen=True)
class GridSpec:
    """Uniform periodic grid on [-L, L)^N.

    Parameters
    ----------
    dimension : int
        Spatial dimension, 1 or 2.
    n : int
        Points per axis, even and at least 8.
    half_length : float
        L > 0; the box is [-L, L) per axis.
    """

    dimension: int
    n: int
    half_length: float

    def __post_init__(self):
        if self.dimension not in (1, 2):
            raise ValidationError(f"dimension must be 1 or 2, got {self.dimension}")
        if self.n < 8 or self.n % 2 != 0:
            raise ValidationError(f"n must be even and >= 8, got {self.n}")
        if not (self.half_length > 0.0) or not np.isfinite(self.half_length):
            raise ValidationError(f"half_length must be positive, got {self.half_length}")

    @property
    def h(self) -> float:
        return 2.0 * self.half_length / self.n

    @property
    def shape(self) -> tuple:
        return (self.n,) * self.dimension

    @property
    def size(self) -> int:
        return self.n**self.dimension

    def axis_coords(self) -> np.ndarray:
        """Coordinates along one axis: -L + i*h for i = 0..n-1."""
        return -self.half_length + self.h * np.arange(self.n)

    def coords(self):
        """Coordinate arrays, one per axis, broadcastable to `shape`."""
        x = self.axis_coords()
        if self.dimension == 1:
            return (x,)
        return np.meshgrid(x, x, indexing="ij")

    def radius(self) -> np.ndarray:
        """|x| on the grid."""
        if self.dimension == 1:
            return np.abs(self.axis_coords())
        xx, yy = self.coords()
        return np.hypot(xx, yy)

    def cell_volume(self) -> float:
        return self.h**self.dimension


@dataclass(frozen=True)
class FracOrder:
    """Fractional order s of (-Delta)^s, with sigma = 2s for extension work.

    The supported band is [0.05, 0.95]; outside it the quadrature and
    extension discretizations degrade faster than any stated tolerance.
    """

    s: float

    def __post_init__(self):
        if not (S_MIN <= self.s <= S_MAX):
            raise ValidationError(
                f"s={self.s} outside supported band [{S_MIN}, {S_MAX}]"
            )

    @property
    def sigma(self) -> float:
        return 2.0 * self.s


@dataclass
class Field:
    """Real samples of a function on a GridSpec lattice.

    `values` is stored with shape grid.shape (row-major over axes).
    `meta` carries operator provenance as plain key-value pairs and is
    written to the JSON sidecar on serialization.
    """

    grid: GridSpec
    values: np.ndarray
    meta: Optional[dict] = field(default=None)

    def __post_init__(self):
        v = np.asarray(self.values, dtype=float)
        if v.size != self.grid.size:
            raise ValidationError(
                f"field has {v.size} samples, grid wants {self.grid.size}"
            )
        if not np.all(np.isfinite(v)):
            raise ValidationError("field values must be finite")
        self.values = v.reshape(self.grid.shape)

    def copy(self) -> "Field":
        return Field(self.grid, self.values.copy(), dict(self.meta) if self.meta else None)

    def with_values(self, values: np.ndarray, meta: Optional[dict] = None) -> "Field":
        return Field(self.grid, values, meta)


def field_from_callable(grid: GridSpec, fn) -> Field:
    """Sample fn(x) (1-D) or fn(x, y) (2-D) on the grid."""
    return Field(grid, fn(*grid.coords()))
