"""Fractional Laplacian realizations and fractional porous medium dynamics.

The package exposes four interchangeable discretizations of (-Delta)^s on
a periodic box plus a Dirichlet spectral variant, an explicit/IMEX time
stepper for d_t u + (-Delta)^s phi(u) = f(u), exponent bookkeeping for
the self-similar theory, rearrangement tools, and fit-based diagnostics.
"""

__version__ = "0.1.0"

from .diagnostics import (
    FitResult,
    decay_rate_fit,
    front_radius,
    norms,
    self_similar_defect,
    spectral_energy,
    tail_exponent_fit,
    weighted_mass,
)
from .exponents import (
    ExponentTable,
    ModelParams,
    derive_exponents,
    huang_profile_eval,
    kpp_spreading_rates,
    linear_kernel_eval,
)
from .grid import Field, FracOrder, GridSpec, ValidationError, field_from_callable
from .operators import (
    OperatorSpec,
    frac_laplacian_extension,
    frac_laplacian_quadrature,
    frac_laplacian_semigroup,
    frac_laplacian_spectral,
    riesz_inverse,
)
from .rearrange import concentration_compare, schwarz_rearrange
from .solver import Nonlinearity, Reaction, RunResult, SolverConfig, solve, solve_dirichlet

__all__ = [
    "__version__",
    "ExponentTable",
    "Field",
    "FitResult",
    "FracOrder",
    "GridSpec",
    "ModelParams",
    "Nonlinearity",
    "OperatorSpec",
    "Reaction",
    "RunResult",
    "SolverConfig",
    "ValidationError",
    "concentration_compare",
    "decay_rate_fit",
    "derive_exponents",
    "field_from_callable",
    "frac_laplacian_extension",
    "frac_laplacian_quadrature",
    "frac_laplacian_semigroup",
    "frac_laplacian_spectral",
    "front_radius",
    "huang_profile_eval",
    "kpp_spreading_rates",
    "linear_kernel_eval",
    "norms",
    "riesz_inverse",
    "schwarz_rearrange",
    "self_similar_defect",
    "solve",
    "solve_dirichlet",
    "spectral_energy",
    "tail_exponent_fit",
    "weighted_mass",
]
