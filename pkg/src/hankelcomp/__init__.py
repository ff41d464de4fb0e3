"""Hankel low-rank completion for time-series forecasting.

Forecasting is posed as completing the trailing ``m`` entries of a Hankel
matrix built from a series, by minimising a (weighted) nuclear norm.
"""

__version__ = "0.1.0"

from ._backend import BACKEND
from .core import (
    HankelShape,
    TimeSeries,
    WeightVector,
    adjoint_sum,
    diagonal_average,
    embed,
    multiplicities,
    multiplicity,
    weighted_norm,
)
from .errors import (
    DatasetMissingError,
    DegenerateModelError,
    HankelError,
    InvalidModelError,
    NumericalOverflowError,
    ParseError,
    PreconditionError,
    ShapeError,
)
from .finite_rank import (
    CharPoly,
    ExponentialModel,
    char_poly,
    estimate_rank,
    evaluate,
    from_real_form,
    lrf_coefficients,
    lrf_extend,
    minimal_rank_completion,
)
from .solver import (
    Ball,
    Exact,
    Penalized,
    ProblemSpec,
    SolverConfig,
    SolverResult,
    Status,
    calibrate_tau,
    nuclear_norm,
    solve,
    solve_series,
    unstructured_tau,
)
from .theory import (
    CertificateReport,
    c_rho,
    certificate_check,
    max_missing,
    optimal_window,
    rank_one_certificate,
    success_probe,
)
from .weights import (
    Custom,
    Exponential,
    Trapezoid,
    Uniform,
    build_weights,
    scale_series,
    solve_scaled_structure,
    solve_via_scaling,
    unscale_series,
)
