from .bands import (
    BandSet,
    WidomRecord,
    band_set,
    gap_contributions,
    gap_measures,
    gap_zeros,
    green_period,
    norm_identity,
    preimage,
    saturation_diagnostics,
    widom_factor,
)
from .catalog import closed_form_instances, period_set, run_examples, run_suite
from .exceptions import (
    ConvergenceError,
    ExchangeError,
    InvalidInputError,
    InvariantViolation,
    NumericalError,
    QuadratureError,
    RespolyException,
    RootIsolationError,
    SingularReferenceError,
)
from .oracle import GridProblem, compare, grid_minimax
from .orbit import (
    OrbitData,
    character_vector,
    magnitude_asymptotic_check,
    near_returns,
    widom_sweep,
)
from .poly import Polynomial, cheb_classical, critical_points as poly_critical_points, real_roots
from .potential import (
    INFINITY,
    GreenData,
    PoleData,
    critical_points,
    equilibrium,
    green,
    green_pole,
    harmonic_measure,
    pole_data,
    pw_constant,
)
from .realset import RealSet, affine, gap_of, invert, load_problem, locate, validate_set
from .solver import (
    ReferenceSet,
    ResidualSolution,
    alternation_certificate,
    chebyshev,
    degree_report,
    dual_residual,
    exchange,
    reference_solve,
    renormalize,
    residual_sequence,
    solve_residual,
)
from .version import __version__

__all__ = [
    "RealSet",
    "validate_set",
    "locate",
    "load_problem",
    "affine",
    "invert",
    "gap_of",
    "Polynomial",
    "cheb_classical",
    "real_roots",
    "poly_critical_points",
    "ReferenceSet",
    "ResidualSolution",
    "reference_solve",
    "exchange",
    "solve_residual",
    "dual_residual",
    "chebyshev",
    "degree_report",
    "renormalize",
    "alternation_certificate",
    "residual_sequence",
    "GreenData",
    "PoleData",
    "INFINITY",
    "equilibrium",
    "green",
    "green_pole",
    "harmonic_measure",
    "critical_points",
    "pole_data",
    "pw_constant",
    "BandSet",
    "WidomRecord",
    "preimage",
    "band_set",
    "green_period",
    "norm_identity",
    "widom_factor",
    "gap_zeros",
    "gap_measures",
    "gap_contributions",
    "saturation_diagnostics",
    "OrbitData",
    "character_vector",
    "near_returns",
    "widom_sweep",
    "magnitude_asymptotic_check",
    "GridProblem",
    "grid_minimax",
    "compare",
    "period_set",
    "closed_form_instances",
    "run_examples",
    "run_suite",
    "RespolyException",
    "InvalidInputError",
    "NumericalError",
    "SingularReferenceError",
    "ExchangeError",
    "ConvergenceError",
    "RootIsolationError",
    "QuadratureError",
    "InvariantViolation",
    "__version__",
]
