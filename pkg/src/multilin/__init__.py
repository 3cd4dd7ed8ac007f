"""Multilinear interpolating splines on the unit cube, their mixed
first-order derivatives, and sharp worst-case error certificates on
modulus-of-continuity classes."""

from .bounds import (
    ClassErrorResult,
    QuadratureSpec,
    class_error_deriv_lp,
    class_error_deriv_total,
    class_error_lp,
    class_error_total,
    integrate_box,
)
from .errors import (
    ConfigError,
    PreconditionError,
    QuadratureError,
    ResourceLimitError,
)
from .exprparse import ExpressionError, parse_function
from .extremal import (
    ExtremalFunction,
    extremal_t1,
    extremal_t2,
    extremal_t4,
    extremal_t5,
)
from .grid import Grid, make_grid
from .harness import (
    ErrorReport,
    ExperimentConfig,
    config_from_dict,
    estimate_sup_error,
    load_config,
    run_experiment,
)
from .moduli import (
    AxiomViolation,
    LpMetric,
    PowerMajorant,
    PowerSumMajorant,
    check_mc_axioms,
    empirical_lp_modulus,
    empirical_total_modulus,
)
from .spline import (
    DerivOrder,
    SplineData,
    basis_h,
    build_spline,
    divided_difference,
    pointwise_error,
)

__version__ = "0.1.0"

__all__ = [
    "AxiomViolation",
    "ClassErrorResult",
    "ConfigError",
    "DerivOrder",
    "ErrorReport",
    "ExperimentConfig",
    "ExpressionError",
    "ExtremalFunction",
    "Grid",
    "LpMetric",
    "PowerMajorant",
    "PowerSumMajorant",
    "PreconditionError",
    "QuadratureError",
    "QuadratureSpec",
    "ResourceLimitError",
    "SplineData",
    "basis_h",
    "build_spline",
    "check_mc_axioms",
    "class_error_deriv_lp",
    "class_error_deriv_total",
    "class_error_lp",
    "class_error_total",
    "config_from_dict",
    "divided_difference",
    "empirical_lp_modulus",
    "empirical_total_modulus",
    "estimate_sup_error",
    "extremal_t1",
    "extremal_t2",
    "extremal_t4",
    "extremal_t5",
    "integrate_box",
    "load_config",
    "make_grid",
    "parse_function",
    "pointwise_error",
    "run_experiment",
]
