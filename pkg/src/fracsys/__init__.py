"""fracsys: analytic solutions of 2x2 linear fractional differential systems.

The package evaluates Mittag-Leffler and fractional trigonometric
functions by certified series summation, solves D^alpha X = A X in
closed form through the eigenstructure of A, reduces the fractional
damped oscillator to that system, and verifies closed forms against an
independent discretized fractional-derivative oracle.
"""

from .errors import DomainError, GridResolutionWarning, NonConvergenceError
from .operators import (
    PowerTerm,
    SampledFunction,
    differentiate_power_term,
    jumarie_oracle,
    jumarie_oracle_checked,
    ml_eigen_check,
    power_rule_coefficient,
    trig_derivative_check,
)
from .oscillator import (
    OscillatorResidual,
    OscillatorSpec,
    oscillator_residual,
    reduce_to_system,
    solve_oscillator,
)
from .solver import (
    MODE_COMPLEX_EXACT,
    MODE_FACTORED,
    AnalyticSolution,
    ComplexPair,
    DistinctReal,
    RepeatedRoot,
    ResidualReport,
    SolutionTerm,
    SystemSpec,
    Trajectory,
    classify,
    eval_solution,
    sample_trajectory,
    solve_system,
    verify_residual,
)
from .special import (
    DEFAULT_CONTROL,
    SeriesControl,
    cos_frac,
    cos_sin_at_power,
    gamma,
    log_gamma,
    ml_one,
    ml_two,
    sin_frac,
)

__version__ = "0.1.0"

__all__ = [
    "__version__",
    "DomainError",
    "NonConvergenceError",
    "GridResolutionWarning",
    "SeriesControl",
    "DEFAULT_CONTROL",
    "gamma",
    "log_gamma",
    "ml_one",
    "ml_two",
    "cos_frac",
    "sin_frac",
    "cos_sin_at_power",
    "SampledFunction",
    "PowerTerm",
    "power_rule_coefficient",
    "differentiate_power_term",
    "jumarie_oracle",
    "jumarie_oracle_checked",
    "ml_eigen_check",
    "trig_derivative_check",
    "SystemSpec",
    "DistinctReal",
    "RepeatedRoot",
    "ComplexPair",
    "SolutionTerm",
    "AnalyticSolution",
    "Trajectory",
    "ResidualReport",
    "MODE_COMPLEX_EXACT",
    "MODE_FACTORED",
    "classify",
    "solve_system",
    "eval_solution",
    "sample_trajectory",
    "verify_residual",
    "OscillatorSpec",
    "OscillatorResidual",
    "reduce_to_system",
    "solve_oscillator",
    "oscillator_residual",
]
