"""Modulus-of-continuity and gradient estimates for ``u_t = alpha(u') u''`` on the circle."""
from .coefficients import Coefficient, limits, moment, parse_coefficient
from .errors import ModContError
from .estimates import (criterion_upper, gradient_bound_lower, gradient_bound_upper,
                        lipschitz_classifier, oscillation_bound)
from .modulus import ModulusFunction, PeriodicField, check_modulus, measured_modulus
from .solver import Dirichlet, Periodic, SolverConfig, solve
from .supersolution import minimal_supersolution
from .translators import build_translator, eval_translator

__version__ = "0.1.0"

__all__ = [
    "Coefficient", "Dirichlet", "ModContError", "ModulusFunction", "Periodic", "PeriodicField",
    "SolverConfig", "build_translator", "check_modulus", "criterion_upper", "eval_translator",
    "gradient_bound_lower", "gradient_bound_upper", "limits", "lipschitz_classifier",
    "measured_modulus", "minimal_supersolution", "moment", "oscillation_bound",
    "parse_coefficient", "solve",
]
