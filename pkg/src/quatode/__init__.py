"""Closed-form solver for quaternionic ODEs with two-sided constant
coefficients, built on real-matrix translation and the real Jordan form."""

from .config import DEFAULT, Tolerances
from .errors import (DomainError, NumericError, ParseError, QuatodeError,
                     StructureError)
from .jordan import (JordanData, Spectrum, exp_jordan, jordan_complex,
                     jordan_data, realify, spectrum, split_dan)
from .ode import (ClosedFormSolution, ComplexExpTerm, OdeProblem,
                  QuatExpTerm, SolutionTerm, build_companion, fit_constants,
                  solve, specialize)
from .operators import (IDENTITY, L_i, L_j, L_k, LinearityClass,
                        OperatorMatrix, R_i, R_j, R_k, RealLinearOperator,
                        apply, basis_operator, classify, compose)
from .oracle import IntegratorConfig, integrate, trajectory
from .parser import (format_operator, format_quaternion, parse_ode,
                     parse_operator, parse_quaternion)
from .quaternion import (BASIS, Quaternion, from_column, stack_columns,
                         to_column, unstack_columns)
from .translate import (op_to_real, opmatrix_to_real, real_to_op,
                        real_to_opmatrix)

__version__ = "0.1.0"

__all__ = [
    "BASIS", "ClosedFormSolution", "ComplexExpTerm", "DEFAULT",
    "DomainError", "IDENTITY", "IntegratorConfig", "JordanData",
    "L_i", "L_j", "L_k", "LinearityClass", "NumericError", "OdeProblem",
    "OperatorMatrix", "ParseError", "QuatExpTerm", "QuatodeError",
    "Quaternion", "R_i", "R_j", "R_k", "RealLinearOperator",
    "SolutionTerm", "Spectrum", "StructureError", "Tolerances", "apply",
    "basis_operator", "build_companion", "classify", "compose",
    "exp_jordan", "fit_constants", "format_operator", "format_quaternion",
    "from_column", "integrate", "jordan_complex", "jordan_data",
    "op_to_real", "opmatrix_to_real", "parse_ode", "parse_operator",
    "parse_quaternion", "real_to_op", "real_to_opmatrix", "realify",
    "solve", "specialize", "spectrum", "split_dan", "stack_columns",
    "to_column", "trajectory", "unstack_columns",
]
