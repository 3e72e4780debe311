"""Numerical checks of semiconvexity for isotropic integrands on square matrices."""
from . import checks, integrands, matrixcore, radial, report, reproduce
from .errors import (
    DescriptorError,
    DomainError,
    FDFailure,
    NormalizationMismatch,
    ParameterError,
    PreconditionViolation,
    QuadratureError,
    SemiconvexityError,
)
from .integrands import IntegrandHandle, evaluate, parse
from .report import CheckReport

__version__ = "0.1.0"

__all__ = [
    "CheckReport",
    "DescriptorError",
    "DomainError",
    "FDFailure",
    "IntegrandHandle",
    "NormalizationMismatch",
    "ParameterError",
    "PreconditionViolation",
    "QuadratureError",
    "SemiconvexityError",
    "checks",
    "evaluate",
    "integrands",
    "matrixcore",
    "parse",
    "radial",
    "report",
    "reproduce",
]
