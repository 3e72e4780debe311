"""Exception and warning types shared across the package."""


class SemiconvexityError(Exception):
    pass


class DescriptorError(SemiconvexityError, ValueError):
    """An integrand or profile descriptor string could not be parsed."""


class DomainError(SemiconvexityError, ValueError):
    """Evaluation outside an integrand's domain (e.g. ``det A <= 0`` for hat)."""


class ParameterError(SemiconvexityError, ValueError):
    """A parameter lies outside the regime where a kind is defined."""


class PreconditionViolation(SemiconvexityError, ValueError):
    pass


class NormalizationMismatch(SemiconvexityError, ValueError):
    pass


class QuadratureError(SemiconvexityError, RuntimeError):
    """Adaptive quadrature did not reach the requested tolerance."""


class FDFailure(SemiconvexityError, RuntimeError):
    """A finite-difference probe landed on a point where the integrand is not smooth."""


class SingularHessianWarning(RuntimeWarning):
    pass
