"""Exception and warning types shared across the package."""


class FracCalcError(Exception):
    """Base class for every error raised by fraccalc."""


class DomainError(FracCalcError, ValueError):
    """An argument lies outside the documented domain of an operation."""


class PoleError(DomainError):
    """Evaluation requested at a pole (e.g. Gamma at a non-positive integer)."""


class GammaOverflowError(FracCalcError, OverflowError):
    """Gamma(x) exceeds the double-precision range (x > 171.6)."""


class ConvergenceError(FracCalcError, ArithmeticError):
    """A series or iteration did not reach its tolerance within its budget."""


class SeriesDivergenceError(ConvergenceError):
    """Series terms kept growing; the expansion point is outside the radius."""


class ResolutionWarning(UserWarning):
    """Two successive quadrature refinements disagree beyond tolerance."""


class SingularEndpointWarning(UserWarning):
    """The result diverges like (x - a)**(-alpha) as x approaches a."""


class ResultOverflowError(FracCalcError, OverflowError):
    """The exact result is finite in principle but exceeds double range."""
