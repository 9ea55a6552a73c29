"""
Exception types raised by the verification engine.

Hypothesis failures are not exceptions: checks report them as skipped results.
These types cover malformed input and numerical breakdown only.
"""

from typing import Optional


class VerifierError(Exception):
    """Base class for all engine errors."""


class DimensionMismatchError(VerifierError, ValueError):
    """Operands have incompatible shapes."""


class DomainViolationError(VerifierError, ValueError):
    """A spectrum left the declared domain of a scalar function."""


class ConvergenceError(VerifierError, ArithmeticError):
    """An iterative routine hit its sweep cap."""


class SingularOperandError(VerifierError, ValueError):
    """An operand needed to be invertible but is not."""


class MapSpecError(VerifierError, ValueError):
    """A positive map specification is infeasible or malformed."""


class ConstraintViolationError(VerifierError, ValueError):
    """Parameters violate the constraints of the statement being evaluated."""


class ConfigError(VerifierError, ValueError):
    """Run configuration could not be parsed."""


class ExpressionSyntaxError(VerifierError, ValueError):
    """A scalar function expression failed to parse."""

    def __init__(self, message: str, position: Optional[int] = None, text: str = ""):
        self.position = position
        self.text = text
        if position is not None:
            message = f"{message} at position {position}"
            if text:
                message += f": {text!r}"
        super().__init__(message)
