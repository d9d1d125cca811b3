"""Exception types shared across the package.

The CLI maps these onto exit codes: configuration problems exit 2,
violated preconditions exit 3, numerical failures exit 4.
"""

from __future__ import annotations


class HyperinvError(Exception):
    """Base class for all package-specific errors."""


class ConfigurationError(HyperinvError):
    """Invalid run configuration (unknown keys, unparsable values)."""


class PreconditionError(HyperinvError):
    """A documented precondition of an operation was violated."""


class NumericalError(HyperinvError):
    """A numerical procedure failed to reach its advertised accuracy."""


# -- precondition violations -------------------------------------------------

class DegenerateParameter(PreconditionError):
    """The lower Pochhammer parameter hit zero inside a terminating sum."""


class LengthMismatch(PreconditionError):
    """A sequence is shorter than the triangular matrix requires."""


class DomainError(PreconditionError):
    """Argument outside the documented domain of a function."""


class PoleInput(PreconditionError):
    """Evaluation requested exactly at a pole of the mapping."""


class OutsideDisk(PreconditionError):
    """Argument outside the convergence disk (with safety factor)."""


class ZeroX(PreconditionError):
    """The closed form requires x != 0; callers fall back to series reversion."""


class BadBParameter(PreconditionError):
    """Confluent hypergeometric lower parameter is a non-positive integer."""


class BadNuDomain(PreconditionError):
    """Parameter outside the validity strip of the chosen representation."""


# -- numerical failures ------------------------------------------------------

class PoleConfiguration(NumericalError):
    """Gamma-function route hit an unresolvable pole configuration."""


class NoConvergence(NumericalError):
    """Iteration failed to converge within its budget."""


class QuadratureFailure(NumericalError):
    """Quadrature could not certify the requested accuracy."""

    def __init__(self, message: str, estimate: float | None = None):
        super().__init__(message)
        self.estimate = estimate


class BranchTrackingFailure(NumericalError):
    """Argument continuity along the contour could not be maintained."""
