"""Exception and warning types raised by :mod:`mittagmat`."""

from __future__ import annotations


class MittagMatError(Exception):
    """Base class for all errors raised by the package."""


class InvalidParams(MittagMatError, ValueError):
    """Parameters outside the admissible range (e.g. ``alpha <= 0``)."""


class InvalidSpec(MittagMatError, ValueError):
    """An ill-formed problem description (e.g. ``a = 0`` in Bagley-Torvik)."""


class SingularReference(MittagMatError, ValueError):
    """The closed-form reference matrices are undefined at ``p = 0``."""


class DomainLimitError(MittagMatError, ValueError):
    """Argument outside the range on which accuracy is certified."""


class NumericalFailure(MittagMatError, ArithmeticError):
    """Base class for failures of a numerical procedure."""


class NonConvergence(NumericalFailure):
    """An iterative method did not converge within its iteration budget."""


class SingularMatrix(NumericalFailure):
    """A pivot fell below the numerical singularity threshold."""


class DefectiveStructureUndetermined(NumericalFailure):
    """Rank decisions did not produce a consistent Jordan structure."""


class NumericalOverflow(NumericalFailure, OverflowError):
    """A result is not representable in double precision."""


class RequestedAccuracyUnreachable(NumericalFailure):
    """The requested accuracy could not be certified.

    The best-effort value and the achieved error estimate are attached so
    callers may decide to use them anyway.
    """

    def __init__(self, message: str, value: complex, error_estimate: float):
        super().__init__(message)
        self.value = value
        self.error_estimate = error_estimate


class IllConditionedTransform(UserWarning):
    """The Jordan transform is badly conditioned; results may be inaccurate."""


class ForcingEvaluationError(MittagMatError):
    """The forcing function failed or returned a non-finite value at a node."""

    def __init__(self, message: str, node: int) -> None:
        super().__init__(message)
        self.node = node
