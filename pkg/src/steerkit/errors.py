"""Exception hierarchy shared by every steerkit module."""

from __future__ import annotations


class SteerkitError(Exception):
    """Base class for all library errors."""


class DimensionMismatch(SteerkitError, ValueError):
    pass


class UnequalDimensions(DimensionMismatch):
    pass


class BadSubsystem(SteerkitError, IndexError):
    pass


class InvalidDensity(SteerkitError, ValueError):
    """A matrix failed density-operator validation.

    ``violations`` lists every failed invariant as ``(name, defect)`` pairs,
    so a caller sees all problems at once even though the raised class
    reflects only the first one.
    """

    def __init__(self, message: str, defect: float = float("nan"),
                 violations: list[tuple[str, float]] | None = None):
        super().__init__(message)
        self.defect = defect
        self.violations = violations if violations is not None else []


class NonHermitian(InvalidDensity):
    pass


class NonUnitTrace(InvalidDensity):
    pass


class NotPositive(InvalidDensity):
    pass


class InvalidBasis(SteerkitError, ValueError):
    pass


class InvalidDistribution(SteerkitError, ValueError):
    pass


class MissingResponse(SteerkitError, KeyError):
    pass


class NotPositiveDefinite(SteerkitError, ValueError):
    pass


class NonpositiveVariance(SteerkitError, ValueError):
    pass


class InvalidGaussianState(SteerkitError, ValueError):
    pass


class NumericalFailure(SteerkitError, ArithmeticError):
    """Raised when an eigensolve or quadrature cannot meet its tolerance."""


class QuadratureFailure(NumericalFailure):
    pass


# document-level errors (cli)

class DocumentError(SteerkitError, ValueError):
    def __init__(self, message: str, path: str = "$"):
        super().__init__(f"{path}: {message}")
        self.path = path


class ParseError(DocumentError):
    pass


class UnknownSchema(DocumentError):
    pass


class UnresolvedReference(DocumentError):
    def __init__(self, name: str, path: str = "$"):
        super().__init__(f"unresolved reference {name!r}", path)
        self.name = name


class InvalidState(DocumentError):
    pass
