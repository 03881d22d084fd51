"""Metabelian exceptions."""

from __future__ import annotations

from typing import Any, Optional, Tuple


class MetabelianError(Exception):
    """Base exception for all metabelian errors."""

    pass


class DetailedError(MetabelianError):
    """Error carrying key=value details rendered after the message."""

    def __init__(self, message: str, **details: Any):
        super().__init__(message)
        self.message = message
        self.details = {key: value for key, value in details.items() if value is not None}

    def __str__(self) -> str:
        parts = [self.message]
        for key, value in self.details.items():
            parts.append(f"{key}={value}")
        return " ".join(parts)


class ParameterError(DetailedError, ValueError):
    """Family or classifier parameters outside their admissible range."""

    pass


# =============================================================================
# Abelian groups and presentations
# =============================================================================


class InfiniteQuotient(DetailedError):
    """The relation lattice does not have full rank."""

    def __init__(self, message: str, *, rank: Optional[int] = None, generators: Optional[int] = None):
        super().__init__(message, rank=rank, generators=generators)
        self.rank = rank
        self.generators = generators


class InconsistentPresentation(DetailedError):
    """Build validation failed; ``witness`` names the offending data."""

    def __init__(self, message: str, *, witness: Any = None):
        super().__init__(message, witness=witness)
        self.witness = witness


class GroupMismatch(DetailedError):
    """Elements from different groups were combined."""

    pass


class BudgetExceeded(DetailedError):
    """An explicit enumeration grew beyond the configured bound."""

    def __init__(self, message: str, *, limit: int, reached: Optional[int] = None):
        super().__init__(message, limit=limit, reached=reached)
        self.limit = limit
        self.reached = reached


# =============================================================================
# Invariants
# =============================================================================


class InvariantUndefined(DetailedError):
    """s, e and k are only defined for m >= 3."""

    def __init__(self, message: str, *, name: str):
        super().__init__(message, name=name)
        self.name = name


class NoMatch(DetailedError):
    """A commutator subgroup is not a term of the lower central series."""

    pass


# =============================================================================
# Arithmetic classification
# =============================================================================


class ClassificationError(DetailedError):
    """Base class for the class-number theorem layer."""

    pass


class InvalidCombination(ClassificationError):
    """Field kind and unit type cannot occur together."""

    pass


class AbelianImpossible(ClassificationError):
    """An abelian second p-class group was requested for a quadratic field."""

    pass


class ParityViolation(ClassificationError):
    """Invariants violate the parity rules of complex quadratic fields."""

    pass


class Inconsistent(ClassificationError):
    """Measured exponents contradict every admissible case."""

    pass


class MissingW(ClassificationError):
    """The exponent w of h_p(F^1) is needed to fix k."""

    pass


class HypothesisRequired(ClassificationError):
    """p >= 5 classification needs an asserted coclass-1 hypothesis."""

    pass


class KindMismatch(ClassificationError):
    """A quadratic-only theorem was applied to a generic base field."""

    pass


# =============================================================================
# Dataset
# =============================================================================


class ParseError(DetailedError):
    """A CSV cell could not be parsed."""

    def __init__(self, reason: str, *, line: int, column: Optional[str] = None):
        super().__init__(reason, line=line, column=column)
        self.reason = reason
        self.line = line
        self.column = column

    @property
    def location(self) -> Tuple[int, Optional[str]]:
        return self.line, self.column


class SchemaError(DetailedError):
    """A CSV header or row violates the table schema."""

    pass
