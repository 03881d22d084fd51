"""Metabelian value records."""

from .common import AbelianGroup, RecordModel
from .fields import (
    AmbiguousResult,
    ClassifierResult,
    FieldRecord,
    LFieldPrediction,
    QuadraticPrediction,
)
from .groups import (
    FAMILIES,
    CheckResult,
    FamilyDescriptor,
    InvariantReport,
    KappaType,
    TransferKernel,
    VerificationOutcome,
)
from .tables import DiffEntry, DiffReport, TableRow

__all__ = [
    "RecordModel",
    "AbelianGroup",
    "FieldRecord",
    "ClassifierResult",
    "AmbiguousResult",
    "LFieldPrediction",
    "QuadraticPrediction",
    "FAMILIES",
    "FamilyDescriptor",
    "TransferKernel",
    "KappaType",
    "CheckResult",
    "VerificationOutcome",
    "InvariantReport",
    "TableRow",
    "DiffEntry",
    "DiffReport",
]
