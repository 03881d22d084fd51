"""Number-field measurements and classifier outputs."""

from __future__ import annotations

from typing import List, Literal, Optional, Tuple

from pydantic import Field, model_validator

from .common import AbelianGroup, RecordModel

FieldKind = Literal["complex", "real", "generic"]
UnitType = Literal["alpha", "delta", "unknown"]
Branch = Literal["abelian", "coclass-1", "coclass-ge-2"]
KernelShape = Literal["cyclic", "total"]


class FieldRecord(RecordModel):
    """One measured base field K with p-class group of type (p,p).

    For p = 2 the exponents refer to the extensions N_i themselves:
    ``w`` is the exponent of h_2(N_1) and ``u``, ``v`` those of h_2(N_2), h_2(N_3).
    """

    p: int
    kind: FieldKind
    discriminant: Optional[int] = None
    u: int
    v: Optional[int] = None
    w: Optional[int] = None
    t1: UnitType = "unknown"
    t2: UnitType = "unknown"
    clF1: Optional[AbelianGroup] = None
    kappa: Optional[str] = None
    name: Optional[str] = None
    assume_coclass1: bool = False

    @model_validator(mode="after")
    def _check_exponents(self) -> "FieldRecord":
        if self.u < 1:
            raise ValueError("u must be at least 1")
        if self.v is not None and self.p != 2 and not (self.u >= self.v >= 1):
            raise ValueError("exponents must satisfy u >= v >= 1")
        if self.w is not None and self.w < 0:
            raise ValueError("w must be non-negative")
        return self

    @property
    def types(self) -> Tuple[UnitType, UnitType]:
        return (self.t1, self.t2)


class ClassifierResult(RecordModel):
    """Invariants of the second p-class group recovered from class numbers."""

    p: int
    branch: Branch
    m: int
    n: int
    e: Optional[int] = None
    k: int = 0
    nu_constraint: Tuple[int, ...] = ()
    predicted_clF1_order: int = 1
    families: Tuple[str, ...] = ()
    flags: List[str] = Field(default_factory=list)

    @model_validator(mode="after")
    def _check_branch(self) -> "ClassifierResult":
        if self.branch != "coclass-ge-2" and self.n != self.m:
            raise ValueError("coclass-1 and abelian results must have n = m")
        if self.branch == "coclass-ge-2" and (self.e is None or self.e != self.n - self.m + 2):
            raise ValueError("coclass >= 2 results must have e = n - m + 2")
        return self

    @property
    def coclass(self) -> int:
        return self.n - self.m + 1

    def invariants(self) -> Tuple[int, int, Optional[int], int]:
        return (self.m, self.n, self.e, self.k)


class AmbiguousResult(RecordModel):
    """Several invariant tuples fit when w is missing."""

    candidates: Tuple[ClassifierResult, ...]
    flags: List[str] = Field(default_factory=list)


class LFieldPrediction(RecordModel):
    """Predicted data of one non-Galois subfield L_i of degree p."""

    index: int
    exponent: int
    unit_type: UnitType
    kernel: KernelShape


class QuadraticPrediction(RecordModel):
    p: int
    kind: FieldKind
    fields: Tuple[LFieldPrediction, ...]
    clF1_exponent: int

    @property
    def exponents(self) -> Tuple[int, ...]:
        return tuple(f.exponent for f in self.fields)

    @property
    def unit_types(self) -> Tuple[UnitType, ...]:
        return tuple(f.unit_type for f in self.fields)

    @property
    def nu(self) -> int:
        return sum(1 for f in self.fields if f.kernel == "total")
