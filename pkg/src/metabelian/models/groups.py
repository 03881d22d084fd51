"""Group family descriptors, transfer kernels and invariant reports."""

from __future__ import annotations

from typing import Dict, List, Literal, Optional, Tuple

from pydantic import Field, field_validator

from .common import AbelianGroup, RecordModel

Family = Literal[
    "elementary_abelian",
    "coclass1",
    "nebelung",
    "dihedral",
    "semidihedral",
    "quaternion",
]
FAMILIES: Tuple[str, ...] = (
    "elementary_abelian",
    "coclass1",
    "nebelung",
    "dihedral",
    "semidihedral",
    "quaternion",
)
ABSENT = "-"


def _format_word(word: Dict[str, int]) -> str:
    return ",".join(f"{label}:{exponent}" for label, exponent in word.items()) or "1"


def _parse_word(text: str) -> Dict[str, int]:
    if text in ("", "1"):
        return {}
    word: Dict[str, int] = {}
    for item in text.split(","):
        label, _, exponent = item.partition(":")
        if not label:
            raise ValueError(f"malformed word item {item!r}")
        word[label] = int(exponent) if exponent else 1
    return word


class FamilyDescriptor(RecordModel):
    """Parameters that pin down one group of a presentation family."""

    family: Family
    p: int
    m: int = 2
    n: Optional[int] = None
    k: int = 0
    miech_coeffs: Tuple[int, ...] = ()
    rho: int = 0
    coupling: Tuple[int, int, int, int] = (0, 0, 0, 0)
    x_power: Optional[Dict[str, int]] = None
    y_power: Optional[Dict[str, int]] = None

    @field_validator("rho")
    @classmethod
    def _check_rho(cls, value: int) -> int:
        if value not in (-1, 0, 1):
            raise ValueError("rho must be one of: -1, 0, 1")
        return value

    @property
    def order_exponent(self) -> int:
        if self.n is not None:
            return self.n
        return self.m

    @property
    def e(self) -> int:
        return self.order_exponent - self.m + 2

    def to_text(self) -> str:
        """Flat ``key=value`` form used by the command line."""
        parts = [f"family={self.family}", f"p={self.p}", f"m={self.m}"]
        if self.n is not None:
            parts.append(f"n={self.n}")
        parts.append(f"k={self.k}")
        if self.miech_coeffs:
            parts.append("miech=" + ",".join(str(a) for a in self.miech_coeffs))
        if self.family == "nebelung":
            parts.append(f"rho={self.rho}")
            if any(self.coupling):
                parts.append("coupling=" + ",".join(str(c) for c in self.coupling))
        if self.x_power is not None:
            parts.append(f"x_power={_format_word(self.x_power)}")
        if self.y_power is not None:
            parts.append(f"y_power={_format_word(self.y_power)}")
        return " ".join(parts)

    @classmethod
    def from_text(cls, text: str) -> "FamilyDescriptor":
        fields: Dict[str, object] = {}
        for token in text.split():
            key, sep, value = token.partition("=")
            if not sep:
                raise ValueError(f"expected key=value, got {token!r}")
            if key in ("p", "m", "n", "k", "rho"):
                fields[key] = int(value)
            elif key == "family":
                fields[key] = value
            elif key == "miech":
                fields["miech_coeffs"] = tuple(int(a) for a in value.split(","))
            elif key == "coupling":
                fields["coupling"] = tuple(int(c) for c in value.split(","))
            elif key in ("x_power", "y_power"):
                fields[key] = _parse_word(value)
            else:
                raise ValueError(f"unknown descriptor key {key!r}")
        return cls.model_validate(fields)

    def __str__(self) -> str:
        return self.to_text()


class TransferKernel(RecordModel):
    """Kernel of a transfer, as a subgroup of the (p,p) plane of exponent pairs (a, b)."""

    p: int
    generators: Tuple[Tuple[int, int], ...] = ()
    order: int = 1

    @property
    def is_total(self) -> bool:
        return self.order == self.p * self.p

    @property
    def is_cyclic(self) -> bool:
        return self.order == self.p


class KappaType(RecordModel):
    """Principalisation type: one digit per maximal subgroup, 0 marking a total kernel."""

    p: int
    digits: Tuple[int, ...]

    @field_validator("digits")
    @classmethod
    def _check_digits(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        if any(d < 0 for d in value):
            raise ValueError("kappa digits must be non-negative")
        return value

    @property
    def nu(self) -> int:
        return sum(1 for d in self.digits if d == 0)

    def text(self) -> str:
        return "(" + "".join(str(d) for d in self.digits) + ")"

    @classmethod
    def parse(cls, text: str, p: int) -> "KappaType":
        cleaned = text.strip().strip("()")
        if len(cleaned) != p + 1 or not cleaned.isdigit():
            raise ValueError(f"kappa must have {p + 1} digits: {text!r}")
        return cls(p=p, digits=tuple(int(c) for c in cleaned))

    def __str__(self) -> str:
        return self.text()


class CheckResult(RecordModel):
    name: str
    expected: str
    observed: str
    passed: bool


class VerificationOutcome(RecordModel):
    """Brute force against closed forms for one group."""

    descriptor: str
    passed: bool
    checks: List[CheckResult] = Field(default_factory=list)

    def failures(self) -> List[CheckResult]:
        return [check for check in self.checks if not check.passed]


class InvariantReport(RecordModel):
    """Structural fingerprint of one group."""

    p: int
    n: int
    m: int
    cl: int
    cc: int
    s: Optional[int] = None
    e: Optional[int] = None
    k: Optional[int] = None
    gamma_orders: List[int] = Field(default_factory=list)
    chi_orders: List[int] = Field(default_factory=list)
    abelianizations: List[AbelianGroup] = Field(default_factory=list)
    kappa: Optional[KappaType] = None
    nu: Optional[int] = None
    descriptor: Optional[str] = None
    notes: List[str] = Field(default_factory=list)

    def to_record(self) -> Dict[str, str]:
        """Flat record with the fixed field order p,n,m,cl,cc,s,e,k,gamma,chi,ab1..,kappa,nu."""

        def opt(value: Optional[int]) -> str:
            return ABSENT if value is None else str(value)

        record: Dict[str, str] = {
            "p": str(self.p),
            "n": str(self.n),
            "m": str(self.m),
            "cl": str(self.cl),
            "cc": str(self.cc),
            "s": opt(self.s),
            "e": opt(self.e),
            "k": opt(self.k),
            "gamma": ",".join(str(o) for o in self.gamma_orders),
            "chi": ",".join(str(o) for o in self.chi_orders) or ABSENT,
        }
        for index, group in enumerate(self.abelianizations, start=1):
            record[f"ab{index}"] = group.shape()
        record["kappa"] = self.kappa.text() if self.kappa is not None else ABSENT
        record["nu"] = opt(self.nu)
        return record
