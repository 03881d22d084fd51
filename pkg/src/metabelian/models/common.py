"""Common record types shared across the package."""

from __future__ import annotations

from typing import Tuple

from pydantic import BaseModel, ConfigDict, field_validator


class RecordModel(BaseModel):
    """Immutable base model for every value record."""

    model_config = ConfigDict(frozen=True)


class AbelianGroup(RecordModel):
    """Finite abelian group in invariant-factor form d_1 | d_2 | ... | d_r."""

    invariant_factors: Tuple[int, ...] = ()

    @field_validator("invariant_factors")
    @classmethod
    def _check_chain(cls, value: Tuple[int, ...]) -> Tuple[int, ...]:
        for factor in value:
            if factor < 2:
                raise ValueError("invariant factors must be at least 2")
        for smaller, larger in zip(value, value[1:]):
            if larger % smaller:
                raise ValueError(f"invariant factors must form a divisibility chain: {value}")
        return value

    @property
    def order(self) -> int:
        result = 1
        for factor in self.invariant_factors:
            result *= factor
        return result

    @property
    def rank(self) -> int:
        return len(self.invariant_factors)

    @property
    def exponent(self) -> int:
        return self.invariant_factors[-1] if self.invariant_factors else 1

    def is_cyclic(self) -> bool:
        return self.rank <= 1

    def shape(self) -> str:
        """Dash-joined descending factors, ``"27-9-3"``; ``"1"`` for the trivial group."""
        if not self.invariant_factors:
            return "1"
        return "-".join(str(factor) for factor in reversed(self.invariant_factors))

    def display(self) -> str:
        """Parenthesised descending factors as printed in class-group tables."""
        if not self.invariant_factors:
            return "1"
        return "(" + ",".join(str(factor) for factor in reversed(self.invariant_factors)) + ")"

    @classmethod
    def from_shape(cls, text: str) -> "AbelianGroup":
        """Parse the dash format (``"9-3"``) or the printed form (``"(9,3)"``)."""
        cleaned = text.strip().strip("()")
        if cleaned in ("", "1"):
            return cls()
        separator = "-" if "-" in cleaned else ","
        try:
            factors = [int(part) for part in cleaned.split(separator)]
        except ValueError as exc:
            raise ValueError(f"shape must list integer factors: {text!r}") from exc
        return cls(invariant_factors=tuple(sorted(f for f in factors if f != 1)))

    def __str__(self) -> str:
        return self.shape()
