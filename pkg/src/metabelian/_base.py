"""Enumeration and validation budgets shared by the group engine."""

from __future__ import annotations

from typing import Any

DEFAULT_ENUMERATION_BOUND = 200_000
DEFAULT_EXHAUSTIVE_TRIPLES = 20_000_000
DEFAULT_SAMPLED_TRIPLES = 100_000
DEFAULT_SEED = 0xC0C1A55


class Budget:
    """Limits for brute-force enumeration and presentation validation.

    Args:
        enumeration_bound: Largest explicit subgroup the oracle may enumerate.
        exhaustive_triples: Associativity is checked on all triples iff |G|^3 is at most this.
        sampled_triples: Number of seeded random triples checked otherwise.
        seed: Seed of the triple sampler.
    """

    __slots__ = ("enumeration_bound", "exhaustive_triples", "sampled_triples", "seed")

    def __init__(
        self,
        enumeration_bound: int = DEFAULT_ENUMERATION_BOUND,
        *,
        exhaustive_triples: int = DEFAULT_EXHAUSTIVE_TRIPLES,
        sampled_triples: int = DEFAULT_SAMPLED_TRIPLES,
        seed: int = DEFAULT_SEED,
    ):
        if enumeration_bound < 1:
            raise ValueError("enumeration_bound must be positive")
        if sampled_triples < 0:
            raise ValueError("sampled_triples must be non-negative")
        self.enumeration_bound = enumeration_bound
        self.exhaustive_triples = exhaustive_triples
        self.sampled_triples = sampled_triples
        self.seed = seed

    def _key(self) -> tuple[int, int, int, int]:
        return (self.enumeration_bound, self.exhaustive_triples, self.sampled_triples, self.seed)

    def __eq__(self, other: Any) -> bool:
        return isinstance(other, Budget) and self._key() == other._key()

    def __hash__(self) -> int:
        return hash(self._key())

    def __repr__(self) -> str:
        return (
            f"Budget(enumeration_bound={self.enumeration_bound}, "
            f"sampled_triples={self.sampled_triples}, seed={self.seed:#x})"
        )


DEFAULT_BUDGET = Budget()
