"""Smith normal form and finitely presented abelian groups."""

from __future__ import annotations

import logging
from typing import List, Optional, Sequence, Tuple

from pydantic import field_validator, model_validator
from sympy import Matrix

from ._exceptions import InconsistentPresentation, InfiniteQuotient
from .models.common import AbelianGroup, RecordModel

logger = logging.getLogger(__name__)

IntMatrix = Tuple[Tuple[int, ...], ...]
IntVector = Tuple[int, ...]


class AbelianPresentation(RecordModel):
    """Generators g_1..g_r subject to relations prod g_i^{v_i} = 1."""

    generator_count: int
    relations: Tuple[IntVector, ...] = ()
    labels: Tuple[str, ...] = ()

    @field_validator("generator_count")
    @classmethod
    def _check_count(cls, value: int) -> int:
        if value < 0:
            raise ValueError("generator_count must be non-negative")
        return value

    @model_validator(mode="after")
    def _check_lengths(self) -> "AbelianPresentation":
        for relation in self.relations:
            if len(relation) != self.generator_count:
                raise ValueError(
                    f"relation {relation} must have length {self.generator_count}"
                )
        if self.labels and len(self.labels) != self.generator_count:
            raise ValueError("labels must name every generator")
        return self

    def label_index(self, label: str) -> int:
        try:
            return self.labels.index(label)
        except ValueError:
            raise ValueError(f"unknown generator label {label!r}") from None


# =============================================================================
# Smith normal form
# =============================================================================


def _identity(size: int) -> List[List[int]]:
    return [[int(i == j) for j in range(size)] for i in range(size)]


def _freeze(rows: List[List[int]]) -> IntMatrix:
    return tuple(tuple(row) for row in rows)


class _SmithReduction:
    """Row and column reduction tracking U (rows) and V (columns) with D = U M V."""

    def __init__(self, matrix: Sequence[Sequence[int]], cols: int):
        self.a = [list(map(int, row)) for row in matrix]
        self.rows = len(self.a)
        self.cols = cols
        self.u = _identity(self.rows)
        self.v = _identity(self.cols)

    def _pivot(self, s: int) -> Optional[Tuple[int, int]]:
        best: Optional[Tuple[int, int]] = None
        best_abs = 0
        for i in range(s, self.rows):
            for j in range(s, self.cols):
                value = abs(self.a[i][j])
                if value and (best is None or value < best_abs):
                    best, best_abs = (i, j), value
        return best

    def _swap_rows(self, i: int, j: int) -> None:
        if i != j:
            self.a[i], self.a[j] = self.a[j], self.a[i]
            self.u[i], self.u[j] = self.u[j], self.u[i]

    def _swap_cols(self, i: int, j: int) -> None:
        if i == j:
            return
        for row in self.a:
            row[i], row[j] = row[j], row[i]
        for row in self.v:
            row[i], row[j] = row[j], row[i]

    def _add_row(self, target: int, source: int, factor: int) -> None:
        for mat in (self.a, self.u):
            src, dst = mat[source], mat[target]
            for idx in range(len(dst)):
                dst[idx] += factor * src[idx]

    def _add_col(self, target: int, source: int, factor: int) -> None:
        for mat in (self.a, self.v):
            for row in mat:
                row[target] += factor * row[source]

    def _negate_row(self, i: int) -> None:
        self.a[i] = [-x for x in self.a[i]]
        self.u[i] = [-x for x in self.u[i]]

    def run(self) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
        for s in range(min(self.rows, self.cols)):
            while True:
                pivot = self._pivot(s)
                if pivot is None:
                    return _freeze(self.a), _freeze(self.u), _freeze(self.v)
                self._swap_rows(s, pivot[0])
                self._swap_cols(s, pivot[1])
                head = self.a[s][s]
                for i in range(s + 1, self.rows):
                    if self.a[i][s]:
                        self._add_row(i, s, -(self.a[i][s] // head))
                for j in range(s + 1, self.cols):
                    if self.a[s][j]:
                        self._add_col(j, s, -(self.a[s][j] // head))
                if any(self.a[i][s] for i in range(s + 1, self.rows)) or any(
                    self.a[s][j] for j in range(s + 1, self.cols)
                ):
                    continue
                stray = next(
                    (
                        i
                        for i in range(s + 1, self.rows)
                        for j in range(s + 1, self.cols)
                        if self.a[i][j] % head
                    ),
                    None,
                )
                if stray is not None:
                    self._add_row(s, stray, 1)
                    continue
                if head < 0:
                    self._negate_row(s)
                break
        return _freeze(self.a), _freeze(self.u), _freeze(self.v)


def smith_normal_form(
    matrix: Sequence[Sequence[int]], cols: Optional[int] = None
) -> Tuple[IntMatrix, IntMatrix, IntMatrix]:
    """Return (D, U, V) with D = U * M * V, U and V unimodular, D diagonal with d_1 | d_2 | ...

    Pivots are chosen by smallest nonzero absolute value, lowest (row, column) first.
    Entries stay Python integers throughout.
    """
    if cols is None:
        cols = len(matrix[0]) if len(matrix) else 0
    for row in matrix:
        if len(row) != cols:
            raise ValueError("matrix must be rectangular")
    return _SmithReduction(matrix, cols).run()


def diagonal(matrix: IntMatrix) -> Tuple[int, ...]:
    return tuple(matrix[i][i] for i in range(min(len(matrix), len(matrix[0]) if matrix else 0)))


def matmul(left: Sequence[Sequence[int]], right: Sequence[Sequence[int]]) -> IntMatrix:
    inner = len(right)
    width = len(right[0]) if inner else 0
    return tuple(
        tuple(sum(row[t] * right[t][j] for t in range(inner)) for j in range(width))
        for row in left
    )


# =============================================================================
# Presentations and canonical coordinates
# =============================================================================


class AbelianCoordinates:
    """Canonical coordinates of Z^r / <relations> read off the Smith normal form.

    A named-generator vector v maps to (v * V)_i mod d_i on the nontrivial
    invariant factors d_i; ``lift`` goes back through V^-1.
    """

    def __init__(self, presentation: AbelianPresentation):
        self.presentation = presentation
        r = presentation.generator_count
        d_matrix, _, v = smith_normal_form(presentation.relations, cols=r)
        diag = list(diagonal(d_matrix)) if presentation.relations else []
        diag += [0] * (r - len(diag))
        if any(d == 0 for d in diag):
            rank = sum(1 for d in diag if d)
            raise InfiniteQuotient(
                "relations do not span a full-rank lattice", rank=rank, generators=r
            )
        self._v = v
        self._v_inv: IntMatrix = (
            _freeze([[int(x) for x in Matrix(v).inv().row(i)] for i in range(r)]) if r else ()
        )
        self.kept: Tuple[int, ...] = tuple(i for i, d in enumerate(diag) if d > 1)
        self.moduli: Tuple[int, ...] = tuple(diag[i] for i in self.kept)
        self.group = AbelianGroup(invariant_factors=self.moduli)
        logger.debug("abelian coordinates r=%d invariants=%s", r, self.group.shape())

    @property
    def rank(self) -> int:
        return len(self.moduli)

    @property
    def order(self) -> int:
        return self.group.order

    def canonical(self, vector: Sequence[int]) -> IntVector:
        if len(vector) != self.presentation.generator_count:
            raise ValueError("vector length must equal the generator count")
        return tuple(
            sum(vector[t] * self._v[t][col] for t in range(len(vector))) % modulus
            for col, modulus in zip(self.kept, self.moduli)
        )

    def lift(self, coords: Sequence[int]) -> IntVector:
        """Named-generator vector representing canonical ``coords``."""
        r = self.presentation.generator_count
        full = [0] * r
        for col, value in zip(self.kept, coords):
            full[col] = value
        return tuple(sum(full[t] * self._v_inv[t][j] for t in range(r)) for j in range(r))

    def word(self, word: dict[str, int]) -> IntVector:
        """Canonical coordinates of a label -> exponent word."""
        vector = [0] * self.presentation.generator_count
        for label, exponent in word.items():
            vector[self.presentation.label_index(label)] += exponent
        return self.canonical(vector)

    def transport(self, images: Sequence[Sequence[int]]) -> IntMatrix:
        """Matrix on canonical coordinates of the endomorphism g_i -> images[i].

        Acts on row vectors: c -> c * T reduced modulo the invariants.
        """
        r = self.presentation.generator_count
        if len(images) != r:
            raise ValueError("images must list one vector per generator")
        for relation in self.presentation.relations:
            image = [sum(relation[i] * images[i][j] for i in range(r)) for j in range(r)]
            if any(self.canonical(image)):
                raise InconsistentPresentation(
                    "generator images do not respect the relations", witness=relation
                )
        rows = []
        for col in self.kept:
            source = self._v_inv[col]
            image = [sum(source[i] * images[i][j] for i in range(r)) for j in range(r)]
            rows.append(self.canonical(image))
        return tuple(rows)


def abelian_invariants(presentation: AbelianPresentation) -> AbelianGroup:
    """Invariant factors of Z^r / <relations>, factors of 1 removed."""
    return AbelianCoordinates(presentation).group


def group_element_reduce(vector: Sequence[int], group: AbelianGroup) -> IntVector:
    """Reduce each coordinate modulo its invariant factor."""
    if len(vector) != group.rank:
        raise ValueError(
            f"vector length {len(vector)} does not match {group.rank} invariant factors"
        )
    return tuple(int(x) % d for x, d in zip(vector, group.invariant_factors))
