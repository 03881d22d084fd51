"""Finite metabelian p-groups in normal form x^a y^b w with w in an abelian derived subgroup.

Elements are packed into integer codes ``(a * p + b) * |A| + enc(w)`` with ``enc``
a mixed-radix encoding of the canonical coordinates of w, most significant first.
Sorted codes therefore list elements in (a, b, w) lexicographic order, and a
subgroup is a sorted numpy array of codes.
"""

from __future__ import annotations

import logging
from typing import Dict, Iterator, List, Optional, Sequence, Tuple, Union, cast

import numpy as np
from pydantic import model_validator

from ._base import DEFAULT_BUDGET, Budget
from ._exceptions import BudgetExceeded, GroupMismatch, InconsistentPresentation, ParameterError
from .abelian import AbelianCoordinates, AbelianPresentation, IntVector
from .models.common import AbelianGroup, RecordModel

logger = logging.getLogger(__name__)

_INT64_HEADROOM = 2**62

Word = Dict[str, int]


class GroupData(RecordModel):
    """Raw presentation data of a two-generator metabelian p-group.

    Vectors are over the named generators of ``derived``. ``action_x[i]`` is the
    image of the i-th named generator under conjugation by x, likewise for y.
    """

    p: int
    derived: AbelianPresentation
    action_x: Tuple[IntVector, ...]
    action_y: Tuple[IntVector, ...]
    comm_yx: IntVector
    tail_xp: IntVector
    tail_yp: IntVector
    descriptor: Optional[str] = None

    @model_validator(mode="after")
    def _check_shapes(self) -> "GroupData":
        r = self.derived.generator_count
        if self.p < 2:
            raise ValueError("p must be at least 2")
        for name in ("action_x", "action_y"):
            images = getattr(self, name)
            if len(images) != r or any(len(image) != r for image in images):
                raise ValueError(f"{name} must be an {r}x{r} image table")
        for name in ("comm_yx", "tail_xp", "tail_yp"):
            if len(getattr(self, name)) != r:
                raise ValueError(f"{name} must have length {r}")
        return self


# =============================================================================
# Elements and subgroups
# =============================================================================


class Element:
    """Normal-form element x^a y^b w of a built group."""

    __slots__ = ("group", "code", "a", "b", "w")

    def __init__(self, group: "PcGroup", code: int):
        self.group = group
        self.code = int(code)
        self.a, self.b, self.w = group.decode(self.code)

    def __mul__(self, other: "Element") -> "Element":
        return mul(self, other)

    def __pow__(self, exponent: int) -> "Element":
        return power(self, exponent)

    def __invert__(self) -> "Element":
        return inv(self)

    def __eq__(self, other: object) -> bool:
        return isinstance(other, Element) and other.group is self.group and other.code == self.code

    def __hash__(self) -> int:
        return hash((id(self.group), self.code))

    def is_identity(self) -> bool:
        return self.code == 0

    def order(self) -> int:
        result, current = 1, self
        while not current.is_identity():
            current = current * self
            result += 1
        return result

    def __repr__(self) -> str:
        return f"Element(a={self.a}, b={self.b}, w={self.w})"


class Subgroup:
    """Explicit subgroup: sorted unique element codes plus a generating list."""

    __slots__ = ("group", "codes", "generators")

    def __init__(self, group: "PcGroup", codes: np.ndarray, generators: Sequence[Element] = ()):
        self.group = group
        self.codes = np.unique(np.asarray(codes, dtype=np.int64))
        self.generators: Tuple[Element, ...] = tuple(generators)

    @property
    def order(self) -> int:
        return int(self.codes.size)

    def __len__(self) -> int:
        return self.order

    def __iter__(self) -> Iterator[Element]:
        for code in self.codes:
            yield Element(self.group, int(code))

    def __contains__(self, element: object) -> bool:
        if not isinstance(element, Element) or element.group is not self.group:
            return False
        pos = int(np.searchsorted(self.codes, element.code))
        return pos < self.codes.size and int(self.codes[pos]) == element.code

    def contains_codes(self, codes: np.ndarray) -> np.ndarray:
        return np.isin(codes, self.codes, assume_unique=False)

    def __eq__(self, other: object) -> bool:
        return (
            isinstance(other, Subgroup)
            and other.group is self.group
            and np.array_equal(other.codes, self.codes)
        )

    def __hash__(self) -> int:
        return hash((id(self.group), self.codes.tobytes()))

    def issubset(self, other: "Subgroup") -> bool:
        return bool(np.all(other.contains_codes(self.codes)))

    def intersection(self, other: "Subgroup") -> "Subgroup":
        return Subgroup(self.group, np.intersect1d(self.codes, other.codes))

    def index_in(self, other: "Subgroup") -> int:
        return other.order // self.order

    def is_trivial(self) -> bool:
        return self.order == 1

    def __repr__(self) -> str:
        return f"Subgroup(order={self.order}, generators={len(self.generators)})"


# =============================================================================
# The group
# =============================================================================


class PcGroup:
    """A validated group; create it through :func:`build`."""

    def __init__(self, data: GroupData, *, budget: Budget = DEFAULT_BUDGET):
        self.data = data
        self.budget = budget
        self.p = p = data.p
        self.coords = AbelianCoordinates(data.derived)
        self.derived_group: AbelianGroup = self.coords.group
        self.moduli = np.array(self.coords.moduli, dtype=np.int64)
        self.rank = r = self.coords.rank
        self.derived_order = self.coords.order
        self.order = p * p * self.derived_order
        largest = int(self.moduli.max()) if r else 1
        if max(r, 1) * largest * largest >= _INT64_HEADROOM or self.order >= _INT64_HEADROOM:
            raise ParameterError("group too large for 64-bit normal-form arithmetic", order=self.order)
        radix = [1] * r
        for i in range(r - 2, -1, -1):
            radix[i] = radix[i + 1] * int(self.moduli[i + 1])
        self.radix = np.array(radix, dtype=np.int64)

        self.x_matrix = self._matrix(self.coords.transport(data.action_x))
        self.y_matrix = self._matrix(self.coords.transport(data.action_y))
        self.s2 = np.array(self.coords.canonical(data.comm_yx), dtype=np.int64)
        self.tx = np.array(self.coords.canonical(data.tail_xp), dtype=np.int64)
        self.ty = np.array(self.coords.canonical(data.tail_yp), dtype=np.int64)
        self._tabulate()
        self._cache: Dict[str, object] = {}

    # -- linear algebra on canonical coordinates -------------------------------

    def _matrix(self, rows: Sequence[Sequence[int]]) -> np.ndarray:
        return np.array(rows, dtype=np.int64).reshape(self.rank, self.rank)

    def _reduce(self, values: np.ndarray) -> np.ndarray:
        return np.mod(values, self.moduli)

    def _apply(self, vectors: np.ndarray, matrix: np.ndarray) -> np.ndarray:
        return self._reduce(vectors @ matrix)

    def _tabulate(self) -> None:
        p, r = self.p, self.rank
        identity = np.eye(r, dtype=np.int64)
        self.x_powers = [identity]
        self.y_powers = [identity]
        for _ in range(p):
            self.x_powers.append(self._reduce(self.x_powers[-1] @ self.x_matrix))
            self.y_powers.append(self._reduce(self.y_powers[-1] @ self.y_matrix))
        # xy_powers[c][d]: conjugation by x^c then by y^d
        self.xy_powers = [
            [self._reduce(self.x_powers[c] @ self.y_powers[d]) for d in range(p)] for c in range(p)
        ]
        # c_b with y^b x = x y^b c_b
        chain = [np.zeros(r, dtype=np.int64)]
        for b in range(1, p):
            chain.append(self._reduce(chain[-1] + self.s2 @ self.y_powers[b - 1]))
        # collect[b, c] with y^b x^c = x^c y^b collect[b, c]
        collect = np.zeros((p, p, r), dtype=np.int64)
        for b in range(p):
            for c in range(1, p):
                collect[b, c] = self._reduce(chain[b] + collect[b, c - 1] @ self.x_matrix)
        self.collect = collect
        self.collect_y = np.zeros((p, p, p, r), dtype=np.int64)
        for d in range(p):
            self.collect_y[:, :, d] = self._reduce(collect @ self.y_powers[d])
        self.tail_x_shifted = np.stack([self._apply(self.tx, self.y_powers[b]) for b in range(p)])

    # -- encoding ----------------------------------------------------------------

    def decode_many(self, codes: np.ndarray) -> Tuple[np.ndarray, np.ndarray, np.ndarray]:
        codes = np.asarray(codes, dtype=np.int64)
        ab, wcode = np.divmod(codes, self.derived_order)
        a, b = np.divmod(ab, self.p)
        w = (wcode[..., None] // self.radix) % self.moduli
        return a, b, w

    def encode_many(self, a: np.ndarray, b: np.ndarray, w: np.ndarray) -> np.ndarray:
        return (np.asarray(a) * self.p + np.asarray(b)) * self.derived_order + w @ self.radix

    def decode(self, code: int) -> Tuple[int, int, IntVector]:
        a, b, w = self.decode_many(np.array([code]))
        return int(a[0]), int(b[0]), tuple(int(v) for v in w[0])

    def encode(self, a: int, b: int, w: Sequence[int]) -> int:
        vector = self._reduce(np.array(w, dtype=np.int64).reshape(self.rank))
        return int(self.encode_many(np.array([a % self.p]), np.array([b % self.p]), vector[None])[0])

    # -- vectorised arithmetic ------------------------------------------------------

    def mul_codes(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """Elementwise product of two broadcastable code arrays."""
        left, right = np.broadcast_arrays(
            np.asarray(left, dtype=np.int64), np.asarray(right, dtype=np.int64)
        )
        shape = left.shape
        a1, b1, w1 = self.decode_many(left.ravel())
        a2, b2, w2 = self.decode_many(right.ravel())
        p = self.p
        moved = np.zeros_like(w1)
        for c in range(p):
            for d in range(p):
                mask = (a2 == c) & (b2 == d)
                if mask.any():
                    moved[mask] = w1[mask] @ self.xy_powers[c][d]
        wrap_x = (a1 + a2 >= p)[:, None]
        wrap_y = (b1 + b2 >= p)[:, None]
        a, b = (a1 + a2) % p, (b1 + b2) % p
        w = moved + self.collect_y[b1, a2, b2] + w2
        w = w + wrap_x * self.tail_x_shifted[b] + wrap_y * self.ty
        return self.encode_many(a, b, self._reduce(w)).reshape(shape)

    def inv_codes(self, codes: np.ndarray) -> np.ndarray:
        codes = np.asarray(codes, dtype=np.int64)
        shape = codes.shape
        a, b, w = self.decode_many(codes.ravel())
        c, d = (-a) % self.p, (-b) % self.p
        zero = np.zeros_like(w)
        base = self.mul_codes(self.encode_many(a, b, zero), self.encode_many(c, d, zero))
        _, _, u = self.decode_many(base)
        moved = np.zeros_like(w)
        for i in range(self.p):
            for j in range(self.p):
                mask = (c == i) & (d == j)
                if mask.any():
                    moved[mask] = w[mask] @ self.xy_powers[i][j]
        return self.encode_many(c, d, self._reduce(-u - moved)).reshape(shape)

    def comm_codes(self, left: np.ndarray, right: np.ndarray) -> np.ndarray:
        """[g, h] = g^-1 h^-1 g h elementwise."""
        inverses = self.mul_codes(self.inv_codes(left), self.inv_codes(right))
        return self.mul_codes(inverses, self.mul_codes(left, right))

    def conj_codes(self, codes: np.ndarray, by: int) -> np.ndarray:
        """h^-1 g h for every g in ``codes``."""
        by_inv = int(self.inv_codes(np.array([by]))[0])
        return self.mul_codes(self.mul_codes(by_inv, codes), by)

    # -- elements ---------------------------------------------------------------------

    def element(self, a: int = 0, b: int = 0, word: Union[Word, Sequence[int], None] = None) -> Element:
        """x^a y^b w with w a label -> exponent word or a named-generator vector."""
        if word is None:
            w: Sequence[int] = (0,) * self.rank
        elif isinstance(word, dict):
            w = self.coords.word(word)
        else:
            w = self.coords.canonical(word)
        return Element(self, self.encode(a, b, w))

    def from_code(self, code: int) -> Element:
        if not 0 <= code < self.order:
            raise ValueError(f"code must be one of: 0..{self.order - 1}")
        return Element(self, code)

    @property
    def identity(self) -> Element:
        return Element(self, 0)

    @property
    def x(self) -> Element:
        return self.element(1, 0)

    @property
    def y(self) -> Element:
        return self.element(0, 1)

    @property
    def generators(self) -> Tuple[Element, Element]:
        return (self.x, self.y)

    def derived_generator(self, label: str) -> Element:
        return self.element(0, 0, {label: 1})

    @property
    def log_order(self) -> int:
        n, order = 0, self.order
        while order > 1:
            order //= self.p
            n += 1
        return n

    def all_codes(self) -> np.ndarray:
        self._check_budget(self.order)
        return np.arange(self.order, dtype=np.int64)

    def whole(self) -> Subgroup:
        return Subgroup(self, self.all_codes(), self.generators)

    def derived_subset(self) -> Subgroup:
        """The stored A as an element set: all codes with a = b = 0."""
        self._check_budget(self.derived_order)
        gens = [
            self.element(0, 0, tuple(int(i == j) for j in range(self.data.derived.generator_count)))
            for i in range(self.data.derived.generator_count)
        ]
        return Subgroup(self, np.arange(self.derived_order, dtype=np.int64), gens)

    def _check_budget(self, size: int) -> None:
        if size > self.budget.enumeration_bound:
            raise BudgetExceeded(
                "explicit enumeration exceeds the budget",
                limit=self.budget.enumeration_bound,
                reached=size,
            )

    def cached(self, key: str) -> Optional[object]:
        return self._cache.get(key)

    def remember(self, key: str, value: object) -> object:
        self._cache[key] = value
        return value

    # -- validation -------------------------------------------------------------------

    def consistency_failures(self) -> List[str]:
        """Names of the violated conditions that make the presentation a group of order p^2 |A|."""
        p, r = self.p, self.rank
        identity = np.eye(r, dtype=np.int64)
        failures = []
        if np.any(self._reduce(self.x_powers[p] - identity)):
            failures.append("x^p acts nontrivially on A")
        if np.any(self._reduce(self.y_powers[p] - identity)):
            failures.append("y^p acts nontrivially on A")
        if np.any(self._reduce(self.x_matrix @ self.y_matrix - self.y_matrix @ self.x_matrix)):
            failures.append("actions of x and y do not commute")
        norm_x = self._reduce(sum(self.x_powers[:p]))
        norm_y = self._reduce(sum(self.y_powers[:p]))
        if np.any(self._reduce(self.tx @ self.x_matrix - self.tx)):
            failures.append("x^p is not fixed by x")
        if np.any(self._reduce(self.ty @ self.y_matrix - self.ty)):
            failures.append("y^p is not fixed by y")
        if np.any(self._reduce(self.tx @ self.y_matrix - self.tx + self.s2 @ norm_x)):
            failures.append("x^p conflicts with [y,x] under y")
        if np.any(self._reduce(self.ty @ self.x_matrix - self.ty - self.s2 @ norm_y)):
            failures.append("y^p conflicts with [y,x] under x")
        return failures

    def associativity_witness(self) -> Optional[Tuple[int, int, int]]:
        """A triple (u, v, w) of codes with (uv)w != u(vw), or None."""
        n = self.order
        if n**3 <= self.budget.exhaustive_triples:
            codes = np.arange(n, dtype=np.int64)
            table = self.mul_codes(codes[:, None], codes[None, :])
            for u in range(n):
                lhs = table[table[u][:, None], codes[None, :]]
                rhs = table[u][table]
                bad = np.argwhere(lhs != rhs)
                if bad.size:
                    return u, int(bad[0][0]), int(bad[0][1])
            logger.debug("associativity checked on all %d triples", n**3)
            return None
        rng = np.random.default_rng(self.budget.seed)
        u, v, w = rng.integers(0, n, size=(3, self.budget.sampled_triples), dtype=np.int64)
        lhs = self.mul_codes(self.mul_codes(u, v), w)
        rhs = self.mul_codes(u, self.mul_codes(v, w))
        bad = np.flatnonzero(lhs != rhs)
        logger.debug("associativity sampled on %d triples", self.budget.sampled_triples)
        if bad.size:
            i = int(bad[0])
            return int(u[i]), int(v[i]), int(w[i])
        return None

    def __repr__(self) -> str:
        label = self.data.descriptor or "custom"
        return f"PcGroup({label}, order={self.p}^{self.log_order})"


def build(data: GroupData, *, budget: Budget = DEFAULT_BUDGET) -> PcGroup:
    """Validate raw presentation data and return the group.

    Raises:
        InconsistentPresentation: if an action is not well defined on A, a
            consistency condition fails, or associativity fails on a checked triple.
    """
    group = PcGroup(data, budget=budget)
    failures = group.consistency_failures()
    if failures:
        raise InconsistentPresentation(
            "presentation is not consistent", witness="; ".join(failures)
        )
    witness = group.associativity_witness()
    if witness is not None:
        triple = tuple(repr(group.from_code(c)) for c in witness)
        raise InconsistentPresentation("associativity fails", witness=triple)
    mode = "exhaustive" if group.order**3 <= budget.exhaustive_triples else "sampled"
    logger.info(
        "built %s order=%d^%d A=%s check=%s",
        data.descriptor or "group",
        group.p,
        group.log_order,
        group.derived_group.shape(),
        mode,
    )
    return group


# =============================================================================
# Element operations
# =============================================================================


def _check_same(*elements: Element) -> PcGroup:
    group = elements[0].group
    for element in elements[1:]:
        if element.group is not group:
            raise GroupMismatch("elements belong to different groups")
    return group


def mul(g: Element, h: Element) -> Element:
    group = _check_same(g, h)
    return Element(group, int(group.mul_codes(np.array([g.code]), np.array([h.code]))[0]))


def inv(g: Element) -> Element:
    return Element(g.group, int(g.group.inv_codes(np.array([g.code]))[0]))


def power(g: Element, exponent: int) -> Element:
    """g^n by square and multiply; negative exponents invert first."""
    if exponent < 0:
        return power(inv(g), -exponent)
    result, base = g.group.identity, g
    while exponent:
        if exponent & 1:
            result = mul(result, base)
        base = mul(base, base)
        exponent >>= 1
    return result


def comm(g: Element, h: Element) -> Element:
    """[g, h] = g^-1 h^-1 g h."""
    group = _check_same(g, h)
    return Element(group, int(group.comm_codes(np.array([g.code]), np.array([h.code]))[0]))


# =============================================================================
# Subgroups
# =============================================================================


def _closure_codes(group: PcGroup, generator_codes: np.ndarray) -> np.ndarray:
    gens = np.unique(generator_codes[generator_codes != 0])
    found = np.zeros(1, dtype=np.int64)
    frontier = found
    while frontier.size and gens.size:
        products = group.mul_codes(frontier[:, None], gens[None, :]).ravel()
        frontier = np.setdiff1d(np.unique(products), found, assume_unique=True)
        found = np.union1d(found, frontier)
        group._check_budget(int(found.size))
    return found


def subgroup_closure(group: PcGroup, generators: Sequence[Element]) -> Subgroup:
    """Smallest subgroup containing ``generators``."""
    if generators:
        _check_same(*generators)
        if generators[0].group is not group:
            raise GroupMismatch("generators belong to a different group")
    codes = np.array([g.code for g in generators], dtype=np.int64)
    found = _closure_codes(group, codes)
    logger.debug("closure of %d generators has order %d", len(generators), found.size)
    return Subgroup(group, found, generators)


def normal_closure(
    group: PcGroup, generators: Sequence[Element], within: Optional[Subgroup] = None
) -> Subgroup:
    """Smallest subgroup containing ``generators`` and normalised by ``within`` (default G)."""
    conjugators = within.generators if within is not None else group.generators
    gens = list(generators)
    current = subgroup_closure(group, gens)
    while True:
        outside: Optional[int] = None
        for h in conjugators:
            images = group.conj_codes(current.codes, h.code)
            fresh = np.setdiff1d(images, current.codes)
            if fresh.size:
                outside = int(fresh[0])
                break
        if outside is None:
            return current
        gens.append(Element(group, outside))
        current = subgroup_closure(group, gens)


def commutator_subgroup(group: PcGroup, left: Subgroup, right: Subgroup) -> Subgroup:
    """[H, K] for H, K normal in G, from commutators of generators."""
    pairs = [comm(h, k) for h in left.generators for k in right.generators]
    return normal_closure(group, [c for c in pairs if not c.is_identity()])


def lower_central_series(group: PcGroup) -> List[Subgroup]:
    """gamma_1 = G, ..., gamma_m = 1; ``len(result) - 1`` is the nilpotency class."""
    cached = group.cached("lower_central_series")
    if cached is not None:
        return list(cast(Tuple[Subgroup, ...], cached))
    whole = group.whole()
    series = [whole]
    while not series[-1].is_trivial():
        series.append(commutator_subgroup(group, series[-1], whole))
        if len(series) > group.log_order + 2:
            raise InconsistentPresentation("lower central series does not terminate")
    logger.debug("lower central orders %s", [s.order for s in series])
    group.remember("lower_central_series", tuple(series))
    return series


def nilpotency_index(group: PcGroup) -> int:
    """m with gamma_m = 1 and gamma_{m-1} != 1."""
    return len(lower_central_series(group))


def gamma(group: PcGroup, j: int) -> Subgroup:
    """gamma_j(G), trivial beyond the index of nilpotence."""
    if j < 1:
        raise ValueError("j must be at least 1")
    series = lower_central_series(group)
    return series[j - 1] if j <= len(series) else series[-1]


def derived_subgroup(subgroup: Subgroup) -> Subgroup:
    """Commutator subgroup of an explicit subgroup carrying generators."""
    group = subgroup.group
    gens = subgroup.generators
    if not gens and subgroup.order > 1:
        raise ValueError("subgroup generators are required")
    pairs = [comm(g, h) for i, g in enumerate(gens) for h in gens[i + 1 :]]
    return normal_closure(group, [c for c in pairs if not c.is_identity()], within=subgroup)


def generated_subgroup(group: PcGroup, codes: np.ndarray) -> Subgroup:
    """Wrap a code set known to be a subgroup, picking a small generating list greedily."""
    codes = np.unique(np.asarray(codes, dtype=np.int64))
    gens: List[Element] = []
    span = np.zeros(1, dtype=np.int64)
    for code in codes:
        if span.size == codes.size:
            break
        pos = int(np.searchsorted(span, code))
        if pos < span.size and int(span[pos]) == int(code):
            continue
        gens.append(Element(group, int(code)))
        span = _closure_codes(group, np.array([g.code for g in gens], dtype=np.int64))
    return Subgroup(group, codes, gens)


def center(group: PcGroup) -> Subgroup:
    codes = group.all_codes()
    central = np.ones(codes.size, dtype=bool)
    for g in group.generators:
        central &= group.comm_codes(codes, g.code) == 0
    return generated_subgroup(group, codes[central])


def centralizer_mask(group: PcGroup, targets: Sequence[Element], modulo: Subgroup) -> np.ndarray:
    """Boolean mask over all codes: [g, u] lies in ``modulo`` for every u in ``targets``."""
    codes = group.all_codes()
    mask = np.ones(codes.size, dtype=bool)
    for u in targets:
        mask &= modulo.contains_codes(group.comm_codes(codes, u.code))
    return mask


def coset_representatives(subgroup: Subgroup, within: Subgroup) -> List[Element]:
    """Left coset representatives gH of ``subgroup`` in ``within``, smallest code first."""
    group = subgroup.group
    remaining = within.codes
    reps: List[Element] = []
    while remaining.size:
        rep = int(remaining[0])
        reps.append(Element(group, rep))
        remaining = np.setdiff1d(remaining, group.mul_codes(rep, subgroup.codes))
    return reps
