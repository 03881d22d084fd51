"""Structural invariants s, e, k and the commutator factor groups of maximal subgroups."""

from __future__ import annotations

import logging
from typing import List, Tuple, cast

import numpy as np

from ._exceptions import InconsistentPresentation, InvariantUndefined, NoMatch
from .models.common import AbelianGroup
from .models.groups import CheckResult, FamilyDescriptor, InvariantReport, VerificationOutcome
from .pcgroup import (
    Element,
    PcGroup,
    Subgroup,
    centralizer_mask,
    comm,
    commutator_subgroup,
    derived_subgroup,
    gamma,
    generated_subgroup,
    lower_central_series,
    nilpotency_index,
    subgroup_closure,
)

logger = logging.getLogger(__name__)


# =============================================================================
# Maximal subgroups
# =============================================================================


def maximal_direction(p: int, i: int) -> Tuple[int, int]:
    """Exponents (a, b) of g_i: g_1 = y and g_i = x y^(i-2) for 2 <= i <= p+1."""
    if not 1 <= i <= p + 1:
        raise ValueError(f"i must be one of: 1..{p + 1}")
    return (0, 1) if i == 1 else (1, i - 2)


def line_index(p: int, a: int, b: int) -> int:
    """Index i of the maximal subgroup whose image in G/gamma_2 contains x^a y^b != 1."""
    a, b = a % p, b % p
    if a == 0 and b == 0:
        raise ValueError("the trivial class lies on every line")
    if a == 0:
        return 1
    return (b * pow(a, -1, p)) % p + 2


def maximal_subgroup(group: PcGroup, i: int) -> Subgroup:
    """M_i = <g_i, gamma_2(G)>."""
    key = f"maximal:{i}"
    cached = group.cached(key)
    if cached is not None:
        return cast(Subgroup, cached)
    p = group.p
    a0, b0 = maximal_direction(p, i)
    group._check_budget(p * group.derived_order)
    base = np.arange(group.derived_order, dtype=np.int64)
    blocks = [((t * a0 % p) * p + t * b0 % p) * group.derived_order + base for t in range(p)]
    gens = [group.element(a0, b0)] + list(group.derived_subset().generators)
    return cast(Subgroup, group.remember(key, Subgroup(group, np.concatenate(blocks), gens)))


def maximal_subgroups(group: PcGroup) -> List[Subgroup]:
    """M_1, ..., M_{p+1} in the order g_1 = y, g_i = x y^(i-2)."""
    return [maximal_subgroup(group, i) for i in range(1, group.p + 2)]


def abelian_quotient(group: PcGroup, big: Subgroup, normal: Subgroup) -> AbelianGroup:
    """Invariant factors of big/normal for abelian big/normal, counted from p-power orders."""
    p = group.p
    counts = [1]
    current = big.codes
    while counts[-1] * normal.order < big.order or len(counts) == 1:
        powered = current
        for _ in range(p - 1):
            powered = group.mul_codes(powered, current)
        current = powered
        killed = int(np.count_nonzero(normal.contains_codes(current)))
        counts.append(killed // normal.order)
        if len(counts) > group.log_order + 2:
            raise InconsistentPresentation("quotient is not a finite p-group")
    # counts[t] = prod_i p^min(t, e_i); its successive ratios count factors of exponent >= t
    at_least = []
    for t in range(1, len(counts)):
        ratio, r = counts[t] // counts[t - 1], 0
        while ratio > 1:
            ratio //= p
            r += 1
        at_least.append(r)
    factors = []
    for t, r in enumerate(at_least, start=1):
        longer = at_least[t] if t < len(at_least) else 0
        factors += [p**t] * (r - longer)
    return AbelianGroup(invariant_factors=tuple(sorted(factors)))


def gamma2_of_maximal(group: PcGroup, i: int) -> Subgroup:
    key = f"gamma2_max:{i}"
    cached = group.cached(key)
    if cached is not None:
        return cast(Subgroup, cached)
    return cast(Subgroup, group.remember(key, derived_subgroup(maximal_subgroup(group, i))))


def abelianization_of_maximal(group: PcGroup, i: int) -> AbelianGroup:
    """M_i / gamma_2(M_i)."""
    return abelian_quotient(group, maximal_subgroup(group, i), gamma2_of_maximal(group, i))


# =============================================================================
# Two-step centralisers and s, e, k
# =============================================================================


def _require_m3(group: PcGroup, name: str) -> int:
    m = nilpotency_index(group)
    if m < 3:
        raise InvariantUndefined(f"{name} is undefined for m = {m}", name=name)
    return m


def two_step_centralizer_chain(group: PcGroup) -> List[Subgroup]:
    """chi_2, ..., chi_{m-1} with chi_j = {g : [g, gamma_j] <= gamma_{j+2}}."""
    cached = group.cached("chi")
    if cached is not None:
        return list(cast(Tuple[Subgroup, ...], cached))
    m = _require_m3(group, "chi")
    codes = group.all_codes()
    chain = []
    for j in range(2, m):
        mask = centralizer_mask(group, gamma(group, j).generators, gamma(group, j + 2))
        chain.append(generated_subgroup(group, codes[mask]))
    logger.debug("two-step centraliser orders %s", [c.order for c in chain])
    group.remember("chi", tuple(chain))
    return chain


def invariant_s(group: PcGroup) -> int:
    """Smallest j with chi_j > gamma_2."""
    derived_order = gamma(group, 2).order
    for j, chi in enumerate(two_step_centralizer_chain(group), start=2):
        if chi.order > derived_order:
            return j
    raise InconsistentPresentation("chi_{m-1} does not exceed gamma_2")


def invariant_e(group: PcGroup) -> int:
    """e + 1 = first j >= 3 where gamma_j / gamma_{j+1} is cyclic."""
    m = _require_m3(group, "e")
    orders = [s.order for s in lower_central_series(group)] + [1]
    for j in range(3, m + 1):
        if orders[j - 1] // orders[j] <= group.p:
            return j - 1
    raise InconsistentPresentation("lower central factors never become cyclic")


def invariant_k(group: PcGroup) -> int:
    """k with [chi_s, gamma_e] = gamma_{m-k}."""
    m = _require_m3(group, "k")
    chi_s = two_step_centralizer_chain(group)[invariant_s(group) - 2]
    target = commutator_subgroup(group, chi_s, gamma(group, invariant_e(group)))
    for j in range(m, 0, -1):
        if gamma(group, j) == target:
            return m - j
    raise NoMatch("[chi_s, gamma_e] is not a lower central term", order=target.order)


# =============================================================================
# Reports
# =============================================================================


def report(group: PcGroup, *, with_kappa: bool = True) -> InvariantReport:
    """Full structural fingerprint; s, e, k are absent for m = 2."""
    from .transfer import kappa

    series = lower_central_series(group)
    n, m = group.log_order, len(series)
    cl, cc = m - 1, n - m + 1
    s = e = k = None
    chi_orders: List[int] = []
    notes: List[str] = []
    if m >= 3:
        s, e, k = invariant_s(group), invariant_e(group), invariant_k(group)
        chi_orders = [c.order for c in two_step_centralizer_chain(group)]
        if (e == 2) != (cc == 1):
            raise InconsistentPresentation("e = 2 must hold exactly for coclass 1", witness=(e, cc))
        if group.p == 3 and s != e:
            notes.append(f"s={s} differs from e={e}")
    if cl + cc != n:
        raise InconsistentPresentation("cl + cc must equal n", witness=(cl, cc, n))
    kappa_type = kappa(group) if with_kappa else None
    return InvariantReport(
        p=group.p,
        n=n,
        m=m,
        cl=cl,
        cc=cc,
        s=s,
        e=e,
        k=k,
        gamma_orders=[g.order for g in series],
        chi_orders=chi_orders,
        abelianizations=[abelianization_of_maximal(group, i) for i in range(1, group.p + 2)],
        kappa=kappa_type,
        nu=kappa_type.nu if kappa_type is not None else None,
        descriptor=group.data.descriptor,
        notes=notes,
    )


# =============================================================================
# Verification against closed forms
# =============================================================================


class _Checks:
    def __init__(self) -> None:
        self.results: List[CheckResult] = []

    def add(self, name: str, expected: object, observed: object) -> None:
        self.results.append(
            CheckResult(
                name=name,
                expected=str(expected),
                observed=str(observed),
                passed=expected == observed,
            )
        )


def _chain(start: Element, step: Element, count: int) -> List[Element]:
    out = [start]
    for _ in range(count):
        out.append(comm(out[-1], step))
    return out


def _nebelung_commutators(group: PcGroup, d: FamilyDescriptor) -> List[Tuple[int, List[Element]]]:
    """Corollary generators of gamma_2(M_i) for the Nebelung family."""
    x, y = group.generators
    s2 = group.derived_generator("s2")
    s3, t3 = comm(s2, x), comm(s2, y)
    e = d.e
    taus = _chain(group.derived_generator("tau3"), y, e - 2)[1:]
    sigmas = _chain(group.derived_generator("sigma3"), x, d.m - 4)[1:]
    gamma4 = list(gamma(group, 4).generators)
    return [
        (1, [t3] + taus),
        (2, [s3] + sigmas),
        (3, [s3 * t3] + gamma4),
        (4, [s3 * ~t3] + gamma4),
    ]


def verify_closed_forms(group: PcGroup) -> VerificationOutcome:
    """Compare brute-force invariants of a family group with their closed forms."""
    descriptor_text = group.data.descriptor or ""
    d = FamilyDescriptor.from_text(descriptor_text)
    p, checks = group.p, _Checks()
    m_obs = nilpotency_index(group)
    checks.add("order", p ** d.order_exponent, group.order)
    checks.add("m", d.m, m_obs)
    orders = [abelianization_of_maximal(group, i).order for i in range(1, p + 2)]

    if d.family == "elementary_abelian":
        checks.add("ab orders", [p] * (p + 1), orders)
    elif d.family == "nebelung":
        e = d.e
        checks.add("ab orders", [3 ** (d.m - d.k - 1), 3**e, 27, 27], orders)
        checks.add("e", e, invariant_e(group))
        checks.add("k", d.k, invariant_k(group))
        for i, gens in _nebelung_commutators(group, d):
            expected = subgroup_closure(group, gens)
            checks.add(f"gamma2(M{i})", expected.order, gamma2_of_maximal(group, i).order)
            checks.add(f"gamma2(M{i}) set", True, gamma2_of_maximal(group, i) == expected)
            checks.add(f"M{i} abelian", False, gamma2_of_maximal(group, i).is_trivial())
    else:
        m, k = d.m, d.k
        checks.add("ab orders", [p ** (m - k - 1)] + [p * p] * p, orders)
        checks.add("e", 2, invariant_e(group))
        checks.add("s", 2, invariant_s(group))
        checks.add("k", k, invariant_k(group))
        checks.add("gamma2(M1)", True, gamma2_of_maximal(group, 1) == gamma(group, m - k))
        for i in range(2, p + 2):
            checks.add(f"gamma2(M{i})", True, gamma2_of_maximal(group, i) == gamma(group, 3))
        checks.add("M1 abelian", k == 0, gamma2_of_maximal(group, 1).is_trivial())

    outcome = VerificationOutcome(
        descriptor=descriptor_text,
        passed=all(c.passed for c in checks.results),
        checks=checks.results,
    )
    logger.debug("verify %s passed=%s", descriptor_text, outcome.passed)
    return outcome

