"""Constructors for the group families: elementary abelian, coclass 1, Nebelung, classical 2-groups."""

from __future__ import annotations

import logging
from functools import lru_cache
from math import comb
from typing import Dict, List, Optional, Sequence, Tuple

import numpy as np
from sympy import isprime

from ._base import DEFAULT_BUDGET, Budget
from ._exceptions import InconsistentPresentation, ParameterError
from .abelian import AbelianPresentation, IntVector
from .models.groups import FamilyDescriptor
from .pcgroup import GroupData, PcGroup, build

logger = logging.getLogger(__name__)

Word = Dict[str, int]

CLASSIC2_KINDS = ("dihedral", "semidihedral", "quaternion")


class _Module:
    """Named generators of A with substitution rules for labels outside the basis."""

    def __init__(self, labels: Sequence[str], substitutions: Optional[Dict[str, Word]] = None):
        self.labels = tuple(labels)
        self.index = {label: i for i, label in enumerate(self.labels)}
        self.substitutions = substitutions or {}

    def vector(self, word: Word) -> List[int]:
        out = [0] * len(self.labels)
        for label, exponent in word.items():
            if label in self.index:
                out[self.index[label]] += exponent
            elif label in self.substitutions:
                for sub_label, sub_exp in self.substitutions[label].items():
                    out[self.index[sub_label]] += exponent * sub_exp
            # any other label is a trivial generator
        return out

    def images(self, rule: Dict[str, Word]) -> Tuple[IntVector, ...]:
        return tuple(tuple(self.vector(rule.get(label, {label: 1}))) for label in self.labels)

    def presentation(self, relations: List[Word]) -> AbelianPresentation:
        return AbelianPresentation(
            generator_count=len(self.labels),
            relations=tuple(tuple(self.vector(rel)) for rel in relations),
            labels=self.labels,
        )


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise ParameterError("p must be prime", p=p)


def _word_vector(module: _Module, word: Optional[Word]) -> Optional[IntVector]:
    if word is None:
        return None
    unknown = [label for label in word if label not in module.index]
    if unknown:
        raise ParameterError("tail names unknown generators", labels=",".join(unknown))
    return tuple(module.vector(word))


# =============================================================================
# Tails
# =============================================================================


def solve_tails(data: GroupData, budget: Budget = DEFAULT_BUDGET) -> Tuple[IntVector, IntVector]:
    """Smallest x^p and y^p in A compatible with the actions and [y, x].

    Candidates run through A in canonical order, zero first, so trivial tails
    are returned whenever they are consistent.
    """
    draft = PcGroup(data, budget=budget)
    draft._check_budget(draft.derived_order)
    _, _, cands = draft.decode_many(np.arange(draft.derived_order, dtype=np.int64))
    p = draft.p
    norm_x = draft._reduce(sum(draft.x_powers[:p]))
    norm_y = draft._reduce(sum(draft.y_powers[:p]))
    fixed_x = ~np.any(draft._reduce(cands @ draft.x_matrix - cands), axis=1)
    fixed_y = ~np.any(draft._reduce(cands @ draft.y_matrix - cands), axis=1)
    shift_x = ~np.any(draft._reduce(cands @ draft.y_matrix - cands + draft.s2 @ norm_x), axis=1)
    shift_y = ~np.any(draft._reduce(cands @ draft.x_matrix - cands - draft.s2 @ norm_y), axis=1)
    tx_hits = np.flatnonzero(fixed_x & shift_x)
    ty_hits = np.flatnonzero(fixed_y & shift_y)
    if not tx_hits.size or not ty_hits.size:
        raise InconsistentPresentation(
            "no consistent tails exist", witness="x^p" if not tx_hits.size else "y^p"
        )
    tx = draft.coords.lift(tuple(int(v) for v in cands[tx_hits[0]]))
    ty = draft.coords.lift(tuple(int(v) for v in cands[ty_hits[0]]))
    logger.debug("solved tails x^p=%s y^p=%s", tx, ty)
    return tx, ty


def _finish(
    p: int,
    module: _Module,
    relations: List[Word],
    action_x: Dict[str, Word],
    action_y: Dict[str, Word],
    comm_yx: Word,
    descriptor: FamilyDescriptor,
    x_power: Optional[Word],
    y_power: Optional[Word],
    budget: Budget,
) -> PcGroup:
    zero = tuple([0] * len(module.labels))
    data = GroupData(
        p=p,
        derived=module.presentation(relations),
        action_x=module.images(action_x),
        action_y=module.images(action_y),
        comm_yx=tuple(module.vector(comm_yx)),
        tail_xp=zero,
        tail_yp=zero,
        descriptor=descriptor.to_text(),
    )
    tx = _word_vector(module, x_power)
    ty = _word_vector(module, y_power)
    if tx is None or ty is None:
        solved_x, solved_y = solve_tails(data, budget)
        tx = solved_x if tx is None else tx
        ty = solved_y if ty is None else ty
    data = data.model_copy(update={"tail_xp": tx, "tail_yp": ty})
    return build(data, budget=budget)


# =============================================================================
# Families
# =============================================================================


def elementary_abelian(p: int, *, budget: Budget = DEFAULT_BUDGET) -> PcGroup:
    """C_p x C_p."""
    _require_prime(p)
    descriptor = FamilyDescriptor(family="elementary_abelian", p=p, m=2)
    module = _Module(())
    return _finish(p, module, [], {}, {}, {}, descriptor, {}, {}, budget)


def _s(j: int) -> str:
    return f"s{j}"


def check_coclass1(p: int, m: int, k: int, miech_coeffs: Sequence[int]) -> Tuple[int, ...]:
    """Validate coclass-1 parameters and return the full coefficient list a(m-k)..a(m-1)."""
    _require_prime(p)
    if m < 3:
        raise ParameterError("coclass-1 groups need m >= 3", m=m)
    if k < 0:
        raise ParameterError("k must be non-negative", k=k)
    if m <= 3 and k != 0:
        raise ParameterError("k must be 0 for m <= 3", m=m, k=k)
    if m >= 4 and k > m - 4:
        raise ParameterError("k must be at most m-4", m=m, k=k)
    if m >= p + 1 and k > min(m - 4, p - 2):
        raise ParameterError("k must be at most min(m-4, p-2) for m >= p+1", p=p, m=m, k=k)
    coeffs = tuple(miech_coeffs) if miech_coeffs else ((1,) + (0,) * (k - 1) if k else ())
    if len(coeffs) != k:
        raise ParameterError("miech_coeffs must list a(m-k)..a(m-1)", k=k, given=len(coeffs))
    if any(not 0 <= a < p for a in coeffs):
        raise ParameterError("miech_coeffs must lie in [0, p)", coeffs=coeffs)
    if k and coeffs[0] == 0:
        raise ParameterError("a(m-k) must be positive when k >= 1", coeffs=coeffs)
    return coeffs


def coclass1(
    p: int,
    m: int,
    k: int = 0,
    miech_coeffs: Sequence[int] = (),
    *,
    x_power: Optional[Word] = None,
    y_power: Optional[Word] = None,
    budget: Budget = DEFAULT_BUDGET,
    family: str = "coclass1",
) -> PcGroup:
    """Metabelian p-group of maximal class and order p^m.

    A = <s_2, ..., s_{m-1}> with [s_j, x] = s_{j+1} and s_2^{y-1} given by the
    Miech coefficients; the y-action on deeper s_j follows from the module structure.
    """
    coeffs = check_coclass1(p, m, k, miech_coeffs)
    labels = [_s(j) for j in range(2, m)]
    module = _Module(labels)
    relations = [
        {_s(j + i): comb(p, i + 1) for i in range(p) if j + i < m} for j in range(2, m)
    ]
    action_x = {_s(j): {_s(j): 1, _s(j + 1): 1} for j in range(2, m)}
    action_y: Dict[str, Word] = {}
    for j in range(2, m):
        image = {_s(j): 1}
        for i, a in enumerate(coeffs):
            # s_j^{y-1} = delta^{j-2} applied to prod s_{m-l}^{a(m-l)}
            target = m - k + i + j - 2
            if a and target < m:
                image[_s(target)] = image.get(_s(target), 0) + a
        action_y[_s(j)] = image
    descriptor = FamilyDescriptor.model_validate(
        {
            "family": family,
            "p": p,
            "m": m,
            "k": k,
            "miech_coeffs": coeffs,
            "x_power": x_power,
            "y_power": y_power,
        }
    )
    comm_yx = {_s(2): 1} if m > 2 else {}
    return _finish(p, module, relations, action_x, action_y, comm_yx, descriptor, x_power, y_power, budget)


def classic2(kind: str, m: int, *, budget: Budget = DEFAULT_BUDGET) -> PcGroup:
    """Dihedral, semidihedral or generalised quaternion group of order 2^m.

    y generates the cyclic maximal subgroup, x inverts it up to a central twist.
    """
    if kind not in CLASSIC2_KINDS:
        raise ParameterError(f"kind must be one of: {', '.join(CLASSIC2_KINDS)}", kind=kind)
    least = 4 if kind == "semidihedral" else 3
    if m < least:
        raise ParameterError(f"{kind} groups need m >= {least}", m=m)
    top = _s(m - 1)
    y_power: Word = {_s(2): -1}
    x_power: Word = {}
    if kind == "quaternion":
        x_power = {top: 1}
    elif kind == "semidihedral":
        y_power = {_s(2): -1, top: 1}
    return coclass1(2, m, 0, x_power=x_power, y_power=y_power, budget=budget, family=kind)


def _sigma(j: int) -> str:
    return f"sigma{j}"


def _tau(j: int) -> str:
    return f"tau{j}"


def check_nebelung(
    m: int, n: int, k: int, rho: int, coupling: Sequence[int]
) -> Tuple[int, Tuple[int, int, int, int]]:
    """Validate Nebelung parameters; returns (rho, coupling) after normalisation."""
    if not 4 <= m < n <= 2 * m - 3:
        raise ParameterError("nebelung groups need 4 <= m < n <= 2m-3", m=m, n=n)
    e = n - m + 2
    if k not in (0, 1):
        raise ParameterError("k must be one of: 0, 1", k=k)
    if rho not in (-1, 0, 1):
        raise ParameterError("rho must be one of: -1, 0, 1", rho=rho)
    if k == 0 and rho != 0:
        logger.warning("rho=%d ignored for k=0; using rho=0", rho)
        rho = 0
    if k == 1:
        if rho == 0:
            raise ParameterError("k=1 requires rho != 0", k=k, rho=rho)
        if m < 5 or e > m - 2:
            raise ParameterError("k=1 requires m >= 5 and e <= m-2", m=m, e=e)
    if len(coupling) != 4 or any(c not in (0, 1, 2) for c in coupling):
        raise ParameterError("coupling must be four values in {0, 1, 2}", coupling=tuple(coupling))
    c1, c2, c3, c4 = (int(c) for c in coupling)
    if k == 1 and (c2 or c4):
        raise ParameterError("coupling through tau_e needs k=0", coupling=tuple(coupling))
    top_m, top_e = int(m == 4), int(e == 3)
    det = (-1 + c1 * top_m) * (1 + c4 * top_e) - (c2 * top_e) * (c3 * top_m)
    if det % 3 == 0:
        raise ParameterError("coupling makes [s2,x] and [s2,y] dependent mod gamma_4", coupling=tuple(coupling))
    return rho, (c1, c2, c3, c4)


def nebelung(
    m: int,
    n: int,
    k: int = 0,
    rho: int = 0,
    *,
    coupling: Sequence[int] = (0, 0, 0, 0),
    x_power: Optional[Word] = None,
    y_power: Optional[Word] = None,
    budget: Budget = DEFAULT_BUDGET,
) -> PcGroup:
    """Metabelian 3-group of coclass >= 2 with invariants m, n = log_3 |G| and k.

    A has basis s2, tau3..tau_e, sigma3..sigma_{m-1}; sigma is the x-chain, tau
    the y-chain, and tau_{e+1} = sigma_{m-1}^{-rho}.
    """
    rho, (c1, c2, c3, c4) = check_nebelung(m, n, k, rho, coupling)
    e = n - m + 2
    sigmas = [_sigma(j) for j in range(3, m)]
    taus = [_tau(j) for j in range(3, e + 1)]
    substitutions: Dict[str, Word] = {_tau(e + 1): {_sigma(m - 1): -rho} if k else {}}
    module = _Module(["s2"] + taus + sigmas, substitutions)

    relations: List[Word] = [{"s2": 3, _sigma(4): -1, _tau(4): 1}]
    for j in range(3, m):
        relations.append({_sigma(j): 3, _sigma(j + 1): 3, _sigma(j + 2): 1})
    for j in range(3, e + 1):
        relations.append({_tau(j): 3, _tau(j + 1): 3, _tau(j + 2): 1})

    s3: Word = {_sigma(3): -1, _sigma(4): -1}
    t3: Word = {_tau(3): 1, _tau(4): 1}
    for word, label, coeff in (
        (s3, _sigma(m - 1), c1),
        (s3, _tau(e), c2),
        (t3, _sigma(m - 1), c3),
        (t3, _tau(e), c4),
    ):
        if coeff:
            word[label] = word.get(label, 0) + coeff
    action_x: Dict[str, Word] = {"s2": {"s2": 1, **s3}}
    action_y: Dict[str, Word] = {"s2": {"s2": 1, **t3}}
    for j in range(3, m):
        action_x[_sigma(j)] = {_sigma(j): 1, _sigma(j + 1): 1}
    for j in range(3, e + 1):
        action_y[_tau(j)] = {_tau(j): 1, _tau(j + 1): 1}

    descriptor = FamilyDescriptor.model_validate(
        {
            "family": "nebelung",
            "p": 3,
            "m": m,
            "n": n,
            "k": k,
            "rho": rho,
            "coupling": (c1, c2, c3, c4),
            "x_power": x_power,
            "y_power": y_power,
        }
    )
    if x_power is None:
        x_power = {_tau(3): 1}
    if y_power is None:
        y_power = {_sigma(3): 1}
    return _finish(3, module, relations, action_x, action_y, {"s2": 1}, descriptor, x_power, y_power, budget)


# =============================================================================
# Descriptors
# =============================================================================


@lru_cache(maxsize=64)
def _from_text(text: str, budget: Budget) -> PcGroup:
    descriptor = FamilyDescriptor.from_text(text)
    family = descriptor.family
    if family == "elementary_abelian":
        return elementary_abelian(descriptor.p, budget=budget)
    if family == "coclass1":
        return coclass1(
            descriptor.p,
            descriptor.m,
            descriptor.k,
            descriptor.miech_coeffs,
            x_power=descriptor.x_power,
            y_power=descriptor.y_power,
            budget=budget,
        )
    if family == "nebelung":
        if descriptor.p != 3:
            raise ParameterError("nebelung groups need p = 3", p=descriptor.p)
        if descriptor.n is None:
            raise ParameterError("n is required for nebelung groups")
        return nebelung(
            descriptor.m,
            descriptor.n,
            descriptor.k,
            descriptor.rho,
            coupling=descriptor.coupling,
            x_power=descriptor.x_power,
            y_power=descriptor.y_power,
            budget=budget,
        )
    if descriptor.p != 2:
        raise ParameterError(f"{family} groups need p = 2", p=descriptor.p)
    return classic2(family, descriptor.m, budget=budget)


def from_descriptor(descriptor: FamilyDescriptor, *, budget: Budget = DEFAULT_BUDGET) -> PcGroup:
    """Build (or reuse) the group a descriptor names."""
    return _from_text(descriptor.to_text(), budget)
