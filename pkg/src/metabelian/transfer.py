"""Transfers from G to its maximal subgroups, their kernels and the type kappa."""

from __future__ import annotations

import logging
import re
from itertools import permutations
from typing import Dict, List, Tuple

from ._exceptions import InconsistentPresentation
from .dataset import bundled_rows
from .invariants import gamma2_of_maximal, line_index, maximal_direction, maximal_subgroup
from .models.groups import KappaType, TransferKernel
from .pcgroup import Element, PcGroup, Subgroup, mul, power

logger = logging.getLogger(__name__)

Plane = Tuple[int, int]


def _coset_key(group: PcGroup, element: Element, normal: Subgroup) -> int:
    """Smallest code of element * normal."""
    return int(group.mul_codes(element.code, normal.codes).min())


def _outside_representative(group: PcGroup, i: int, shift: int = 0) -> Element:
    """Some t in G outside M_i; ``shift`` moves t inside its coset of M_i."""
    a0, _ = maximal_direction(group.p, i)
    t = group.y if a0 else group.x
    if shift and group.derived_order > 1:
        t = mul(t, group.from_code(group.derived_order - 1))
    return t


def transfer_value(group: PcGroup, i: int, g: Element, t: Element) -> int:
    """Coset key in M_i / gamma_2(M_i) of the transfer of g, using outer representative t."""
    target = maximal_subgroup(group, i)
    normal = gamma2_of_maximal(group, i)
    if t in target:
        raise ValueError("t must lie outside M_i")
    if g in target:
        value = group.identity
        conj = g
        t_inv = ~t
        for _ in range(group.p):
            value = mul(value, conj)
            conj = mul(mul(t_inv, conj), t)
    else:
        value = power(g, group.p)
    return _coset_key(group, value, normal)


def transfer_map(group: PcGroup, i: int) -> Dict[Plane, int]:
    """V: G/gamma_2(G) -> M_i/gamma_2(M_i) as (a, b) -> coset key.

    Raises:
        InconsistentPresentation: if a value depends on the representative of
            the class or on the choice of t.
    """
    p = group.p
    t_main = _outside_representative(group, i)
    t_other = _outside_representative(group, i, shift=1)
    shift = group.from_code(group.derived_order - 1) if group.derived_order > 1 else group.identity
    values: Dict[Plane, int] = {}
    for a in range(p):
        for b in range(p):
            g = group.element(a, b)
            value = transfer_value(group, i, g, t_main)
            checks = (
                transfer_value(group, i, g, t_other),
                transfer_value(group, i, mul(g, shift), t_main),
            )
            if any(check != value for check in checks):
                raise InconsistentPresentation(
                    "transfer is not well defined", witness=(i, a, b)
                )
            values[(a, b)] = value
    return values


def transfer_kernel(group: PcGroup, i: int) -> TransferKernel:
    normal = gamma2_of_maximal(group, i)
    identity_key = _coset_key(group, group.identity, normal)
    members = sorted(plane for plane, value in transfer_map(group, i).items() if value == identity_key)
    order = len(members)
    p = group.p
    if order == p * p:
        generators: Tuple[Plane, ...] = ((1, 0), (0, 1))
    elif order == p:
        generators = (next(v for v in members if v != (0, 0)),)
    elif order == 1:
        generators = ()
    else:
        raise InconsistentPresentation("transfer kernel is not a subgroup", witness=members)
    return TransferKernel(p=p, generators=generators, order=order)


def transfer_kernels(group: PcGroup) -> List[TransferKernel]:
    return [transfer_kernel(group, i) for i in range(1, group.p + 2)]


def kappa(group: PcGroup) -> KappaType:
    """Digit 0 for a total kernel, else the index j of the maximal subgroup whose line is the kernel."""
    digits = []
    for i, kernel in enumerate(transfer_kernels(group), start=1):
        if kernel.is_total:
            digits.append(0)
        elif kernel.is_cyclic:
            a, b = kernel.generators[0]
            digits.append(line_index(group.p, a, b))
        else:
            raise InconsistentPresentation("trivial transfer kernel", witness=i)
    result = KappaType(p=group.p, digits=tuple(digits))
    logger.debug("kappa %s for %s", result.text(), group.data.descriptor)
    return result


def nu(group: PcGroup) -> int:
    """Number of total transfer kernels."""
    return kappa(group).nu


def orbit_canonical(kappa_type: KappaType) -> KappaType:
    """Lexicographically least relabelling of kappa under permutations of the maximal subgroups."""
    size = kappa_type.p + 1
    digits = kappa_type.digits
    best = None
    for perm in permutations(range(1, size + 1)):
        # relabel i -> perm[i-1]; 0 stays 0
        image = [0] * size
        for i, d in enumerate(digits, start=1):
            image[perm[i - 1] - 1] = perm[d - 1] if d else 0
        candidate = tuple(image)
        if best is None or candidate < best:
            best = candidate
    return KappaType(p=kappa_type.p, digits=best or digits)


_DECORATION = re.compile(r"(↑\S*|\*|[ri])$")


def base_name(name: str) -> str:
    """Table name without tree-level arrows, the star mark and the r/i variant suffix."""
    previous = None
    while previous != name:
        previous, name = name, _DECORATION.sub("", name)
    return name


def type_names(kappa_type: KappaType) -> Tuple[str, ...]:
    """Bundled table names whose kappa lies in the same orbit."""
    target = orbit_canonical(kappa_type).digits
    names = set()
    for row in bundled_rows():
        if row.p != kappa_type.p or not row.kappa or not row.name:
            continue
        try:
            observed = KappaType.parse(row.kappa, row.p)
        except ValueError:
            continue
        if orbit_canonical(observed).digits == target:
            names.add(base_name(row.name))
    return tuple(sorted(names))

