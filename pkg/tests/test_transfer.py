from __future__ import annotations

import pytest

from metabelian.models.groups import KappaType
from metabelian.presentations import classic2, coclass1, elementary_abelian, nebelung
from metabelian.transfer import (
    base_name,
    kappa,
    nu,
    orbit_canonical,
    transfer_kernel,
    transfer_kernels,
    transfer_map,
    type_names,
)


def test_elementary_abelian_has_total_kernels() -> None:
    group = elementary_abelian(3)
    assert kappa(group).text() == "(0000)"
    assert nu(group) == 4
    assert all(kernel.is_total for kernel in transfer_kernels(group))


def test_transfer_map_covers_the_plane() -> None:
    group = classic2("quaternion", 3)
    values = transfer_map(group, 2)
    assert sorted(values) == [(a, b) for a in range(2) for b in range(2)]
    kernel = transfer_kernel(group, 2)
    assert kernel.order in (2, 4)


def test_quaternion_kernels_are_cyclic() -> None:
    kernels = transfer_kernels(classic2("quaternion", 3))
    assert [k.order for k in kernels] == [2, 2, 2]


@pytest.mark.parametrize(("m", "k"), [(4, 0), (5, 0), (6, 1), (7, 1)])
def test_maximal_class_nu_bound(m: int, k: int) -> None:
    assert nu(coclass1(3, m, k)) in (3, 4)


@pytest.mark.parametrize(
    ("m", "n", "k", "rho"), [(4, 5, 0, 0), (5, 6, 1, 1), (5, 7, 0, 0), (6, 8, 1, -1)]
)
def test_nebelung_nu_bound(m: int, n: int, k: int, rho: int) -> None:
    assert nu(nebelung(m, n, k, rho)) <= 2


def test_nebelung_types() -> None:
    plain = kappa(nebelung(4, 5, 0))
    assert plain.nu == 2
    assert orbit_canonical(plain) == orbit_canonical(KappaType.parse("(0043)", 3))

    coupled = kappa(nebelung(4, 5, 0, coupling=(2, 1, 0, 0)))
    assert coupled.nu == 0
    assert orbit_canonical(coupled) == orbit_canonical(KappaType.parse("(2241)", 3))
    assert "D.10" in type_names(coupled)


def test_exponent_nine_extraspecial_signature() -> None:
    group = coclass1(3, 3, y_power={"s2": 1})
    assert group.y.order() == 9
    kernels = transfer_kernels(group)
    assert all(kernel.is_cyclic for kernel in kernels)
    assert len({kernel.generators for kernel in kernels}) == 1
    digits = kappa(group).digits
    assert len(set(digits)) == 1 and digits[0] != 0


def test_orbit_canonical_is_a_class_invariant() -> None:
    original = KappaType.parse("(2241)", 3)
    # swap the labels 1 and 2
    relabelled = KappaType.parse("(1142)", 3)
    assert orbit_canonical(original) == orbit_canonical(relabelled)
    assert orbit_canonical(KappaType.parse("(0000)", 3)).text() == "(0000)"


@pytest.mark.parametrize(
    ("name", "expected"),
    [("H.4↑2", "H.4"), ("G.16r↑", "G.16"), ("a.3*", "a.3"), ("d.25*", "d.25"), ("E.9", "E.9")],
)
def test_base_name(name: str, expected: str) -> None:
    assert base_name(name) == expected


def test_type_names_for_total_principalisation() -> None:
    assert type_names(KappaType.parse("(0000)", 3)) == ("a.1",)
