from __future__ import annotations

import logging

import pytest

from metabelian._exceptions import InconsistentPresentation, ParameterError
from metabelian.models.groups import FamilyDescriptor
from metabelian.presentations import (
    check_coclass1,
    check_nebelung,
    classic2,
    coclass1,
    elementary_abelian,
    from_descriptor,
    nebelung,
    solve_tails,
)


def test_elementary_abelian() -> None:
    group = elementary_abelian(5)
    assert group.order == 25
    assert group.derived_order == 1
    with pytest.raises(ParameterError, match="prime"):
        elementary_abelian(4)


@pytest.mark.parametrize(
    ("p", "m", "k", "match"),
    [
        (3, 2, 0, "m >= 3"),
        (3, 3, 1, "k must be 0"),
        (3, 5, 2, "at most m-4"),
        (3, 7, 2, "min\\(m-4, p-2\\)"),
        (3, 4, -1, "non-negative"),
    ],
)
def test_coclass1_bounds(p: int, m: int, k: int, match: str) -> None:
    with pytest.raises(ParameterError, match=match):
        check_coclass1(p, m, k, ())


def test_coclass1_default_coefficients() -> None:
    assert check_coclass1(5, 7, 2, ()) == (1, 0)
    assert check_coclass1(3, 5, 0, ()) == ()
    with pytest.raises(ParameterError, match="must list"):
        check_coclass1(5, 7, 2, (1,))
    with pytest.raises(ParameterError, match="positive"):
        check_coclass1(5, 7, 2, (0, 1))


def test_coclass1_orders() -> None:
    for p, m, k in ((2, 5, 0), (3, 6, 1), (5, 5, 1)):
        group = coclass1(p, m, k)
        assert group.order == p**m
        assert group.data.descriptor == f"family=coclass1 p={p} m={m} k={k}" + (
            " miech=1" if k else ""
        )


def test_trivial_tails_are_preferred() -> None:
    group = coclass1(3, 4)
    assert not any(group.data.tail_xp)
    assert not any(group.data.tail_yp)
    # for m = 5, y^3 = 1 contradicts (x - 1) y^3 = (1 + y + y^2) s2 = s2^3 != 1
    deeper = coclass1(3, 5)
    assert not any(deeper.data.tail_xp)
    assert any(deeper.coords.canonical(deeper.data.tail_yp))


def test_solve_tails_reproduces_build() -> None:
    group = coclass1(3, 5)
    zero = tuple([0] * group.data.derived.generator_count)
    bare = group.data.model_copy(update={"tail_xp": zero, "tail_yp": zero})
    tx, ty = solve_tails(bare)
    assert group.coords.canonical(tx) == group.coords.canonical(group.data.tail_xp)
    assert group.coords.canonical(ty) == group.coords.canonical(group.data.tail_yp)


def test_tail_overrides() -> None:
    twisted = coclass1(3, 4, x_power={"s3": 1})
    assert twisted.x.order() == 9
    with pytest.raises(InconsistentPresentation):
        # s2 is not fixed by x
        coclass1(3, 4, x_power={"s2": 1})
    with pytest.raises(ParameterError, match="unknown generators"):
        coclass1(3, 4, x_power={"s9": 1})


def test_classic2_kinds() -> None:
    assert classic2("dihedral", 3).order == 8
    assert classic2("quaternion", 3).y.order() == 4
    assert classic2("semidihedral", 5).y.order() == 16
    with pytest.raises(ParameterError, match="m >= 4"):
        classic2("semidihedral", 3)
    with pytest.raises(ParameterError, match="kind must be one of"):
        classic2("cyclic", 4)


def test_nebelung_orders() -> None:
    for m, n, k, rho in ((4, 5, 0, 0), (5, 6, 1, 1), (5, 6, 1, -1), (6, 8, 0, 0)):
        group = nebelung(m, n, k, rho)
        assert group.order == 3**n
        assert group.derived_order == 3 ** (n - 2)


@pytest.mark.parametrize(
    ("m", "n", "k", "rho", "match"),
    [
        (4, 6, 0, 0, "n <= 2m-3"),
        (5, 5, 0, 0, "m < n"),
        (5, 6, 1, 0, "rho != 0"),
        (5, 7, 1, 1, "e <= m-2"),
        (5, 6, 2, 1, "k must be one of"),
    ],
)
def test_nebelung_bounds(m: int, n: int, k: int, rho: int, match: str) -> None:
    with pytest.raises(ParameterError, match=match):
        check_nebelung(m, n, k, rho, (0, 0, 0, 0))


def test_nebelung_rho_is_normalised_for_k0(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="metabelian.presentations"):
        rho, _ = check_nebelung(4, 5, 0, 1, (0, 0, 0, 0))
    assert rho == 0
    assert "ignored" in caplog.text


def test_nebelung_coupling_checks() -> None:
    assert check_nebelung(4, 5, 0, 0, (2, 1, 0, 0)) == (0, (2, 1, 0, 0))
    with pytest.raises(ParameterError, match="dependent"):
        check_nebelung(4, 5, 0, 0, (1, 0, 0, 0))
    with pytest.raises(ParameterError, match="tau_e needs k=0"):
        check_nebelung(6, 8, 1, 1, (0, 1, 0, 0))
    with pytest.raises(ParameterError, match="four values"):
        check_nebelung(4, 5, 0, 0, (0, 3, 0, 0))


def test_descriptor_text_round_trip() -> None:
    descriptor = FamilyDescriptor(
        family="nebelung", p=3, m=5, n=6, k=1, rho=-1, coupling=(1, 0, 2, 0)
    )
    text = descriptor.to_text()
    assert text == "family=nebelung p=3 m=5 n=6 k=1 rho=-1 coupling=1,0,2,0"
    assert FamilyDescriptor.from_text(text) == descriptor
    with pytest.raises(ValueError, match="unknown descriptor key"):
        FamilyDescriptor.from_text("family=coclass1 p=3 colour=red")


def test_from_descriptor_builds_and_reuses() -> None:
    descriptor = FamilyDescriptor(family="quaternion", p=2, m=4)
    group = from_descriptor(descriptor)
    assert group.order == 16
    assert from_descriptor(descriptor) is group
    with pytest.raises(ParameterError, match="p = 2"):
        from_descriptor(FamilyDescriptor(family="dihedral", p=3, m=4))
