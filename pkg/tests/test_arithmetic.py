from __future__ import annotations

import logging

import pytest

from metabelian._exceptions import (
    AbelianImpossible,
    HypothesisRequired,
    Inconsistent,
    InvalidCombination,
    KindMismatch,
    MissingW,
    ParameterError,
    ParityViolation,
)
from metabelian.arithmetic import (
    UNOBSERVED_CASE,
    admissible_invariants,
    classify,
    cohomology_kernel_rule,
    consistency_check,
    fuzz_records,
    predict_clF1,
    predict_direct,
    predict_quadratic,
    prediction_record,
    relate_class_numbers,
    roundtrip_failures,
)
from metabelian.models.common import AbelianGroup
from metabelian.models.fields import AmbiguousResult, ClassifierResult, FieldRecord


def _record(**fields) -> FieldRecord:
    fields.setdefault("p", 3)
    return FieldRecord(**fields)


def test_cohomology_kernel_rule() -> None:
    assert cohomology_kernel_rule("real", "alpha") == "total"
    assert cohomology_kernel_rule("real", "delta") == "cyclic"
    assert cohomology_kernel_rule("complex", "alpha") == "cyclic"
    with pytest.raises(InvalidCombination):
        cohomology_kernel_rule("complex", "delta")
    with pytest.raises(KindMismatch):
        cohomology_kernel_rule("generic", "alpha")


def test_relate_class_numbers() -> None:
    assert relate_class_numbers("real", "delta", 9, 3) == 243
    assert relate_class_numbers("real", "alpha", 9, 3) == 81
    assert relate_class_numbers("complex", "alpha", 3, 3) == 27
    with pytest.raises(ParameterError, match="not a power of 3"):
        relate_class_numbers("real", "alpha", 6, 3)


def test_predict_direct() -> None:
    assert predict_direct(2, 3) == (4, 4, 4)
    assert predict_direct(3, 2) == (3, 3, 3, 3)
    assert predict_direct(3, 6, k=1) == (81, 9, 9, 9)
    assert predict_direct(5, 4) == (125, 25, 25, 25, 25, 25)
    assert predict_direct(3, 4, 5) == (27, 27, 27, 27)
    assert predict_direct(3, 7, 10, 1) == (3**5, 3**5, 27, 27)
    with pytest.raises(ParameterError, match="p = 3"):
        predict_direct(5, 5, 6)
    with pytest.raises(ParameterError, match="2m-3"):
        predict_direct(3, 4, 6)


def test_predict_quadratic_coclass1() -> None:
    odd = predict_quadratic(3, "real", 5)
    assert odd.exponents == (2, 1, 1, 1)
    assert odd.unit_types == ("alpha",) * 4
    assert odd.nu == 4
    assert odd.clF1_exponent == 3

    even = predict_quadratic(3, "real", 4)
    assert even.exponents == (1, 1, 1, 1)
    assert even.unit_types == ("delta", "alpha", "alpha", "alpha")
    assert even.nu == 3

    excited = predict_quadratic(3, "real", 6, k=1)
    assert excited.exponents[0] == 2 and excited.unit_types[0] == "alpha"

    with pytest.raises(ParityViolation, match="real base field"):
        predict_quadratic(3, "complex", 5)
    with pytest.raises(ParityViolation, match="k = 0"):
        predict_quadratic(3, "real", 5, k=1)
    with pytest.raises(AbelianImpossible):
        predict_quadratic(3, "real", 2)
    with pytest.raises(KindMismatch):
        predict_quadratic(3, "generic", 5)


def test_predict_quadratic_complex_coclass2() -> None:
    prediction = predict_quadratic(3, "complex", 4, 5)
    assert prediction.exponents == (1, 1, 1, 1)
    assert prediction.nu == 0
    assert all(f.kernel == "cyclic" for f in prediction.fields)
    assert prediction.clF1_exponent == 3

    # e must be odd; m even exactly when k = 0
    with pytest.raises(ParityViolation, match="odd e"):
        predict_quadratic(3, "complex", 5, 7)
    with pytest.raises(ParityViolation, match="m even"):
        predict_quadratic(3, "complex", 5, 6, 0)


def test_predict_quadratic_real_coclass2() -> None:
    prediction = predict_quadratic(3, "real", 5, 6)
    assert prediction.exponents == (2, 1, 1, 1)
    assert prediction.unit_types == ("alpha", "delta", "delta", "delta")
    assert prediction.nu == 1

    double = predict_quadratic(3, "real", 6, 8, 1)
    assert double.exponents[:2] == (2, 2)
    assert double.unit_types[:2] == ("alpha", "alpha")
    assert double.nu == 2


def test_classify_coclass1_examples() -> None:
    result = classify(_record(kind="real", u=2, v=1, w=4, t1="alpha", t2="alpha"))
    assert isinstance(result, ClassifierResult)
    assert (result.branch, result.m, result.n, result.k, result.e) == ("coclass-1", 6, 6, 1, 2)
    assert result.nu_constraint == (3, 4)
    assert result.predicted_clF1_order == 81

    delta = classify(_record(kind="real", u=1, v=1, w=2, t1="delta", t2="alpha"))
    assert (delta.m, delta.k) == (4, 0)

    with pytest.raises(Inconsistent, match="w must equal 2u"):
        classify(_record(kind="real", u=1, v=1, w=3, t1="delta", t2="alpha"))


def test_unobserved_odd_case_is_flagged(caplog: pytest.LogCaptureFixture) -> None:
    with caplog.at_level(logging.WARNING, logger="metabelian.arithmetic"):
        result = classify(_record(kind="real", u=2, v=1, w=3, t1="alpha", t2="alpha"))
    assert (result.m, result.k) == (5, 0)
    assert UNOBSERVED_CASE in result.flags
    assert "not observed" in caplog.text


def test_missing_w() -> None:
    record = _record(kind="real", u=2, v=1, t1="alpha", t2="alpha")
    result = classify(record)
    assert isinstance(result, AmbiguousResult)
    assert sorted((c.m, c.k) for c in result.candidates) == [(5, 0), (6, 1)]
    assert "MissingW" in result.flags
    with pytest.raises(MissingW):
        classify(record, strict=True)


@pytest.mark.parametrize(
    ("fields", "expected"),
    [
        # (e, m, n, k)
        ({"kind": "complex", "u": 1, "v": 1, "w": 3}, (3, 4, 5, 0)),
        ({"kind": "complex", "u": 2, "v": 1, "w": 6}, (3, 7, 8, 1)),
        ({"kind": "complex", "u": 3, "v": 3, "w": 11}, (7, 8, 13, 0)),
        ({"kind": "real", "u": 2, "v": 2, "w": 6, "t1": "alpha", "t2": "alpha"}, (4, 6, 8, 1)),
        ({"kind": "real", "u": 2, "v": 1, "t1": "alpha", "t2": "delta"}, (3, 5, 6, 0)),
        ({"kind": "real", "u": 2, "v": 2, "w": 6, "t1": "delta", "t2": "alpha"}, (4, 6, 8, 0)),
        ({"kind": "real", "u": 2, "v": 1, "w": 5, "t1": "delta", "t2": "delta"}, (3, 6, 7, 0)),
    ],
)
def test_classify_coclass2(fields: dict, expected: tuple) -> None:
    result = classify(_record(**fields))
    assert isinstance(result, ClassifierResult)
    assert result.branch == "coclass-ge-2"
    assert (result.e, result.m, result.n, result.k) == expected
    assert result.families == ("nebelung",)
    assert result.predicted_clF1_order == 3 ** (expected[2] - 2)


def test_classify_rejections() -> None:
    with pytest.raises(Inconsistent, match="type alpha"):
        classify(_record(kind="complex", u=1, v=1, w=3, t1="alpha"))
    with pytest.raises(Inconsistent, match="unit types"):
        classify(_record(kind="real", u=1, v=1, w=3))
    with pytest.raises(Inconsistent, match="k = 0"):
        classify(_record(kind="real", u=2, v=1, w=5, t1="alpha", t2="delta"))
    with pytest.raises(Inconsistent):
        # k = w - 2u - 2v + 1 = 3
        classify(_record(kind="complex", u=1, v=1, w=6))
    with pytest.raises(KindMismatch):
        classify(_record(kind="generic", u=1, v=1, w=3))


def test_classify_large_p() -> None:
    record = _record(p=5, kind="real", u=2, w=4, t1="alpha")
    with pytest.raises(HypothesisRequired):
        classify(record)
    result = classify(record.model_copy(update={"assume_coclass1": True}))
    assert (result.m, result.k) == (6, 1)
    assert result.nu_constraint == (5, 6)

    delta = classify(_record(p=5, kind="real", u=2, t1="delta", assume_coclass1=True))
    assert (delta.m, delta.k) == (6, 0)

    with pytest.raises(Inconsistent):
        # k = 4 exceeds p - 2
        classify(_record(p=5, kind="real", u=2, w=7, t1="alpha", assume_coclass1=True))


@pytest.mark.parametrize(
    ("w", "m", "families"),
    [
        (2, 3, ("dihedral", "quaternion")),
        (3, 4, ("dihedral", "semidihedral", "quaternion")),
        (6, 7, ("dihedral", "semidihedral", "quaternion")),
    ],
)
def test_classify_p2(w: int, m: int, families: tuple) -> None:
    result = classify(_record(p=2, kind="complex", u=2, v=2, w=w))
    assert (result.m, result.n, result.k) == (m, m, 0)
    assert result.families == families
    assert result.predicted_clF1_order == 2 ** (w - 1)


def test_classify_p2_abelian_and_errors() -> None:
    result = classify(_record(p=2, kind="complex", u=1, v=1, w=1))
    assert (result.branch, result.m, result.families) == ("abelian", 2, ("abelian",))
    assert result.e is None
    with pytest.raises(MissingW):
        classify(_record(p=2, kind="complex", u=2, v=2))
    with pytest.raises(Inconsistent):
        classify(_record(p=2, kind="complex", u=3, v=2, w=4))


def test_field_record_validation() -> None:
    with pytest.raises(ValueError, match="u >= v"):
        _record(kind="complex", u=1, v=2)


def test_consistency_check() -> None:
    record = _record(
        kind="complex", u=2, v=1, w=6, kappa="(4231)", clF1=AbelianGroup.from_shape("27-9-3")
    )
    result = classify(record)
    assert consistency_check(record, result) == []
    assert predict_clF1(result) == 3**6

    wrong = record.model_copy(update={"kappa": "(0231)", "clF1": AbelianGroup.from_shape("9-3")})
    flags = consistency_check(wrong, result)
    assert any(flag.startswith("ClF1Mismatch") for flag in flags)

    total = _record(kind="real", u=1, v=1, w=2, t1="delta", t2="alpha", kappa="(1200)")
    flags = consistency_check(total, classify(total))
    assert any(flag.startswith("NuBound") for flag in flags)


def test_roundtrip_over_the_grid() -> None:
    assert len(admissible_invariants()) == 49
    checked, failures = roundtrip_failures()
    assert 0 < checked <= 2 * 49
    assert failures == []


def test_prediction_record_drops_types_for_complex() -> None:
    record = prediction_record(predict_quadratic(3, "complex", 6, 9))
    assert (record.u, record.v, record.w) == (2, 2, 7)
    assert record.types == ("unknown", "unknown")


def test_fuzzed_complex_records_respect_parity() -> None:
    records = fuzz_records(10_000, seed=11)
    assert len(records) == 10_000
    complex_records = [record for record in records if record.kind == "complex"]
    assert complex_records
    for record in complex_records:
        result = classify(record, strict=True)
        assert isinstance(result, ClassifierResult)
        assert result.branch == "coclass-ge-2"
        assert result.e % 2 == 1
        assert (result.m % 2 == 0) == (result.k == 0)
        assert consistency_check(record, result) == []
