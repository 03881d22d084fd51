"""Class-number theorems: forward predictions from group invariants and their inversion."""

from __future__ import annotations

import logging
from typing import Callable, List, Optional, Tuple, Union

import numpy as np
from sympy import factorint, isprime

from ._base import DEFAULT_SEED
from ._exceptions import (
    AbelianImpossible,
    ClassificationError,
    HypothesisRequired,
    Inconsistent,
    InvalidCombination,
    KindMismatch,
    MissingW,
    ParameterError,
    ParityViolation,
)
from .models.fields import (
    AmbiguousResult,
    ClassifierResult,
    FieldKind,
    FieldRecord,
    KernelShape,
    LFieldPrediction,
    QuadraticPrediction,
    UnitType,
)
from .models.groups import KappaType
from .presentations import check_coclass1

logger = logging.getLogger(__name__)

Classification = Union[ClassifierResult, AmbiguousResult]

UNOBSERVED_CASE = "UnobservedCase"


def _require_prime(p: int) -> None:
    if not isprime(p):
        raise ParameterError("p must be prime", p=p)


def _require_quadratic(kind: str) -> None:
    if kind not in ("complex", "real"):
        raise KindMismatch("quadratic theorems need kind complex or real", kind=kind)


def _p_exponent(value: int, p: int) -> int:
    if value < 1:
        raise ParameterError("class number must be positive", value=value)
    factors = factorint(value)
    if value != 1 and set(factors) != {p}:
        raise ParameterError(f"{value} is not a power of {p}", value=value, p=p)
    return int(factors.get(p, 0))


# =============================================================================
# Cohomology and class-number relations
# =============================================================================


def cohomology_kernel_rule(kind: str, unit_type: str) -> KernelShape:
    """Shape of the principalisation kernel of a dihedral extension N of K."""
    _require_quadratic(kind)
    if unit_type not in ("alpha", "delta"):
        raise ValueError("unit_type must be one of: alpha, delta")
    if kind == "complex":
        if unit_type == "delta":
            raise InvalidCombination("complex base fields have no type delta", kind=kind)
        return "cyclic"
    return "total" if unit_type == "alpha" else "cyclic"


def relate_class_numbers(kind: str, unit_type: str, h_l: int, p: int) -> int:
    """h_p(N) from h_p(L): p * h_p(L)^2 for complex or delta, h_p(L)^2 for real alpha."""
    _require_quadratic(kind)
    _p_exponent(h_l, p)
    if kind == "real" and unit_type == "alpha":
        return h_l * h_l
    return p * h_l * h_l


# =============================================================================
# Forward predictions
# =============================================================================


def _check_coclass2(m: int, n: int, k: int) -> None:
    if not 4 <= m < n <= 2 * m - 3:
        raise ParameterError("coclass >= 2 needs 4 <= m < n <= 2m-3", m=m, n=n)
    if k not in (0, 1):
        raise ParameterError("k must be one of: 0, 1", k=k)
    if k == 1 and m < 5:
        raise ParameterError("k=1 needs m >= 5", m=m)


def predict_direct(p: int, m: int, n: Optional[int] = None, k: int = 0) -> Tuple[int, ...]:
    """p-class numbers h_p(N_1), ..., h_p(N_{p+1}) of the unramified degree-p extensions."""
    _require_prime(p)
    n = m if n is None else n
    if n == m:
        if m == 2:
            return (p,) * (p + 1)
        check_coclass1(p, m, k, ())
        return (p ** (m - k - 1),) + (p * p,) * p
    if p != 3:
        raise ParameterError("coclass >= 2 predictions need p = 3", p=p)
    _check_coclass2(m, n, k)
    e = n - m + 2
    return (3 ** (m - k - 1), 3**e, 27, 27)


def _field(index: int, exponent: int, unit_type: UnitType, kind: str) -> LFieldPrediction:
    kernel: KernelShape = "cyclic" if kind == "complex" else cohomology_kernel_rule(kind, unit_type)
    return LFieldPrediction(index=index, exponent=exponent, unit_type=unit_type, kernel=kernel)


def predict_quadratic(
    p: int, kind: FieldKind, m: int, n: Optional[int] = None, k: int = 0
) -> QuadraticPrediction:
    """Class numbers and unit types of the subfields L_i for a quadratic base field.

    Raises:
        AbelianImpossible: m = 2 with p odd.
        ParityViolation: the invariants cannot occur over this kind of field.
    """
    _require_prime(p)
    _require_quadratic(kind)
    n = m if n is None else n
    if p == 2:
        raise ParameterError("quadratic predictions cover odd p only", p=p)
    if m == 2 and n == 2:
        raise AbelianImpossible("an abelian second p-class group cannot occur", p=p)
    fields: List[LFieldPrediction] = []
    if n == m:
        check_coclass1(p, m, k, ())
        if kind == "complex":
            raise ParityViolation("coclass 1 forces a real base field", m=m)
        if (m - k - 1) % 2 == 0:
            fields.append(_field(1, (m - k - 1) // 2, "alpha", kind))
        elif k == 0:
            fields.append(_field(1, (m - 2) // 2, "delta", kind))
        else:
            raise ParityViolation("L_1 of type delta needs k = 0", m=m, k=k)
        fields += [_field(i, 1, "alpha", kind) for i in range(2, p + 2)]
        return QuadraticPrediction(p=p, kind=kind, fields=tuple(fields), clF1_exponent=m - 2)

    if p != 3:
        raise ParameterError("coclass >= 2 predictions need p = 3", p=p)
    _check_coclass2(m, n, k)
    e = n - m + 2
    if kind == "complex":
        if e % 2 == 0:
            raise ParityViolation("complex fields need odd e", e=e)
        if (m % 2 == 0) != (k == 0):
            raise ParityViolation("complex fields need m even exactly when k = 0", m=m, k=k)
        fields = [
            _field(1, (m - 2 - k) // 2, "unknown", kind),
            _field(2, (e - 1) // 2, "unknown", kind),
            _field(3, 1, "unknown", kind),
            _field(4, 1, "unknown", kind),
        ]
    else:
        if (m - k) % 2 == 1:
            fields.append(_field(1, (m - 1 - k) // 2, "alpha", kind))
        else:
            fields.append(_field(1, (m - 2 - k) // 2, "delta", kind))
        if e % 2 == 0:
            fields.append(_field(2, e // 2, "alpha", kind))
        else:
            fields.append(_field(2, (e - 1) // 2, "delta", kind))
        fields += [_field(3, 1, "delta", kind), _field(4, 1, "delta", kind)]
    return QuadraticPrediction(p=p, kind=kind, fields=tuple(fields), clF1_exponent=n - 2)


def prediction_record(prediction: QuadraticPrediction, *, with_w: bool = True) -> FieldRecord:
    """The measurement a field with this prediction would produce."""
    first, second = prediction.fields[0], prediction.fields[1]
    real = prediction.kind == "real"
    return FieldRecord(
        p=prediction.p,
        kind=prediction.kind,
        u=first.exponent,
        v=second.exponent,
        w=prediction.clF1_exponent if with_w else None,
        t1=first.unit_type if real else "unknown",
        t2=second.unit_type if real else "unknown",
    )


# =============================================================================
# Inverse classification
# =============================================================================


def _coclass1(p: int, m: int, k: int, flags: Optional[List[str]] = None) -> ClassifierResult:
    try:
        check_coclass1(p, m, k, ())
    except ParameterError as exc:
        raise Inconsistent("coclass-1 invariants out of range", m=m, k=k) from exc
    return ClassifierResult(
        p=p,
        branch="coclass-1",
        m=m,
        n=m,
        e=2,
        k=k,
        nu_constraint=(p, p + 1),
        predicted_clF1_order=p ** (m - 2),
        families=("coclass1",),
        flags=list(flags or []),
    )


def _coclass2(m: int, n: int, k: int) -> ClassifierResult:
    if k not in (0, 1):
        raise Inconsistent("k must be 0 or 1 for p = 3", k=k)
    try:
        _check_coclass2(m, n, k)
    except ParameterError as exc:
        raise Inconsistent("coclass >= 2 invariants out of range", m=m, n=n, k=k) from exc
    return ClassifierResult(
        p=3,
        branch="coclass-ge-2",
        m=m,
        n=n,
        e=n - m + 2,
        k=k,
        nu_constraint=(0, 1, 2),
        predicted_clF1_order=3 ** (n - 2),
        families=("nebelung",),
    )


def _ambiguous(candidates: List[ClassifierResult], strict: bool, reason: str) -> Classification:
    if not candidates:
        raise Inconsistent("no admissible invariants", reason=reason)
    if len(candidates) == 1:
        return candidates[0]
    if strict:
        raise MissingW("w is needed to determine k", reason=reason)
    logger.debug("ambiguous classification: %s", reason)
    return AmbiguousResult(candidates=tuple(candidates), flags=["MissingW"])


def _admissible(build: Callable[..., ClassifierResult], *args: int) -> Optional[ClassifierResult]:
    try:
        return build(*args)
    except Inconsistent:
        return None


def _classify_coclass1_alpha(p: int, u: int, w: Optional[int], strict: bool) -> Classification:
    if w is None:
        options = [_admissible(_coclass1, p, 2 * u + k + 1, k) for k in range(0, max(p - 1, 2))]
        return _ambiguous([c for c in options if c is not None], strict, "L_1 of type alpha")
    k = w - 2 * u + 1
    if k < 0:
        raise Inconsistent("w too small for L_1 of type alpha", u=u, w=w)
    flags = []
    if p == 3 and k == 0:
        flags.append(UNOBSERVED_CASE)
        logger.warning("odd m=%d with k=0 for type alpha is admitted but not observed", 2 * u + 1)
    return _coclass1(p, 2 * u + k + 1, k, flags)


def _classify_p2(record: FieldRecord) -> ClassifierResult:
    w = record.w
    if w is None:
        raise MissingW("w is the exponent of h_2(N_1) and is required for p = 2")
    v = record.v if record.v is not None else record.u
    if record.u == 1 and v == 1 and w == 1:
        return ClassifierResult(
            p=2, branch="abelian", m=2, n=2, nu_constraint=(3,), families=("abelian",)
        )
    if record.u != 2 or v != 2 or w < 2:
        raise Inconsistent("h_2(N_2) and h_2(N_3) must both be 4", u=record.u, v=v, w=w)
    m = w + 1
    families = ("dihedral", "quaternion") if m == 3 else ("dihedral", "semidihedral", "quaternion")
    return ClassifierResult(
        p=2,
        branch="coclass-1",
        m=m,
        n=m,
        e=2,
        k=0,
        predicted_clF1_order=2 ** (w - 1),
        families=families,
    )


def _classify_p3(record: FieldRecord, strict: bool) -> Classification:
    u, v, w = record.u, record.v, record.w
    t1, t2 = record.types
    if record.kind == "complex":
        if "alpha" in record.types:
            raise Inconsistent("complex records cannot carry type alpha")
        t1 = t2 = "delta"
    elif "unknown" in record.types:
        raise Inconsistent("real records need both unit types")

    if record.kind == "real" and t2 == "alpha" and v in (None, 1):
        if t1 == "delta":
            result = _coclass1(3, 2 * u + 2, 0)
            if w is not None and w != 2 * u:
                raise Inconsistent("w must equal 2u for L_1 of type delta", u=u, w=w)
            return result
        return _classify_coclass1_alpha(3, u, w, strict)

    if v is None:
        raise Inconsistent("v is required for coclass >= 2")
    if (t1, t2) == ("delta", "delta"):
        def build(k: int) -> ClassifierResult:
            return _coclass2(2 * u + 2 + k, 2 * u + 2 * v + 1 + k, k)

        if w is None:
            return _ambiguous(
                [c for c in (_admissible(build, 0), _admissible(build, 1)) if c is not None],
                strict,
                "e odd",
            )
        return build(w - 2 * u - 2 * v + 1)
    if (t1, t2) == ("alpha", "alpha"):
        def build_aa(k: int) -> ClassifierResult:
            return _coclass2(2 * u + 1 + k, 2 * u + 2 * v - 1 + k, k)

        if w is None:
            return _ambiguous(
                [c for c in (_admissible(build_aa, 0), _admissible(build_aa, 1)) if c is not None],
                strict,
                "T=(alpha,alpha)",
            )
        return build_aa(w - 2 * u - 2 * v + 3)
    if (t1, t2) == ("alpha", "delta"):
        result = _coclass2(2 * u + 1, 2 * u + 2 * v, 0)
    else:
        result = _coclass2(2 * u + 2, 2 * u + 2 * v, 0)
    if w is not None and w != result.n - 2:
        raise Inconsistent("mixed types force k = 0", k=w - result.n + 2)
    return result


def _classify_large_p(record: FieldRecord, strict: bool) -> Classification:
    if not record.assume_coclass1:
        raise HypothesisRequired("p >= 5 needs the coclass-1 hypothesis", p=record.p)
    if record.kind != "real":
        raise Inconsistent("coclass 1 forces a real base field", kind=record.kind)
    if record.t1 == "delta":
        return _coclass1(record.p, 2 * record.u + 2, 0)
    if record.t1 != "alpha":
        raise Inconsistent("the unit type of L_1 is required")
    return _classify_coclass1_alpha(record.p, record.u, record.w, strict)


def classify(record: FieldRecord, *, strict: bool = False) -> Classification:
    """Invariants of the second p-class group from measured class numbers.

    Returns an AmbiguousResult when w is absent and both values of k fit,
    unless ``strict`` is set, in which case MissingW is raised.
    """
    _require_prime(record.p)
    if record.p == 2:
        return _classify_p2(record)
    _require_quadratic(record.kind)
    if record.p == 3:
        return _classify_p3(record, strict)
    return _classify_large_p(record, strict)


def predict_clF1(result: ClassifierResult) -> int:
    """|Cl_p(F^1)| = |gamma_2(G)| = p^(n-2)."""
    return result.p ** (result.n - 2)


def consistency_check(record: FieldRecord, result: ClassifierResult) -> List[str]:
    """Flags for theorem-level contradictions between a record and its classification."""
    flags: List[str] = []
    p = result.p
    if record.kind == "complex" and result.branch == "coclass-ge-2":
        if result.e is not None and result.e % 2 == 0:
            flags.append("ParityViolation: e must be odd")
        if (result.m % 2 == 0) != (result.k == 0):
            flags.append("ParityViolation: m must be even exactly when k = 0")
    if record.kappa:
        observed = KappaType.parse(record.kappa, p)
        if result.nu_constraint and observed.nu not in result.nu_constraint:
            flags.append(f"NuBound: nu={observed.nu} not in {list(result.nu_constraint)}")
        if (
            p > 2
            and result.m == 3
            and observed.nu == 0
            and len(set(observed.digits)) == 1
        ):
            flags.append("ExtraSpecial: exponent p^2 signature cannot occur")
    if record.clF1 is not None and record.clF1.order != predict_clF1(result):
        flags.append(f"ClF1Mismatch: predicted {predict_clF1(result)} observed {record.clF1.order}")
    return flags


# =============================================================================
# Fuzzing
# =============================================================================


def admissible_invariants(max_m: int = 9, max_n: int = 13) -> List[Tuple[int, int, int]]:
    """(m, n, k) for p = 3 in both coclass regimes."""
    out = []
    for m in range(3, max_m + 1):
        for k in (0, 1):
            try:
                check_coclass1(3, m, k, ())
            except ParameterError:
                continue
            out.append((m, m, k))
    for m in range(4, max_m + 1):
        for n in range(m + 1, min(2 * m - 3, max_n) + 1):
            for k in (0, 1):
                if k == 1 and m < 5:
                    continue
                out.append((m, n, k))
    return out


def fuzz_records(count: int, seed: int = DEFAULT_SEED) -> List[FieldRecord]:
    """Admissible p = 3 records drawn from the forward theorems."""
    rng = np.random.default_rng(seed)
    grid = admissible_invariants()
    records: List[FieldRecord] = []
    while len(records) < count:
        m, n, k = grid[int(rng.integers(len(grid)))]
        kind: FieldKind = "complex" if rng.integers(2) else "real"
        try:
            record = prediction_record(predict_quadratic(3, kind, m, n, k))
        except (ParityViolation, ValueError):
            # ValueError: L_1 would have the smaller class number
            continue
        records.append(record)
    return records


def roundtrip_failures(max_m: int = 9, max_n: int = 13) -> Tuple[int, List[Tuple[str, int, int, int]]]:
    """Run classify over predict_quadratic on the p = 3 grid.

    The default bounds give 49 admissible (m, n, k) triples, so fewer than 200
    (kind, m, n, k) points in all, and every one of them is visited. Returns the
    number of points checked and the points that did not come back unchanged.
    Mixed real types with k = 1 fall outside the inverse theorems and are not checked.
    """
    checked = 0
    failures: List[Tuple[str, int, int, int]] = []
    for m, n, k in admissible_invariants(max_m, max_n):
        for kind in ("complex", "real"):
            try:
                prediction = predict_quadratic(3, kind, m, n, k)
                record = prediction_record(prediction)
            except (ParityViolation, ValueError):
                continue
            first, second = prediction.unit_types[:2]
            if kind == "real" and n > m and k == 1 and first != second:
                continue
            checked += 1
            try:
                result = classify(record, strict=True)
            except ClassificationError:
                failures.append((kind, m, n, k))
                continue
            if not isinstance(result, ClassifierResult) or (result.m, result.n, result.k) != (m, n, k):
                failures.append((kind, m, n, k))
    logger.debug("roundtrip: %d points, %d failures", checked, len(failures))
    return checked, failures
