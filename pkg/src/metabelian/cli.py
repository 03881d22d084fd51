"""Command line: ``metabelian group|classify|verify|tables``.

Exit codes: 0 success, 1 semantic failure (diffs, inconsistent rows, failed
checks), 2 usage or parse errors.
"""

from __future__ import annotations

import argparse
import csv
import io
import logging
import sys
from pathlib import Path
from typing import Dict, Iterator, List, Optional, Sequence, Tuple

from ._base import DEFAULT_ENUMERATION_BOUND, Budget
from ._exceptions import (
    BudgetExceeded,
    ClassificationError,
    InconsistentPresentation,
    MetabelianError,
    ParameterError,
    ParseError,
    SchemaError,
)
from ._version import __version__
from .arithmetic import classify, consistency_check, roundtrip_failures
from .dataset import TABLE_IDS, load_csv, reproduce_tables
from .invariants import report, verify_closed_forms
from .models.fields import AmbiguousResult, ClassifierResult
from .models.groups import FamilyDescriptor, InvariantReport, VerificationOutcome
from .models.tables import TableRow
from .pcgroup import GroupData, PcGroup
from .presentations import CLASSIC2_KINDS, from_descriptor
from .transfer import kappa, type_names

logger = logging.getLogger(__name__)

EXIT_OK = 0
EXIT_FAILURE = 1
EXIT_USAGE = 2

PRESETS = ("elementary_abelian", "coclass1", "nebelung") + tuple(CLASSIC2_KINDS)
FORMATS = ("text", "csv", "records")
CLASSIFY_COLUMNS = ("table", "name", "branch", "m", "n", "e", "k", "flags")
_TYPE_LETTERS = {"a": "alpha", "d": "delta", "-": "unknown"}


class UsageError(Exception):
    """Flag combination that argparse cannot reject on its own."""


# =============================================================================
# Output helpers
# =============================================================================


def _emit(args: argparse.Namespace, text: str) -> None:
    if not text.endswith("\n"):
        text += "\n"
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


def _csv_text(header: Sequence[str], rows: Sequence[Sequence[str]]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(header)
    writer.writerows(rows)
    return buffer.getvalue()


def _record_line(record: Dict[str, str]) -> str:
    return " ".join(f"{key}={value}" for key, value in record.items())


def _budget(args: argparse.Namespace) -> Budget:
    return Budget(args.budget)


# =============================================================================
# group
# =============================================================================


def _descriptor(args: argparse.Namespace) -> FamilyDescriptor:
    preset = args.preset
    p = 2 if preset in CLASSIC2_KINDS else args.p
    if preset == "nebelung":
        p = 3 if args.p is None else args.p
    if p is None:
        raise UsageError(f"--p is required for preset {preset}")
    m = 2 if args.m is None else args.m
    if preset == "coclass1" and m == 2:
        preset = "elementary_abelian"
    parts = [f"family={preset}", f"p={p}", f"m={m}", f"k={args.k}"]
    if preset == "nebelung":
        if args.n is None:
            raise UsageError("--n is required for preset nebelung")
        parts += [f"n={args.n}", f"rho={args.rho}"]
        if args.coupling:
            parts.append(f"coupling={args.coupling}")
    if args.miech:
        parts.append(f"miech={args.miech}")
    if args.tails:
        x_word, _, y_word = args.tails.partition("/")
        if x_word:
            parts.append(f"x_power={x_word}")
        if y_word:
            parts.append(f"y_power={y_word}")
    return FamilyDescriptor.from_text(" ".join(parts))


def _render_report(result: InvariantReport, names: Tuple[str, ...], fmt: str) -> str:
    record = result.to_record()
    if fmt == "csv":
        return _csv_text(list(record), [list(record.values())])
    if fmt == "records":
        return _record_line(record)
    lines = [f"group: {result.descriptor}"]
    lines += [f"{key:>6}: {value}" for key, value in record.items()]
    if result.m == 2:
        lines.append("note: abelian, s/e/k are undefined")
    lines += [f"note: {note}" for note in result.notes]
    if names:
        lines.append("types: " + ", ".join(names))
    return "\n".join(lines)


def cmd_group(args: argparse.Namespace) -> int:
    group = from_descriptor(_descriptor(args), budget=_budget(args))
    result = report(group)
    names = type_names(result.kappa) if result.kappa is not None else ()
    _emit(args, _render_report(result, names, args.format))
    return EXIT_OK


# =============================================================================
# classify
# =============================================================================


def _single_record(args: argparse.Namespace) -> TableRow:
    if args.u is None or args.kind is None:
        raise UsageError("classify needs --input or at least --kind and --u")
    t1, t2 = "unknown", "unknown"
    if args.type:
        letters = args.type.strip()
        if len(letters) != 2 or any(c not in _TYPE_LETTERS for c in letters):
            raise UsageError("--type must be two letters from a, d, -")
        t1, t2 = _TYPE_LETTERS[letters[0]], _TYPE_LETTERS[letters[1]]
    return TableRow.model_validate(
        {
            "table_id": "-",
            "p": 3 if args.p is None else args.p,
            "kind": args.kind,
            "u": args.u,
            "v": args.v,
            "w": args.w,
            "t1": t1,
            "t2": t2,
            "assume_coclass1": args.assume_coclass1,
        }
    )


def _expectation_flags(row: TableRow, result: ClassifierResult) -> List[str]:
    flags = []
    for column, expected, observed in (
        ("m", row.expected_m, result.m),
        ("n", row.expected_n, result.n),
        ("e", row.expected_e, result.e),
        ("k", row.expected_k, result.k),
    ):
        if expected is not None and expected != observed:
            flags.append(f"expected {column}={expected}")
    return flags


def classify_rows(rows: Sequence[TableRow], *, strict: bool) -> Iterator[Tuple[Dict[str, str], bool]]:
    """One output record per input row and whether it counts as a failure."""
    for index, row in enumerate(rows, start=1):
        out = {"table": row.table_id, "name": row.name or str(index)}
        blank = {"branch": "", "m": "", "n": "", "e": "", "k": ""}
        try:
            result = classify(row, strict=strict)
        except ClassificationError as exc:
            yield {**out, **blank, "flags": f"{type(exc).__name__}: {exc}"}, True
            continue
        if isinstance(result, AmbiguousResult):
            options = "|".join(f"m={c.m},n={c.n},k={c.k}" for c in result.candidates)
            yield {**out, **blank, "branch": "ambiguous", "flags": options}, False
            continue
        checks = consistency_check(row, result)
        mismatches = _expectation_flags(row, result)
        flags = list(result.flags) + checks + mismatches
        yield {
            **out,
            "branch": result.branch,
            "m": str(result.m),
            "n": str(result.n),
            "e": "" if result.e is None else str(result.e),
            "k": str(result.k),
            "flags": ";".join(flags),
        }, bool(checks or mismatches)


def cmd_classify(args: argparse.Namespace) -> int:
    rows: Sequence[TableRow] = load_csv(args.input) if args.input else [_single_record(args)]
    records, failed = [], False
    for record, bad in classify_rows(rows, strict=args.strict):
        records.append(record)
        failed = failed or bad
    if args.format == "csv":
        text = _csv_text(CLASSIFY_COLUMNS, [[r[c] for c in CLASSIFY_COLUMNS] for r in records])
    elif args.format == "records":
        text = "\n".join(_record_line(r) for r in records)
    else:
        text = "\n".join(
            f"{r['name']}: {r['branch'] or 'error'} m={r['m']} n={r['n']} e={r['e']} k={r['k']}"
            + (f" [{r['flags']}]" if r["flags"] else "")
            for r in records
        )
    _emit(args, text)
    return EXIT_FAILURE if failed else EXIT_OK


# =============================================================================
# verify
# =============================================================================


def _shifted_tail(data: GroupData, top: str, shift: int) -> Dict[str, int]:
    """The solved x^p of ``data`` times top^shift, as a word."""
    labels = data.derived.labels
    word = {label: int(v) for label, v in zip(labels, data.tail_xp) if v}
    word[top] = word.get(top, 0) + shift
    return word


def _coclass1_grid(p: int, max_m: int, budget: Budget) -> Iterator[FamilyDescriptor]:
    for m in range(3, max_m + 1):
        for k in range(0, max(m - 3, 1)):
            choices: List[Tuple[int, ...]] = [()]
            if k:
                choices.append((p - 1,) + (1,) * (k - 1))
            for coeffs in choices:
                text = f"family=coclass1 p={p} m={m} k={k}"
                if coeffs:
                    text += " miech=" + ",".join(str(a) for a in coeffs)
                try:
                    base = FamilyDescriptor.from_text(text)
                except ValueError:
                    continue
                yield base
                try:
                    data = from_descriptor(base, budget=budget).data
                except (ParameterError, InconsistentPresentation):
                    continue
                # s_{m-1} is central
                for shift in (1, 2):
                    tail = _shifted_tail(data, f"s{m - 1}", shift)
                    yield base.model_copy(update={"x_power": tail})


def _nebelung_grid(max_n: int) -> Iterator[FamilyDescriptor]:
    for n in range(5, max_n + 1):
        for m in range(4, n):
            for k, rho in ((0, 0), (1, 1), (1, -1)):
                yield FamilyDescriptor(family="nebelung", p=3, m=m, n=n, k=k, rho=rho)


def _classic2_grid(max_m: int) -> Iterator[FamilyDescriptor]:
    for kind in CLASSIC2_KINDS:
        for m in range(3, max_m + 1):
            yield FamilyDescriptor.model_validate({"family": kind, "p": 2, "m": m})


def _nu_failure(group: PcGroup, descriptor: FamilyDescriptor) -> Optional[str]:
    if descriptor.p != 3 or descriptor.family not in ("coclass1", "nebelung"):
        return None
    if descriptor.family == "coclass1" and descriptor.m < 4:
        return None
    nu = kappa(group).nu
    allowed = (3, 4) if descriptor.family == "coclass1" else (0, 1, 2)
    return None if nu in allowed else f"nu={nu} not in {list(allowed)}"


def _verify_one(descriptor: FamilyDescriptor, budget: Budget) -> Optional[str]:
    """None for a pass or skip, else a failure line."""
    try:
        group = from_descriptor(descriptor, budget=budget)
    except ParameterError:
        logger.debug("skipping inadmissible %s", descriptor)
        return None
    except InconsistentPresentation as exc:
        return f"FAIL {descriptor}: {exc}"
    outcome: VerificationOutcome = verify_closed_forms(group)
    problems = [f"{c.name} expected {c.expected} observed {c.observed}" for c in outcome.failures()]
    nu_problem = _nu_failure(group, descriptor)
    if nu_problem:
        problems.append(nu_problem)
    logger.debug("verified %s: %d problems", descriptor, len(problems))
    return f"FAIL {descriptor}: " + "; ".join(problems) if problems else None


def cmd_verify(args: argparse.Namespace) -> int:
    budget = _budget(args)
    max_m = args.max_m or 7
    families = ("coclass1", "nebelung", "classic2") if args.family == "all" else (args.family,)
    descriptors: List[FamilyDescriptor] = []
    if "coclass1" in families:
        descriptors += list(_coclass1_grid(args.p or 3, max_m, budget))
    if "nebelung" in families:
        descriptors += list(_nebelung_grid(args.max_n or 9))
    if "classic2" in families:
        descriptors += list(_classic2_grid(args.max_m or 8))
    lines = [line for line in (_verify_one(d, budget) for d in descriptors) if line]
    checked, failures = roundtrip_failures()
    lines += [f"FAIL roundtrip kind={kind} m={m} n={n} k={k}" for kind, m, n, k in failures]
    lines.append(
        f"verified {len(descriptors)} groups, {checked} roundtrip points, "
        f"{len(lines)} failures"
    )
    _emit(args, "\n".join(lines))
    return EXIT_FAILURE if len(lines) > 1 else EXIT_OK


# =============================================================================
# tables
# =============================================================================


def cmd_tables(args: argparse.Namespace) -> int:
    ids = [part for part in args.which.split(",") if part.strip()]
    diff = reproduce_tables(ids, strict=args.strict)
    if args.format == "csv":
        header = ("table", "name", "column", "expected", "observed")
        text = _csv_text(header, [[r[c] for c in header] for r in diff.records()])
    elif args.format == "records":
        text = "\n".join(_record_line(r) for r in diff.records()) or f"rows={diff.rows_checked} diffs=0"
    else:
        text = diff.render_text()
    _emit(args, text)
    return EXIT_OK if diff.is_empty else EXIT_FAILURE


# =============================================================================
# Entry point
# =============================================================================


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="metabelian",
        description="Metabelian p-groups, transfer kernels and p-class number theorems",
    )
    parser.add_argument("--version", action="version", version=f"%(prog)s {__version__}")
    subparsers = parser.add_subparsers(dest="command", required=True)

    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--output", help="Write to this path instead of stdout.")
    common.add_argument("--format", choices=FORMATS, default="text")
    common.add_argument(
        "--budget",
        type=int,
        default=DEFAULT_ENUMERATION_BOUND,
        help="Largest subgroup the brute-force oracle may enumerate.",
    )

    group = subparsers.add_parser("group", parents=[common], help="Invariants of one group.")
    group.add_argument("--preset", choices=PRESETS, required=True)
    group.add_argument("--p", type=int)
    group.add_argument("--m", type=int)
    group.add_argument("--n", type=int)
    group.add_argument("--k", type=int, default=0)
    group.add_argument("--rho", type=int, default=0)
    group.add_argument("--coupling", help="Four values in {0,1,2}, e.g. 2,1,0,0.")
    group.add_argument("--miech", help="Coefficients a(m-k)..a(m-1), e.g. 1,0.")
    group.add_argument("--tails", help="x^p and y^p as words, e.g. s4:1/s2:-1.")
    group.set_defaults(handler=cmd_group)

    classify_parser = subparsers.add_parser(
        "classify", parents=[common], help="Invariants from class numbers."
    )
    classify_parser.add_argument("--input", help="Table CSV path or bundled table id.")
    classify_parser.add_argument("--strict", action="store_true")
    classify_parser.add_argument("--p", type=int)
    classify_parser.add_argument("--kind", choices=("complex", "real"))
    classify_parser.add_argument("--u", type=int)
    classify_parser.add_argument("--v", type=int)
    classify_parser.add_argument("--w", type=int)
    classify_parser.add_argument("--type", help="Unit types of L1 and L2, e.g. ad.")
    classify_parser.add_argument("--assume-coclass1", action="store_true")
    classify_parser.set_defaults(handler=cmd_classify)

    verify = subparsers.add_parser("verify", parents=[common], help="Brute-force oracle suite.")
    verify.add_argument(
        "--family", choices=("coclass1", "nebelung", "classic2", "all"), default="all"
    )
    verify.add_argument("--p", type=int)
    verify.add_argument("--max-m", type=int)
    verify.add_argument("--max-n", type=int)
    verify.set_defaults(handler=cmd_verify)

    tables = subparsers.add_parser("tables", parents=[common], help="Reproduce bundled tables.")
    tables.add_argument(
        "--which",
        default="all",
        help=f"Comma-separated ids from {', '.join(TABLE_IDS)}, p2, p3, all.",
    )
    tables.add_argument("--strict", action="store_true")
    tables.set_defaults(handler=cmd_tables)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    logging.basicConfig(
        level=logging.WARNING,
        stream=sys.stderr,
        format="%(levelname)s %(name)s: %(message)s",
    )
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code or 0)
    try:
        return int(args.handler(args))
    except (UsageError, ParseError, SchemaError, ParameterError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InconsistentPresentation, BudgetExceeded, MetabelianError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAILURE


if __name__ == "__main__":
    sys.exit(main())
