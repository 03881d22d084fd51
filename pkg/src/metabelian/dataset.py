"""Bundled class-number tables, CSV ingestion and the regression harness."""

from __future__ import annotations

import csv
import io
import logging
import re
from functools import lru_cache
from importlib import resources
from pathlib import Path
from typing import Dict, Iterable, List, Optional, Sequence, Tuple, Union

from pydantic import ValidationError

from ._exceptions import ClassificationError, ParseError, SchemaError
from .arithmetic import classify, consistency_check, predict_clF1
from .models.common import AbelianGroup
from .models.fields import AmbiguousResult, UnitType
from .models.tables import DiffEntry, DiffReport, TableRow

logger = logging.getLogger(__name__)

_LABEL_FAMILIES = {"C": "abelian", "D": "dihedral", "Q": "quaternion", "S": "semidihedral"}
_LABEL_FACTOR = re.compile(r"([CDQS])\((\d+)\)")

HEADER: Tuple[str, ...] = (
    "table",
    "p",
    "kind",
    "disc",
    "name",
    "kappa",
    "u",
    "v",
    "w",
    "t1",
    "t2",
    "clF1",
    "exp_e",
    "exp_m",
    "exp_n",
    "exp_k",
    "freq",
    "label",
)
TABLE_IDS: Tuple[str, ...] = ("2", "3", "4", "5", "6", "7", "8", "9")
TABLE_GROUPS: Dict[str, Tuple[str, ...]] = {
    "p3": ("2", "3", "4", "5"),
    "p2": ("6", "7", "8", "9"),
    "all": TABLE_IDS,
}
FREQUENCY_TOTALS: Dict[str, int] = {"2": 2303, "3": 2020, "4": 206, "5": 67}

_TYPE_CODES: Dict[str, UnitType] = {"a": "alpha", "d": "delta", "-": "unknown", "": "unknown"}
_TYPE_LETTERS: Dict[str, str] = {"alpha": "a", "delta": "d", "unknown": "-"}

_INT_COLUMNS: Dict[str, str] = {
    "p": "p",
    "disc": "discriminant",
    "u": "u",
    "v": "v",
    "w": "w",
    "exp_e": "expected_e",
    "exp_m": "expected_m",
    "exp_n": "expected_n",
    "exp_k": "expected_k",
    "freq": "frequency",
}

Source = Union[str, Path]


# =============================================================================
# Parsing
# =============================================================================


def _cell_int(raw: str, line: int, column: str) -> Optional[int]:
    text = raw.strip()
    if not text:
        return None
    try:
        return int(text)
    except ValueError:
        raise ParseError(f"expected an integer, got {text!r}", line=line, column=column) from None


def _parse_row(cells: Dict[str, str], line: int) -> TableRow:
    fields: Dict[str, object] = {"table_id": cells["table"].strip()}
    for column, attribute in _INT_COLUMNS.items():
        value = _cell_int(cells[column], line, column)
        if value is not None:
            fields[attribute] = value
    kind = cells["kind"].strip()
    if kind not in ("complex", "real"):
        raise ParseError("kind must be one of: complex, real", line=line, column="kind")
    fields["kind"] = kind
    for column in ("t1", "t2"):
        code = cells[column].strip()
        if code not in _TYPE_CODES:
            raise ParseError("unit type must be one of: a, d, -", line=line, column=column)
        fields[column] = _TYPE_CODES[code]
    if cells["clF1"].strip():
        try:
            fields["clF1"] = AbelianGroup.from_shape(cells["clF1"])
        except ValueError as exc:
            raise ParseError(str(exc), line=line, column="clF1") from None
    for column, attribute in (("name", "name"), ("kappa", "kappa"), ("label", "group_label")):
        if cells[column].strip():
            fields[attribute] = cells[column].strip()
    if "p" not in fields or "u" not in fields:
        raise SchemaError("p and u are required", line=line)
    try:
        return TableRow.model_validate(fields)
    except ValidationError as exc:
        raise SchemaError(f"invalid row: {exc.errors()[0]['msg']}", line=line) from None


def parse_csv(text: str) -> List[TableRow]:
    """Rows of a table CSV; line numbers in errors count the header as line 1."""
    reader = csv.reader(io.StringIO(text))
    try:
        header = next(reader)
    except StopIteration:
        raise SchemaError("empty CSV") from None
    if tuple(h.strip() for h in header) != HEADER:
        raise SchemaError("unexpected header", expected=",".join(HEADER), got=",".join(header))
    rows = []
    for line, values in enumerate(reader, start=2):
        if not any(v.strip() for v in values):
            continue
        if len(values) != len(HEADER):
            raise ParseError(
                f"expected {len(HEADER)} columns, got {len(values)}", line=line
            )
        rows.append(_parse_row(dict(zip(HEADER, values)), line))
    return rows


@lru_cache(maxsize=1)
def _bundled() -> Tuple[TableRow, ...]:
    text = resources.files("metabelian").joinpath("data/tables.csv").read_text(encoding="utf-8")
    return tuple(parse_csv(text))


def bundled_rows() -> Tuple[TableRow, ...]:
    """Every row of the bundled tables."""
    return _bundled()


def resolve_ids(ids: Iterable[str]) -> List[str]:
    """Normalise ``"table3"``, ``"3"``, ``"p2"`` and ``"all"`` into bundled table ids."""
    out: List[str] = []
    for raw in ids:
        key = raw.strip().lower()
        key = key[len("table"):] if key.startswith("table") else key
        selected = TABLE_GROUPS.get(key, (key,))
        for table_id in selected:
            if table_id not in TABLE_IDS:
                raise ValueError(f"table id must be one of: {', '.join(TABLE_IDS)}, p2, p3, all")
            if table_id not in out:
                out.append(table_id)
    return out


def load_csv(source: Source) -> List[TableRow]:
    """Rows from a CSV path or from a bundled table id."""
    if isinstance(source, str) and not Path(source).exists():
        wanted = set(resolve_ids([source]))
        return [row for row in bundled_rows() if row.table_id in wanted]
    text = Path(source).read_text(encoding="utf-8")
    rows = parse_csv(text)
    logger.info("loaded %d rows from %s", len(rows), source)
    return rows


# =============================================================================
# Serialization
# =============================================================================


def _opt(value: Optional[object]) -> str:
    return "" if value is None else str(value)


def row_cells(row: TableRow) -> List[str]:
    return [
        row.table_id,
        str(row.p),
        row.kind,
        _opt(row.discriminant),
        _opt(row.name),
        _opt(row.kappa),
        str(row.u),
        _opt(row.v),
        _opt(row.w),
        _TYPE_LETTERS[row.t1],
        _TYPE_LETTERS[row.t2],
        row.clF1.shape() if row.clF1 is not None else "",
        _opt(row.expected_e),
        _opt(row.expected_m),
        _opt(row.expected_n),
        _opt(row.expected_k),
        _opt(row.frequency),
        _opt(row.group_label),
    ]


def serialize_csv(rows: Sequence[TableRow]) -> str:
    buffer = io.StringIO()
    writer = csv.writer(buffer, lineterminator="\n")
    writer.writerow(HEADER)
    for row in rows:
        writer.writerow(row_cells(row))
    return buffer.getvalue()


# =============================================================================
# Regression harness
# =============================================================================


def parse_group_label(label: Optional[str]) -> Optional[Tuple[str, int]]:
    """Family and order named by a 2-group label such as ``Q(8)≃G^(3)_0(0,1)``.

    Direct products of cyclic factors read as abelian. None when the label names
    no recognised family.
    """
    if not label:
        return None
    head = label.split("≃", 1)[0].strip()
    factors = _LABEL_FACTOR.findall(head)
    if not factors or not head.startswith(factors[0][0]):
        return None
    letter = factors[0][0]
    if letter == "C":
        order = 1
        for _, size in factors:
            order *= int(size)
        return _LABEL_FAMILIES[letter], order
    return _LABEL_FAMILIES[letter], int(factors[0][1])


def diff_row(row: TableRow, *, strict: bool = False) -> List[DiffEntry]:
    """Differences between a printed row and what the classifier derives from it."""
    name = row.name or f"D={row.discriminant}"

    def entry(column: str, expected: object, observed: object) -> DiffEntry:
        return DiffEntry(
            table_id=row.table_id,
            name=name,
            column=column,
            expected=str(expected),
            observed=str(observed),
        )

    try:
        result = classify(row, strict=strict)
    except ClassificationError as exc:
        return [entry("classify", "result", f"{type(exc).__name__}: {exc}")]
    if isinstance(result, AmbiguousResult):
        return [entry("classify", "result", f"ambiguous ({len(result.candidates)} candidates)")]

    diffs = []
    for column, expected, observed in (
        ("m", row.expected_m, result.m),
        ("n", row.expected_n, result.n),
        ("e", row.expected_e, result.e),
        ("k", row.expected_k, result.k),
    ):
        if expected is not None and expected != observed:
            diffs.append(entry(column, expected, observed))
    if row.clF1 is not None and row.clF1.order != predict_clF1(result):
        diffs.append(entry("clF1", row.clF1.order, predict_clF1(result)))
    named = parse_group_label(row.group_label) if result.p == 2 else None
    if named is not None:
        family, order = named
        if result.families and family not in result.families:
            diffs.append(entry("family", family, "|".join(result.families)))
        if order != result.p**result.n:
            diffs.append(entry("order", order, result.p**result.n))
    for flag in consistency_check(row, result):
        diffs.append(entry("flags", "", flag))
    return diffs


def reproduce_tables(
    ids: Iterable[str] = ("all",),
    *,
    rows: Optional[Sequence[TableRow]] = None,
    strict: bool = False,
) -> DiffReport:
    """Re-derive every printed invariant of the selected tables.

    Frequency totals are checked for the tables that print one.
    """
    table_ids = resolve_ids(ids)
    source = rows if rows is not None else bundled_rows()
    selected = [row for row in source if row.table_id in table_ids]
    diffs: List[DiffEntry] = []
    totals: Dict[str, int] = {}
    for row in selected:
        diffs.extend(diff_row(row, strict=strict))
        if row.frequency is not None:
            totals[row.table_id] = totals.get(row.table_id, 0) + row.frequency
    for table_id, expected in FREQUENCY_TOTALS.items():
        if table_id in table_ids and rows is None and totals.get(table_id) != expected:
            diffs.append(
                DiffEntry(
                    table_id=table_id,
                    name="total",
                    column="freq",
                    expected=str(expected),
                    observed=str(totals.get(table_id, 0)),
                )
            )
    logger.info("reproduced tables %s: %d rows, %d diffs", table_ids, len(selected), len(diffs))
    return DiffReport(tables=table_ids, rows_checked=len(selected), totals=totals, diffs=diffs)
