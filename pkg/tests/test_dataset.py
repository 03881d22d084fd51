from __future__ import annotations

import pytest

from metabelian._exceptions import ParseError, SchemaError
from metabelian.dataset import (
    FREQUENCY_TOTALS,
    HEADER,
    bundled_rows,
    diff_row,
    load_csv,
    parse_csv,
    parse_group_label,
    reproduce_tables,
    resolve_ids,
    serialize_csv,
)


def _by_name(table_id: str, name: str):
    return next(row for row in bundled_rows() if row.table_id == table_id and row.name == name)


def test_bundled_tables_are_complete() -> None:
    counts = {}
    for row in bundled_rows():
        counts[row.table_id] = counts.get(row.table_id, 0) + 1
    assert counts == {"2": 7, "3": 33, "4": 12, "5": 7, "6": 1, "7": 7, "8": 5, "9": 6}


def test_bundled_row_fields() -> None:
    d10 = _by_name("3", "D.10")
    assert d10.discriminant == -4027
    assert d10.frequency == 667
    assert d10.kappa == "(2241)"
    assert d10.clF1.order == 27

    a1 = _by_name("2", "a.1")
    assert (a1.discriminant, a1.frequency) == (62501, 147)
    assert a1.types == ("alpha", "alpha")
    assert a1.expected_e is None

    q8 = _by_name("9", "Q.5")
    assert q8.group_label.startswith("Q(8)")


def test_reproduce_all_tables() -> None:
    report = reproduce_tables(("all",))
    assert report.is_empty, report.render_text()
    assert report.rows_checked == len(bundled_rows())
    for table_id, total in FREQUENCY_TOTALS.items():
        assert report.totals[table_id] == total


def test_reproduce_flags_a_tampered_row() -> None:
    row = _by_name("3", "G.16").model_copy(update={"expected_m": 6})
    diffs = diff_row(row)
    assert [(d.column, d.expected, d.observed) for d in diffs] == [("m", "6", "7")]

    report = reproduce_tables(("3",), rows=[row])
    assert report.rows_checked == 1
    assert len(report.diffs) == 1
    assert "expected 6 observed 7" in report.render_text()


@pytest.mark.parametrize(
    ("label", "expected"),
    [
        ("Q(8)≃G^(3)_0(0,1)", ("quaternion", 8)),
        ("S(256)≃G^(8)_0(1,0)", ("semidihedral", 256)),
        ("D(16)≃G^(4)_0(0,0)", ("dihedral", 16)),
        ("C(2)×C(2)", ("abelian", 4)),
        ("G^(3)_0(0,1)", None),
        (None, None),
    ],
)
def test_parse_group_label(label, expected) -> None:
    assert parse_group_label(label) == expected


def test_reproduce_flags_a_wrong_family_letter() -> None:
    row = _by_name("9", "Q.5").model_copy(update={"group_label": "S(8)≃G^(3)_0(1,0)"})
    diffs = diff_row(row)
    assert [(d.column, d.expected, d.observed) for d in diffs] == [
        ("family", "semidihedral", "dihedral|quaternion")
    ]


def test_reproduce_flags_a_wrong_label_order() -> None:
    row = _by_name("9", "Q.6").model_copy(update={"group_label": "Q(32)≃G^(4)_0(0,1)"})
    assert [(d.column, d.expected, d.observed) for d in diff_row(row)] == [("order", "32", "16")]

    abelian = _by_name("6", "a.1").model_copy(update={"group_label": "D(8)"})
    columns = [d.column for d in diff_row(abelian)]
    assert columns == ["family", "order"]


def test_strict_reproduction_reports_missing_w() -> None:
    row = _by_name("2", "a.1").model_copy(update={"w": None})
    assert diff_row(row)[0].observed.startswith("ambiguous")
    assert diff_row(row, strict=True)[0].observed.startswith("MissingW")


def test_resolve_ids() -> None:
    assert resolve_ids(["table3"]) == ["3"]
    assert resolve_ids(["p3", "3"]) == ["2", "3", "4", "5"]
    assert resolve_ids(["all"]) == ["2", "3", "4", "5", "6", "7", "8", "9"]
    with pytest.raises(ValueError, match="table id must be one of"):
        resolve_ids(["table10"])


def test_load_csv_from_bundled_id_and_path(table5_csv) -> None:
    rows = load_csv("table5")
    assert [row.name for row in rows][:2] == ["b.10", "c.18"]

    reloaded = load_csv(table5_csv)
    assert reloaded == rows
    assert reproduce_tables(("5",), rows=reloaded).is_empty


def test_serialize_keeps_column_order() -> None:
    text = serialize_csv(load_csv("9")[:1])
    header, first = text.splitlines()[:2]
    assert header == ",".join(HEADER)
    assert first.startswith("9,2,complex,-120,Q.5,,2,2,2,-,-,2,2,3,3,0,,")


def test_parse_errors_carry_location() -> None:
    header = ",".join(HEADER)
    with pytest.raises(ParseError) as excinfo:
        parse_csv(header + "\n2,3,real,x,a.1,,2,1,4,a,a,,,,,,,\n")
    assert excinfo.value.location == (2, "disc")

    with pytest.raises(ParseError) as excinfo:
        parse_csv(header + "\n\n2,3,real\n")
    assert excinfo.value.line == 3

    with pytest.raises(ParseError, match="unit type"):
        parse_csv(header + "\n2,3,real,,,,2,1,4,b,a,,,,,,,\n")


def test_schema_errors() -> None:
    with pytest.raises(SchemaError, match="empty CSV"):
        parse_csv("")
    with pytest.raises(SchemaError, match="unexpected header"):
        parse_csv("table,p,kind\n2,3,real\n")
    with pytest.raises(SchemaError, match="invalid row"):
        # u < v
        parse_csv(",".join(HEADER) + "\n2,3,real,,,,1,2,,a,a,,,,,,,\n")
