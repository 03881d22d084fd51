from __future__ import annotations

import pytest

from metabelian._base import DEFAULT_BUDGET
from metabelian.cli import EXIT_FAILURE, EXIT_OK, EXIT_USAGE, _coclass1_grid, _verify_one, main
from metabelian.models.groups import FamilyDescriptor


def test_tables_reproduce_cleanly(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["tables", "--which", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("tables=2 rows=7 diffs=0")
    assert "table 2: frequency total 2303" in out


def test_tables_csv_to_file(tmp_path) -> None:
    target = tmp_path / "diff.csv"
    assert main(["tables", "--which", "p2", "--format", "csv", "--output", str(target)]) == EXIT_OK
    assert target.read_text(encoding="utf-8") == "table,name,column,expected,observed\n"


def test_tables_unknown_id(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["tables", "--which", "10"]) == EXIT_USAGE
    assert "table id must be one of" in capsys.readouterr().err


def test_classify_single_record(capsys: pytest.CaptureFixture[str]) -> None:
    code = main(["classify", "--kind", "complex", "--u", "2", "--v", "1", "--w", "6"])
    assert code == EXIT_OK
    assert capsys.readouterr().out.strip() == "1: coclass-ge-2 m=7 n=8 e=3 k=1"


def test_classify_missing_w(capsys: pytest.CaptureFixture[str]) -> None:
    argv = ["classify", "--kind", "complex", "--u", "2", "--v", "1", "--format", "records"]
    assert main(argv) == EXIT_OK
    out = capsys.readouterr().out
    assert "branch=ambiguous" in out
    assert "m=6,n=7,k=0|m=7,n=8,k=1" in out

    assert main(argv + ["--strict"]) == EXIT_FAILURE
    assert "MissingW" in capsys.readouterr().out


def test_classify_bundled_table(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["classify", "--input", "5", "--format", "csv"]) == EXIT_OK
    lines = capsys.readouterr().out.splitlines()
    assert lines[0] == "table,name,branch,m,n,e,k,flags"
    assert lines[1] == "5,b.10,coclass-ge-2,6,8,4,1,"
    assert len(lines) == 8


def test_classify_csv_file_matches_bundled_id(table5_csv, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["classify", "--input", "5"]) == EXIT_OK
    bundled = capsys.readouterr().out
    assert main(["classify", "--input", str(table5_csv)]) == EXIT_OK
    assert capsys.readouterr().out == bundled


@pytest.mark.parametrize(
    "argv",
    [
        ["classify", "--kind", "real"],
        ["classify", "--kind", "real", "--u", "2", "--type", "xy"],
        ["group", "--preset", "cyclic"],
        ["group", "--preset", "nebelung", "--m", "4"],
        ["group", "--preset", "coclass1", "--p", "3", "--m", "4", "--k", "3"],
        ["frobnicate"],
    ],
)
def test_usage_errors(argv: list) -> None:
    assert main(argv) == EXIT_USAGE


def test_group_dihedral(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["group", "--preset", "dihedral", "--m", "4", "--format", "records"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "p=2 n=4 m=4" in out
    assert "ab1=8 " in out


def test_group_abelian_note(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["group", "--preset", "coclass1", "--p", "3", "--m", "2"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "note: abelian, s/e/k are undefined" in out
    assert "types: a.1" in out


def test_group_coclass1_text(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["group", "--preset", "coclass1", "--p", "3", "--m", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert out.startswith("group: family=coclass1 p=3 m=4 k=0")
    assert "ab1: 3-3-3" in out


def test_verify_classic2(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "--family", "classic2", "--max-m", "4"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.startswith("verified 6 groups")


@pytest.mark.parametrize("p", [2, 3, 5])
def test_coclass1_grid_varies_the_central_tail(p: int) -> None:
    descriptors = list(_coclass1_grid(p, 5, DEFAULT_BUDGET))
    tails = [d for d in descriptors if d.x_power is not None]
    assert tails
    assert all(f"s{d.m - 1}" in d.x_power for d in tails)
    assert {d.m for d in tails} == {3, 4, 5}


def test_inconsistent_tail_is_a_failure() -> None:
    # x^3 = s2 is not fixed by x
    descriptor = FamilyDescriptor.from_text("family=coclass1 p=3 m=4 k=0 x_power=s2:1")
    line = _verify_one(descriptor, DEFAULT_BUDGET)
    assert line is not None
    assert line.startswith("FAIL family=coclass1 p=3 m=4")


@pytest.mark.slow
@pytest.mark.parametrize(("p", "groups"), [(2, 11), (3, 15), (5, 15)])
def test_verify_coclass1_grid(p: int, groups: int, capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "--family", "coclass1", "--p", str(p), "--max-m", "5"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.startswith(f"verified {groups} groups")


@pytest.mark.slow
def test_verify_nebelung_grid(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "--family", "nebelung", "--max-n", "9"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.startswith("verified 45 groups")


@pytest.mark.slow
def test_verify_classic2_grid(capsys: pytest.CaptureFixture[str]) -> None:
    assert main(["verify", "--family", "classic2", "--max-m", "8"]) == EXIT_OK
    out = capsys.readouterr().out
    assert "FAIL" not in out
    assert out.startswith("verified 18 groups")
