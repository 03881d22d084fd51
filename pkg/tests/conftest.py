from __future__ import annotations

import sys
from pathlib import Path

import pytest

ROOT = Path(__file__).resolve().parents[1]
SRC = ROOT / "src"
if str(SRC) not in sys.path:
    sys.path.insert(0, str(SRC))


@pytest.fixture
def table5_csv(tmp_path: Path) -> Path:
    """Bundled table 5 written out as a standalone CSV file."""
    from metabelian.dataset import load_csv, serialize_csv

    path = tmp_path / "table5.csv"
    path.write_text(serialize_csv(load_csv("5")), encoding="utf-8")
    return path
