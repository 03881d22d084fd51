"""Bundled table rows and regression diffs."""

from __future__ import annotations

from typing import Dict, Iterator, List, Optional

from pydantic import Field

from .common import RecordModel
from .fields import FieldRecord


class TableRow(FieldRecord):
    """A printed table line: measurements plus the expected invariants."""

    table_id: str
    expected_m: Optional[int] = None
    expected_n: Optional[int] = None
    expected_e: Optional[int] = None
    expected_k: Optional[int] = None
    frequency: Optional[int] = None
    group_label: Optional[str] = None


class DiffEntry(RecordModel):
    table_id: str
    name: str
    column: str
    expected: str
    observed: str


class DiffReport(RecordModel):
    """Outcome of reproducing one or more tables."""

    tables: List[str] = Field(default_factory=list)
    rows_checked: int = 0
    totals: Dict[str, int] = Field(default_factory=dict)
    diffs: List[DiffEntry] = Field(default_factory=list)

    @property
    def is_empty(self) -> bool:
        return not self.diffs

    def records(self) -> Iterator[Dict[str, str]]:
        for diff in self.diffs:
            yield {
                "table": diff.table_id,
                "name": diff.name,
                "column": diff.column,
                "expected": diff.expected,
                "observed": diff.observed,
            }

    def render_text(self) -> str:
        lines = [f"tables={','.join(self.tables)} rows={self.rows_checked} diffs={len(self.diffs)}"]
        for table_id, total in sorted(self.totals.items()):
            lines.append(f"table {table_id}: frequency total {total}")
        for diff in self.diffs:
            lines.append(
                f"table {diff.table_id} {diff.name}: {diff.column} "
                f"expected {diff.expected} observed {diff.observed}"
            )
        return "\n".join(lines)
