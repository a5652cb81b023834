"""Labeled text tables with deterministic TSV and aligned-text rendering."""

from __future__ import annotations

from dataclasses import dataclass, field


@dataclass(frozen=True)
class ReportTable:
    """A rectangular table of pre-formatted cells.

    ``marks`` is optional and, when given, has the same shape as ``cells``;
    a non-empty mark is appended to its cell when rendering (used for the
    above/below-world arrows).
    """

    title: str
    columns: tuple[str, ...]
    row_labels: tuple[str, ...]
    cells: tuple[tuple[str, ...], ...]
    footnotes: tuple[str, ...] = ()
    marks: tuple[tuple[str, ...], ...] | None = None
    label_header: str = ""

    def __post_init__(self):
        object.__setattr__(self, "columns", tuple(self.columns))
        object.__setattr__(self, "row_labels", tuple(self.row_labels))
        object.__setattr__(self, "cells", tuple(tuple(r) for r in self.cells))
        object.__setattr__(self, "footnotes", tuple(self.footnotes))
        if len(self.cells) != len(self.row_labels):
            raise ValueError("one row label per row required")
        for r in self.cells:
            if len(r) != len(self.columns):
                raise ValueError(f"row has {len(r)} cells, table has {len(self.columns)} columns")
        if self.marks is not None:
            marks = tuple(tuple(r) for r in self.marks)
            if [len(r) for r in marks] != [len(r) for r in self.cells]:
                raise ValueError("marks must match cells in shape")
            object.__setattr__(self, "marks", marks)

    def cell(self, row: str, column: str) -> str:
        return self.cells[self.row_labels.index(row)][self.columns.index(column)]

    def column(self, column: str) -> list[str]:
        j = self.columns.index(column)
        return [r[j] for r in self.cells]

    def _display_rows(self) -> list[list[str]]:
        rows = []
        for i, label in enumerate(self.row_labels):
            cells = list(self.cells[i])
            if self.marks is not None:
                cells = [c + m for c, m in zip(cells, self.marks[i])]
            rows.append([label, *cells])
        return rows

    def to_tsv(self) -> str:
        lines = ["\t".join([self.label_header, *self.columns])]
        lines += ["\t".join(r) for r in self._display_rows()]
        return "\n".join(lines) + "\n"

    def to_text(self) -> str:
        table = [[self.label_header, *self.columns], *self._display_rows()]
        widths = [max(len(r[j]) for r in table) for j in range(len(table[0]))]
        out = [self.title, "=" * len(self.title)] if self.title else []
        for i, r in enumerate(table):
            first = r[0].ljust(widths[0])
            rest = [c.rjust(w) for c, w in zip(r[1:], widths[1:])]
            out.append("  ".join([first, *rest]).rstrip())
            if i == 0:
                out.append("  ".join("-" * w for w in widths))
        out += [f"* {note}" for note in self.footnotes]
        return "\n".join(out) + "\n"
