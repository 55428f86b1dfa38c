"""The Table model and the TSV wire format.

Cells are raw strings exactly as typed: the TSV reader performs no quoting,
escaping, or type interpretation.  The tab is the sole delimiter and lines
end with a single newline, so ``read_tsv(write_tsv(t))`` is byte-faithful.

Every sheet generated from a template carries a reserved trailing column,
``metadata_schema_id``, whose cells hold the id of the template that produced
it.  ``read_tsv`` surfaces that embedded provenance on ``Table.provenance``.
"""

from __future__ import annotations

from dataclasses import dataclass, replace

from .errors import SheetFormatError, SheetSerializationError

__all__ = [
    "PROVENANCE_COLUMN",
    "CellAddress",
    "Row",
    "Table",
    "read_tsv",
    "write_tsv",
]

PROVENANCE_COLUMN = "metadata_schema_id"


@dataclass(frozen=True, order=True)
class CellAddress:
    """Location of one cell: 1-based data-row ordinal plus column name."""

    row: int
    column: str


@dataclass(frozen=True)
class Row:
    """One data row; ``index`` is the 1-based ordinal, header excluded."""

    index: int
    cells: tuple[str, ...]


@dataclass(frozen=True)
class Table:
    """A parsed spreadsheet: header, raw string cells, embedded provenance.

    Rectangular by construction -- every row has exactly ``len(columns)``
    cells.  Column names may repeat in a raw parse; duplicates are flagged
    downstream by validation.
    """

    columns: tuple[str, ...]
    rows: tuple[Row, ...] = ()
    provenance: str | None = None

    def __post_init__(self) -> None:
        width = len(self.columns)
        previous = 0
        for row in self.rows:
            if len(row.cells) != width:
                raise ValueError(
                    f"row {row.index} has {len(row.cells)} cells, header has {width}"
                )
            if row.index <= previous:
                raise ValueError("row indexes must be >= 1 and strictly increasing")
            previous = row.index

    def column_index(self, column: str) -> int | None:
        """Index of the first occurrence of ``column``, or None."""
        try:
            return self.columns.index(column)
        except ValueError:
            return None

    def cell(self, row: int, column: str) -> str:
        """Value at a 1-based data row and column name (first occurrence)."""
        idx = self.column_index(column)
        if idx is None:
            raise KeyError(column)
        return self.rows[row - 1].cells[idx]

    def with_cell(self, row: int, column: str, value: str) -> "Table":
        """Functional single-cell update (used by repair application)."""
        idx = self.column_index(column)
        if idx is None:
            raise KeyError(column)
        rows = list(self.rows)
        target = rows[row - 1]
        cells = list(target.cells)
        cells[idx] = value
        rows[row - 1] = replace(target, cells=tuple(cells))
        return replace(self, rows=tuple(rows))


def _derive_provenance(columns: tuple[str, ...], rows: tuple[Row, ...]) -> str | None:
    # First non-blank value in the provenance column wins; consistency of the
    # remaining cells is the validator's job (ProvenanceMismatch).
    try:
        idx = columns.index(PROVENANCE_COLUMN)
    except ValueError:
        return None
    for row in rows:
        value = row.cells[idx].strip()
        if value:
            return value
    return None


def read_tsv(data: bytes) -> Table:
    """Parse TSV bytes into a Table.

    The first line is the header; a trailing newline is optional; a UTF-8 BOM
    is tolerated.  Cells are raw: no quoting or escaping is interpreted.

    Raises:
        SheetFormatError: non-UTF-8 input, empty input, or a ragged row
            (reported with its 1-based file line number).
    """
    try:
        text = data.decode("utf-8-sig")
    except UnicodeDecodeError as exc:
        raise SheetFormatError(f"input is not UTF-8: {exc}")
    if text == "":
        raise SheetFormatError("empty input: no header row")

    lines = text.split("\n")
    if lines and lines[-1] == "":
        lines.pop()
    if not lines:
        raise SheetFormatError("empty input: no header row")

    columns = tuple(lines[0].split("\t"))
    width = len(columns)
    rows = []
    for ordinal, line in enumerate(lines[1:], start=1):
        cells = tuple(line.split("\t"))
        if len(cells) != width:
            raise SheetFormatError(
                f"line {ordinal + 1}: expected {width} cells, found {len(cells)}"
            )
        rows.append(Row(index=ordinal, cells=cells))
    rows = tuple(rows)
    return Table(columns=columns, rows=rows, provenance=_derive_provenance(columns, rows))


def write_tsv(table: Table) -> bytes:
    """Serialize a Table to TSV bytes (UTF-8, no BOM, "\\n" line ends).

    Raises:
        SheetSerializationError: a header or cell contains a tab or newline;
            TSV cells must be delimiter-free.
    """
    def check(value: str, where: str) -> str:
        if "\t" in value or "\n" in value:
            raise SheetSerializationError(f"{where} contains a tab or newline: {value!r}")
        return value

    lines = ["\t".join(check(c, "column name") for c in table.columns)]
    for row in table.rows:
        lines.append("\t".join(check(c, f"row {row.index} cell") for c in row.cells))
    return ("\n".join(lines) + "\n").encode("utf-8")
