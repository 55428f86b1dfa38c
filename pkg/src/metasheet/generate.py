"""Blank spreadsheet generation and human-readable template rendering.

Generated sheets are what users download, fill in, and submit.  The header
is the template's field names in order plus the reserved trailing
``metadata_schema_id`` column; every pre-allocated data row is empty except
for that provenance cell, which carries the template id.  Workbook output
additionally puts a dropdown of permissible labels on controlled columns.
"""

from __future__ import annotations

from .sheets import PROVENANCE_COLUMN, Row, Table, write_tsv
from .templates import Datatype, Template
from .terminology import TerminologyClient, resolve_value_set
from .workbook import write_workbook

__all__ = ["blank_table", "generate_blank", "render_spec"]

# Workbook sheets come with filled-in provenance rows so the dropdowns have
# cells to live on; TSV defaults to header-only.
DEFAULT_ROWS = {"tsv": 0, "xlsx": 20}


def blank_table(template: Template, data_rows: int) -> Table:
    """The generated grid as a Table value."""
    columns = template.field_names + (PROVENANCE_COLUMN,)
    blanks = ("",) * len(template.fields)
    rows = tuple(
        Row(index=i, cells=blanks + (template.id,))
        for i in range(1, data_rows + 1)
    )
    return Table(
        columns=columns,
        rows=rows,
        provenance=template.id if data_rows else None,
    )


def generate_blank(
    template: Template,
    format: str = "tsv",
    data_rows: int | None = None,
    terminology: TerminologyClient | None = None,
) -> bytes:
    """Generate a blank, provenance-bearing spreadsheet for a template.

    ``format`` is "tsv" or "xlsx".  ``data_rows`` defaults per format (0 for
    TSV, 20 for workbooks).  Terminology-bound value sets need a client;
    resolution failures propagate.
    """
    if format not in DEFAULT_ROWS:
        raise ValueError(f"format must be 'tsv' or 'xlsx', got {format!r}")
    if data_rows is None:
        data_rows = DEFAULT_ROWS[format]
    if data_rows < 0:
        raise ValueError("data_rows must be >= 0")

    table = blank_table(template, data_rows)
    if format == "tsv":
        return write_tsv(table)

    dropdowns = {}
    for spec in template.fields:
        if spec.datatype is Datatype.CONTROLLED:
            resolved = resolve_value_set(spec.value_set, terminology)
            dropdowns[spec.name] = list(resolved.labels)
    # Workbook provenance also rides in the dedicated worksheet, so a
    # zero-row workbook still knows its template.
    table = Table(columns=table.columns, rows=table.rows, provenance=template.id)
    return write_workbook(table, dropdowns=dropdowns)


def _field_lines(template: Template) -> list[str]:
    lines = []
    for spec in template.fields:
        requiredness = "required" if spec.required else "optional"
        lines.append(f"### {spec.name}")
        lines.append("")
        lines.append(f"- datatype: {spec.datatype.value}")
        lines.append(f"- {requiredness}")
        if spec.range is not None:
            lines.append(f"- range: {spec.range[0]} to {spec.range[1]} (inclusive)")
        if spec.pattern is not None:
            lines.append(f"- pattern: `{spec.pattern}`")
        if spec.value_set is not None:
            if spec.value_set.kind == "inline":
                lines.append("- permissible values: " + ", ".join(spec.value_set.labels))
            else:
                lines.append(
                    f"- permissible values: terminology source "
                    f"{spec.value_set.source_id}/{spec.value_set.branch_id}"
                )
        if spec.description:
            lines.append(f"- description: {spec.description}")
        if spec.example:
            lines.append(f"- example: {spec.example}")
        lines.append("")
    return lines


def render_spec(template: Template) -> bytes:
    """Deterministic Markdown rendering of a template specification."""
    lines = [
        f"# {template.name}",
        "",
        f"Template `{template.id}`, version {template.version}.",
        "",
        f"Sheets generated from this template carry a reserved trailing "
        f"`{PROVENANCE_COLUMN}` column holding the template id.",
        "",
        "## Fields",
        "",
    ]
    lines.extend(_field_lines(template))
    return ("\n".join(lines).rstrip("\n") + "\n").encode("utf-8")
