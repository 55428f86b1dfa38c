"""Shared test machinery: random fixtures and independent re-checks.

The oracle functions here are deliberately written straight from the cell
rules, in a different style from the engine, so the two sides of each
equivalence test stay independent.
"""

from __future__ import annotations

import random
import re
from datetime import date

from metasheet import (
    PROVENANCE_COLUMN,
    Datatype,
    FieldSpec,
    Row,
    Table,
    Template,
    ValueSet,
    ValueSetBinding,
)

# ---------------------------------------------------------------------------
# Independent per-cell oracle


def _oracle_is_integer(raw: str) -> bool:
    body = raw[1:] if raw[:1] in ("+", "-") else raw
    return body.isascii() and body.isdigit()


def _oracle_is_decimal(raw: str) -> bool:
    body = raw[1:] if raw[:1] in ("+", "-") else raw
    head, dot, tail = body.partition(".")
    if not (head.isascii() and head.isdigit()):
        return False
    if dot and not (tail.isascii() and tail.isdigit()):
        return False
    return True


def _oracle_is_date(raw: str) -> bool:
    parts = raw.split("-")
    if len(parts) != 3 or [len(p) for p in parts] != [4, 2, 2]:
        return False
    if not all(p.isascii() and p.isdigit() for p in parts):
        return False
    try:
        date(int(parts[0]), int(parts[1]), int(parts[2]))
    except ValueError:
        return False
    return True


def oracle_cell_kind(spec: FieldSpec, raw: str, labels: tuple[str, ...]) -> str | None:
    if raw.strip() == "":
        return "missing_required" if spec.required else None
    datatype = spec.datatype.value
    if datatype == "integer" and not _oracle_is_integer(raw):
        return "type_mismatch"
    if datatype == "decimal" and not _oracle_is_decimal(raw):
        return "type_mismatch"
    if datatype == "boolean" and raw not in ("true", "false"):
        return "type_mismatch"
    if datatype == "date" and not _oracle_is_date(raw):
        return "type_mismatch"
    if spec.range is not None and not (spec.range[0] <= float(raw) <= spec.range[1]):
        return "out_of_range"
    if spec.pattern is not None and re.fullmatch(spec.pattern, raw) is None:
        return "pattern_mismatch"
    if datatype == "controlled" and raw not in labels:
        return "not_in_value_set"
    return None


def oracle_table_issues(
    template: Template, table: Table, sets: dict[str, ValueSet]
) -> set[tuple[str, int | None, str]]:
    """Expected issue set as (kind, row, column) triples."""
    expected: set[tuple[str, int | None, str]] = set()
    for spec in template.fields:
        if spec.name not in table.columns:
            expected.add(("missing_column", None, spec.name))
    seen: list[str] = []
    for column in table.columns:
        if column in seen or (
            template.lookup_field(column) is None and column != PROVENANCE_COLUMN
        ):
            expected.add(("unknown_column", None, column))
        seen.append(column)

    present = [spec for spec in template.fields if spec.name in table.columns]
    for row in table.rows:
        values = {spec.name: row.cells[table.columns.index(spec.name)] for spec in present}
        if any(v.strip() != "" for v in values.values()):
            for spec in present:
                labels = sets[spec.name].labels if spec.name in sets else ()
                kind = oracle_cell_kind(spec, values[spec.name], labels)
                if kind is not None:
                    expected.add((kind, row.index, spec.name))
        if PROVENANCE_COLUMN in table.columns:
            cell = row.cells[table.columns.index(PROVENANCE_COLUMN)]
            if cell.strip() != "" and cell != template.id:
                expected.add(("provenance_mismatch", row.index, PROVENANCE_COLUMN))
    return expected


# ---------------------------------------------------------------------------
# Random fixture generation

LABEL_POOL = [
    ["Year", "Month", "Day"],
    ["Fresh", "Frozen", "Fixed"],
    ["Left", "Right"],
    ["Blood", "Tissue", "Plasma", "Serum"],
    ["OnlyOption"],
]

PATTERN_POOL = ["[A-Z]{2}[0-9]{3}", "[a-z]+", "S-[0-9]+"]


def random_template(rng: random.Random, *, template_id: str | None = None) -> Template:
    n_fields = rng.randint(2, 6)
    fields = []
    for i in range(n_fields):
        datatype = rng.choice(list(Datatype))
        name = f"col{i}_{datatype.value}"
        required = rng.random() < 0.5
        value_set = None
        value_range = None
        pattern = None
        if datatype is Datatype.CONTROLLED:
            value_set = ValueSetBinding(kind="inline", labels=tuple(rng.choice(LABEL_POOL)))
        elif datatype in (Datatype.INTEGER, Datatype.DECIMAL) and rng.random() < 0.5:
            low = rng.randint(-50, 40)
            value_range = (low, low + rng.randint(0, 60))
        elif datatype is Datatype.TEXT and rng.random() < 0.3:
            pattern = rng.choice(PATTERN_POOL)
        fields.append(FieldSpec(
            name=name, datatype=datatype, required=required,
            value_set=value_set, range=value_range, pattern=pattern,
        ))
    return Template(
        id=template_id or f"tmpl-rand-{rng.randrange(10**6)}",
        name="Random",
        version="1.0.0",
        fields=tuple(fields),
    )


def _valid_value(rng: random.Random, spec: FieldSpec) -> str:
    if spec.datatype is Datatype.CONTROLLED:
        return rng.choice(spec.value_set.labels)
    if spec.datatype is Datatype.INTEGER:
        if spec.range:
            return str(rng.randint(int(spec.range[0]), int(spec.range[1])))
        return str(rng.randint(-1000, 1000))
    if spec.datatype is Datatype.DECIMAL:
        if spec.range:
            lo, hi = spec.range
            return f"{rng.randint(int(lo), int(hi) - 1)}.5" if hi - lo >= 1 else str(int(lo))
        return f"{rng.randint(-99, 99)}.{rng.randint(0, 99)}"
    if spec.datatype is Datatype.BOOLEAN:
        return rng.choice(["true", "false"])
    if spec.datatype is Datatype.DATE:
        return f"20{rng.randint(10, 29)}-{rng.randint(1, 12):02d}-{rng.randint(1, 28):02d}"
    if spec.pattern == "[A-Z]{2}[0-9]{3}":
        return f"AB{rng.randint(100, 999)}"
    if spec.pattern == "[a-z]+":
        return "".join(rng.choice("abcdef") for _ in range(4))
    if spec.pattern == "S-[0-9]+":
        return f"S-{rng.randint(0, 999)}"
    return f"text{rng.randrange(100)}"


def _invalid_value(rng: random.Random, spec: FieldSpec) -> str | None:
    """A value guaranteed to fail some check for this spec, or None."""
    if spec.datatype is Datatype.CONTROLLED:
        return rng.choice(["days", "WRONG", rng.choice(spec.value_set.labels).upper() + "x"])
    if spec.datatype is Datatype.INTEGER:
        candidates = ['"42"', "4.5x", "abc"]
        if spec.range:
            candidates.append(str(int(spec.range[1]) + 7))
        return rng.choice(candidates)
    if spec.datatype is Datatype.DECIMAL:
        candidates = ["'3.5'", "1.2.3", ".5"]
        if spec.range:
            candidates.append(str(int(spec.range[1]) + 11))
        return rng.choice(candidates)
    if spec.datatype is Datatype.BOOLEAN:
        return rng.choice(["yes", "True", "0", "maybe"])
    if spec.datatype is Datatype.DATE:
        return rng.choice(["2023-02-30", "03/04/2023", "2023-1-5"])
    if spec.pattern:
        return "!!definitely not matching!!"
    return None  # unconstrained optional text: nothing can fail


def random_table(
    rng: random.Random,
    template: Template,
    *,
    rows: int = 6,
    error_rate: float = 0.3,
    mutate_header: bool = False,
) -> Table:
    columns = list(template.field_names)
    if mutate_header and rng.random() < 0.3 and len(columns) > 1:
        columns.pop(rng.randrange(len(columns)))
    if mutate_header and rng.random() < 0.3:
        columns.append("surprise_column")
    columns.append(PROVENANCE_COLUMN)

    table_rows = []
    for index in range(1, rows + 1):
        cells = []
        for column in columns[:-1]:
            spec = template.lookup_field(column)
            if spec is None:
                cells.append("noise")
                continue
            roll = rng.random()
            if roll < error_rate:
                bad = _invalid_value(rng, spec)
                if bad is None and spec.required:
                    cells.append("")
                else:
                    cells.append(bad if bad is not None else _valid_value(rng, spec))
            elif roll < error_rate + 0.1 and spec.required:
                cells.append("")
            else:
                cells.append(_valid_value(rng, spec))
        provenance = template.id if rng.random() > 0.05 else "tmpl-other"
        cells.append(provenance)
        table_rows.append(Row(index=index, cells=tuple(cells)))
    return Table(
        columns=tuple(columns),
        rows=tuple(table_rows),
        provenance=template.id,
    )


def inline_sets(template: Template) -> dict[str, ValueSet]:
    return {
        spec.name: ValueSet(id="inline", labels=spec.value_set.labels)
        for spec in template.fields
        if spec.datatype is Datatype.CONTROLLED
    }
