"""Ranked repair suggestions and their application.

Suggestions are computed per issue group.  Values outside a controlled
vocabulary get the synonym-expansion and string-distance treatment; numeric
type mismatches get a quote-stripping coercion; boolean mismatches map the
usual yes/no spellings.  Nothing is ever suggested for out-of-range or
pattern failures -- inventing an in-range number would be fabrication.

Applying repairs is a functional update: the input table is never mutated,
conflicting actions fail atomically, and only targeted cells change.
"""

from __future__ import annotations

from dataclasses import dataclass, replace
from enum import Enum
from typing import Any, Iterable, Mapping

from .errors import ConflictingActionsError, UnknownTargetError
from .sheets import CellAddress, Table
from .templates import Datatype, FieldSpec, Template
from .terminology import ValueSet
from .validate import (
    IssueGroup,
    IssueKind,
    Severity,
    ValidationReport,
    parses_as,
)

__all__ = [
    "RepairAction",
    "RepairSuggestion",
    "SuggestionSource",
    "action_from_dict",
    "apply_repairs",
    "attach_suggestions",
    "edit_distance",
    "similarity",
    "suggest_for_group",
]

DEFAULT_THRESHOLD = 0.5
DEFAULT_TOP_K = 5


class SuggestionSource(str, Enum):
    EXACT_SYNONYM = "exact_synonym"
    EDIT_DISTANCE = "edit_distance"
    TYPE_COERCION = "type_coercion"
    SOLE_OPTION = "sole_option"


@dataclass(frozen=True)
class RepairSuggestion:
    """One candidate replacement, scored in [0, 1]."""

    value: str
    score: float
    provenance: SuggestionSource

    def to_dict(self) -> dict[str, Any]:
        return {"value": self.value, "score": self.score, "provenance": self.provenance.value}


@dataclass(frozen=True)
class RepairAction:
    """A chosen replacement, targeting either a whole group or one cell."""

    replacement: str
    group: tuple[str, str, str] | None = None  # (column, kind value, observed)
    cell: CellAddress | None = None

    def __post_init__(self) -> None:
        if (self.group is None) == (self.cell is None):
            raise ValueError("a repair action targets exactly one of group or cell")


def action_from_dict(data: Mapping[str, Any]) -> RepairAction:
    """Build a RepairAction from its JSON shape; raises ValueError when malformed."""
    if not isinstance(data, Mapping):
        raise ValueError("action must be an object")
    replacement = data.get("replacement")
    if not isinstance(replacement, str):
        raise ValueError("action needs a string 'replacement'")
    has_group = "group" in data
    has_cell = "cell" in data
    if has_group == has_cell:
        raise ValueError("action must carry exactly one of 'group' or 'cell'")
    if has_group:
        group = data["group"]
        try:
            key = (str(group["column"]), str(group["kind"]), str(group["observed"]))
        except (TypeError, KeyError) as exc:
            raise ValueError(f"group target needs column/kind/observed: {exc}")
        return RepairAction(replacement=replacement, group=key)
    cell = data["cell"]
    try:
        address = CellAddress(row=int(cell["row"]), column=str(cell["column"]))
    except (TypeError, KeyError, ValueError) as exc:
        raise ValueError(f"cell target needs row/column: {exc}")
    return RepairAction(replacement=replacement, cell=address)


def edit_distance(a: str, b: str) -> int:
    """Levenshtein distance (unit-cost insert/delete/substitute)."""
    if a == b:
        return 0
    if not a:
        return len(b)
    if not b:
        return len(a)
    previous = list(range(len(b) + 1))
    for i, ch_a in enumerate(a, start=1):
        current = [i]
        for j, ch_b in enumerate(b, start=1):
            current.append(min(
                previous[j] + 1,          # delete from a
                current[j - 1] + 1,       # insert into a
                previous[j - 1] + (ch_a != ch_b),
            ))
        previous = current
    return previous[-1]


def similarity(observed: str, candidate: str) -> float:
    """Normalized closeness in [0, 1]: 1 - distance / longer length.

    Both inputs are trimmed and lowercased first; equal normalized strings
    score exactly 1.0.
    """
    a = observed.strip().lower()
    b = candidate.strip().lower()
    return 1.0 - edit_distance(a, b) / max(len(a), len(b), 1)


_TRUTHY = frozenset({"yes", "y", "1", "true"})
_FALSY = frozenset({"no", "n", "0", "false"})


def _strip_quote_pair(value: str) -> str:
    value = value.strip()
    if len(value) >= 2 and value[0] == value[-1] and value[0] in ("'", '"'):
        value = value[1:-1].strip()
    return value


def _coerce(datatype: Datatype, observed: str) -> str | None:
    if datatype in (Datatype.INTEGER, Datatype.DECIMAL):
        candidate = _strip_quote_pair(observed)
        if candidate != "" and parses_as(datatype, candidate):
            return candidate
        return None
    if datatype is Datatype.BOOLEAN:
        token = observed.strip().lower()
        if token in _TRUTHY:
            return "true"
        if token in _FALSY:
            return "false"
    return None


def suggest_for_group(
    group: IssueGroup,
    spec: FieldSpec,
    value_set: ValueSet | None = None,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    top_k: int = DEFAULT_TOP_K,
) -> list[RepairSuggestion]:
    """Rank candidate repairs for one issue group.

    Controlled-value misses return synonym hits (score 1.0) first, then
    labels whose normalized similarity clears ``threshold``, truncated to
    ``top_k``.  Numeric type mismatches get the quote-stripping coercion,
    boolean mismatches the yes/no mapping.  A missing required value is only
    suggestible when a controlled field has a single permissible label.
    Ordering: score descending, then value ascending.
    """
    if group.kind is IssueKind.NOT_IN_VALUE_SET:
        if value_set is None:
            raise ValueError(f"suggestions for {group.column!r} need a resolved value set")
        observed = group.observed
        synonym_hits = []
        for label in value_set.labels:
            for synonym in value_set.synonyms.get(label, ()):
                if synonym.strip().lower() == observed:
                    synonym_hits.append(label)
                    break
        suggestions = [
            RepairSuggestion(label, 1.0, SuggestionSource.EXACT_SYNONYM)
            for label in synonym_hits
        ]
        taken = set(synonym_hits)
        for label in value_set.labels:
            if label in taken:
                continue
            score = similarity(observed, label)
            if score >= threshold:
                suggestions.append(RepairSuggestion(label, score, SuggestionSource.EDIT_DISTANCE))
        suggestions.sort(key=lambda s: (-s.score, s.provenance is not SuggestionSource.EXACT_SYNONYM, s.value))
        return suggestions[:top_k]

    if group.kind is IssueKind.TYPE_MISMATCH:
        coerced = _coerce(spec.datatype, group.observed)
        if coerced is not None:
            return [RepairSuggestion(coerced, 1.0, SuggestionSource.TYPE_COERCION)]
        return []

    if group.kind is IssueKind.MISSING_REQUIRED:
        if spec.datatype is Datatype.CONTROLLED and value_set is not None and len(value_set.labels) == 1:
            return [RepairSuggestion(value_set.labels[0], 1.0, SuggestionSource.SOLE_OPTION)]
        return []

    return []


def attach_suggestions(
    report: ValidationReport,
    template: Template,
    sets: Mapping[str, ValueSet] | None = None,
    *,
    threshold: float = DEFAULT_THRESHOLD,
    top_k: int = DEFAULT_TOP_K,
) -> ValidationReport:
    """Return a copy of the report with every group's suggestion slot filled."""
    sets = sets or {}
    groups = []
    for group in report.groups:
        spec = template.lookup_field(group.column)
        if spec is None:
            # Provenance-column groups and the like: nothing to suggest.
            groups.append(replace(group, suggestions=()))
            continue
        ranked = suggest_for_group(
            group, spec, sets.get(group.column), threshold=threshold, top_k=top_k
        )
        groups.append(replace(group, suggestions=tuple(ranked)))
    return report.with_groups(groups)


def apply_repairs(
    table: Table,
    report: ValidationReport,
    actions: Iterable[RepairAction],
) -> Table:
    """Apply chosen repairs, returning a new Table.

    Group targets replace the value in every member cell;  cell targets must
    name the address of an error reported against this table.  Application
    is atomic: any unknown target or pair of actions assigning different
    values to one cell raises before a single cell changes.

    Raises:
        UnknownTargetError: group key not in the report, cell out of bounds,
            or cell without a reported error.
        ConflictingActionsError: two different replacements for one cell.
    """
    error_addresses = {
        issue.address for issue in report.issues
        if issue.severity is Severity.ERROR and issue.row is not None
    }
    planned: dict[CellAddress, str] = {}
    conflicts: list[CellAddress] = []

    def plan(address: CellAddress, value: str) -> None:
        existing = planned.get(address)
        if existing is not None and existing != value:
            conflicts.append(address)
        planned[address] = value

    for action in actions:
        if action.group is not None:
            column, kind, observed = action.group
            group = report.group(column, kind, observed)
            if group is None:
                raise UnknownTargetError(
                    f"report has no group (column={column!r}, kind={kind!r}, observed={observed!r})"
                )
            for member in group.members:
                plan(member, action.replacement)
        else:
            address = action.cell
            if not (1 <= address.row <= len(table.rows)) or address.column not in table.columns:
                raise UnknownTargetError(f"cell {address} is out of bounds")
            if address not in error_addresses:
                raise UnknownTargetError(f"cell {address} carries no reported error")
            plan(address, action.replacement)

    if conflicts:
        cells = sorted(set(conflicts))
        raise ConflictingActionsError(
            "conflicting replacements for " + ", ".join(f"({c.row}, {c.column})" for c in cells),
            cells=cells,
        )

    if not planned:
        return table

    column_indexes: dict[str, int] = {}
    for i, name in enumerate(table.columns):
        column_indexes.setdefault(name, i)
    new_rows = []
    for row in table.rows:
        cells = row.cells
        replaced = None
        for address, value in planned.items():
            if address.row == row.index:
                if replaced is None:
                    replaced = list(cells)
                replaced[column_indexes[address.column]] = value
        new_rows.append(row if replaced is None else replace(row, cells=tuple(replaced)))
    return replace(table, rows=tuple(new_rows))
