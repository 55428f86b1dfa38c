"""Checks a Table against a Template and reports located issues.

Issues fall into two classes: completeness (something required is absent)
and adherence (a supplied value violates its field's contract).  Unknown
columns are warnings, never errors.  Each cell yields at most one issue;
checks run in a fixed order and the first failure wins, which keeps batch
repair counts intelligible.

Error-severity issues that carry a cell address are grouped by
(column, kind, trim+lowercase of the observed value); a group is the unit
of batch repair.  Reports are fully deterministic: identical inputs produce
identical issue and group ordering and an identical serialized form.
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, replace
from datetime import date, datetime, timezone
from decimal import Decimal
from enum import Enum
from typing import Any, Iterable, Mapping, Sequence

from .errors import MissingValueSetError
from .sheets import PROVENANCE_COLUMN, CellAddress, Table
from .templates import Datatype, FieldSpec, Template
from .terminology import ValueSet

__all__ = [
    "ADHERENCE_KINDS",
    "COMPLETENESS_KINDS",
    "IssueGroup",
    "IssueKind",
    "Severity",
    "ValidationIssue",
    "ValidationReport",
    "classify",
    "group_issues",
    "normalize_observed",
    "validate_cell",
    "validate_header",
    "validate_table",
]


class IssueKind(str, Enum):
    MISSING_REQUIRED = "missing_required"
    MISSING_COLUMN = "missing_column"
    NOT_IN_VALUE_SET = "not_in_value_set"
    TYPE_MISMATCH = "type_mismatch"
    OUT_OF_RANGE = "out_of_range"
    PATTERN_MISMATCH = "pattern_mismatch"
    PROVENANCE_MISMATCH = "provenance_mismatch"
    UNKNOWN_COLUMN = "unknown_column"


class Severity(str, Enum):
    ERROR = "error"
    WARNING = "warning"


COMPLETENESS_KINDS = frozenset({IssueKind.MISSING_REQUIRED, IssueKind.MISSING_COLUMN})
ADHERENCE_KINDS = frozenset({
    IssueKind.NOT_IN_VALUE_SET,
    IssueKind.TYPE_MISMATCH,
    IssueKind.OUT_OF_RANGE,
    IssueKind.PATTERN_MISMATCH,
    IssueKind.PROVENANCE_MISMATCH,
})

_KIND_ORDER = {kind: i for i, kind in enumerate(IssueKind)}


def classify(kind: IssueKind) -> str:
    """Class of an issue kind: 'completeness', 'adherence', or 'warning'."""
    if kind in COMPLETENESS_KINDS:
        return "completeness"
    if kind in ADHERENCE_KINDS:
        return "adherence"
    return "warning"


def normalize_observed(value: str) -> str:
    """Grouping normalization: trim then lowercase."""
    return value.strip().lower()


@dataclass(frozen=True)
class ValidationIssue:
    """One located finding.

    ``row`` is None for column-level issues (MissingColumn, UnknownColumn);
    ``observed`` is None when nothing was supplied (MissingRequired and
    column-level issues).  ``expected`` is a human-readable statement of the
    violated constraint.
    """

    kind: IssueKind
    column: str
    severity: Severity
    row: int | None = None
    observed: str | None = None
    expected: str = ""

    @property
    def address(self) -> CellAddress | None:
        if self.row is None:
            return None
        return CellAddress(row=self.row, column=self.column)

    def to_dict(self) -> dict[str, Any]:
        return {
            "kind": self.kind.value,
            "severity": self.severity.value,
            "column": self.column,
            "row": self.row,
            "observed": self.observed,
            "expected": self.expected,
        }


@dataclass(frozen=True)
class IssueGroup:
    """All error cells sharing (column, kind, normalized observed value).

    ``suggestions`` stays None until the repair engine fills it.
    """

    column: str
    kind: IssueKind
    observed: str
    members: tuple[CellAddress, ...]
    suggestions: tuple | None = None

    @property
    def key(self) -> tuple[str, str, str]:
        return (self.column, self.kind.value, self.observed)

    def to_dict(self) -> dict[str, Any]:
        return {
            "column": self.column,
            "kind": self.kind.value,
            "observed": self.observed,
            "rows": [member.row for member in self.members],
            "suggestions": None if self.suggestions is None
            else [s.to_dict() for s in self.suggestions],
        }


@dataclass(frozen=True)
class ValidationReport:
    """Everything validate_table found, in deterministic order.

    ``column_order`` records the display order (template fields first, then
    extra sheet columns); the summary is recomputed from the issues on
    demand, never stored.
    """

    template_id: str
    row_count: int
    generated_at: str
    issues: tuple[ValidationIssue, ...]
    groups: tuple[IssueGroup, ...]
    column_order: tuple[str, ...] = ()

    @property
    def summary(self) -> dict[str, Any]:
        errors = [i for i in self.issues if i.severity is Severity.ERROR]
        by_kind: dict[str, int] = {}
        for kind in IssueKind:
            count = sum(1 for i in self.issues if i.kind is kind)
            if count:
                by_kind[kind.value] = count
        rank = {name: i for i, name in enumerate(self.column_order)}
        by_column: dict[str, int] = {}
        for column in sorted({i.column for i in errors},
                             key=lambda c: (rank.get(c, len(rank)), c)):
            by_column[column] = sum(1 for i in errors if i.column == column)
        return {
            "error_count": len(errors),
            "warning_count": len(self.issues) - len(errors),
            "completeness": sum(1 for i in errors if i.kind in COMPLETENESS_KINDS),
            "adherence": sum(1 for i in errors if i.kind in ADHERENCE_KINDS),
            "by_kind": by_kind,
            "by_column": by_column,
        }

    def group(self, column: str, kind: IssueKind | str, observed: str) -> IssueGroup | None:
        kind_value = kind.value if isinstance(kind, IssueKind) else kind
        for candidate in self.groups:
            if candidate.key == (column, kind_value, observed):
                return candidate
        return None

    def with_groups(self, groups: Sequence[IssueGroup]) -> "ValidationReport":
        return replace(self, groups=tuple(groups))

    def to_dict(self) -> dict[str, Any]:
        return {
            "template_id": self.template_id,
            "row_count": self.row_count,
            "generated_at": self.generated_at,
            "summary": self.summary,
            "issues": [issue.to_dict() for issue in self.issues],
            "groups": [group.to_dict() for group in self.groups],
        }

    def to_json(self) -> str:
        """Stable serialization -- the REST response body and UI contract."""
        return json.dumps(self.to_dict(), indent=2, ensure_ascii=False) + "\n"


_INTEGER_RE = re.compile(r"[+-]?[0-9]+")
_DECIMAL_RE = re.compile(r"[+-]?[0-9]+(\.[0-9]+)?")
_DATE_RE = re.compile(r"[0-9]{4}-[0-9]{2}-[0-9]{2}")

_TYPE_EXPECTATIONS = {
    Datatype.INTEGER: "an integer",
    Datatype.DECIMAL: "a decimal number",
    Datatype.BOOLEAN: "'true' or 'false'",
    Datatype.DATE: "an ISO 8601 date (YYYY-MM-DD)",
}


def parses_as(datatype: Datatype, raw: str) -> bool:
    """Whether a raw string satisfies a datatype's parse rule (blankness aside)."""
    if datatype is Datatype.INTEGER:
        return _INTEGER_RE.fullmatch(raw) is not None
    if datatype is Datatype.DECIMAL:
        return _DECIMAL_RE.fullmatch(raw) is not None
    if datatype is Datatype.BOOLEAN:
        return raw in ("true", "false")
    if datatype is Datatype.DATE:
        if _DATE_RE.fullmatch(raw) is None:
            return False
        try:
            date.fromisoformat(raw)
        except ValueError:
            return False
        return True
    return True  # text and controlled accept any string at the parse step


def _bound_text(value: float) -> str:
    return str(value)


def _check_cell(
    spec: FieldSpec, raw: str, value_set: ValueSet | None
) -> tuple[IssueKind, str] | None:
    # Fixed evaluation order; first failure wins.
    if raw.strip() == "":
        if spec.required:
            return IssueKind.MISSING_REQUIRED, "a non-empty value"
        return None
    if spec.datatype in _TYPE_EXPECTATIONS and not parses_as(spec.datatype, raw):
        return IssueKind.TYPE_MISMATCH, _TYPE_EXPECTATIONS[spec.datatype]
    if spec.range is not None:
        low, high = spec.range
        value = Decimal(raw)
        if not (Decimal(str(low)) <= value <= Decimal(str(high))):
            return (
                IssueKind.OUT_OF_RANGE,
                f"a value between {_bound_text(low)} and {_bound_text(high)} (inclusive)",
            )
    if spec.pattern is not None and re.fullmatch(spec.pattern, raw) is None:
        return IssueKind.PATTERN_MISMATCH, f"a value matching /{spec.pattern}/"
    if spec.datatype is Datatype.CONTROLLED and raw not in value_set.labels:
        return IssueKind.NOT_IN_VALUE_SET, "one of: " + ", ".join(value_set.labels)
    return None


def validate_cell(
    spec: FieldSpec, raw: str, resolved: ValueSet | None = None
) -> IssueKind | None:
    """Check one raw cell value against its field spec.

    Returns the kind of the first failed check, or None when the cell is
    acceptable.  Controlled fields need their resolved value set.
    """
    if spec.datatype is Datatype.CONTROLLED and resolved is None:
        raise MissingValueSetError(f"no resolved value set for controlled field {spec.name!r}")
    result = _check_cell(spec, raw, resolved)
    return result[0] if result else None


def validate_header(template: Template, table: Table) -> list[ValidationIssue]:
    """Column-level checks: required columns present, extras flagged.

    Missing template columns are completeness errors; columns the template
    does not declare -- and duplicate occurrences of any column -- are
    warnings only.
    """
    issues = []
    present = set(table.columns)
    for spec in template.fields:
        if spec.name not in present:
            issues.append(ValidationIssue(
                kind=IssueKind.MISSING_COLUMN,
                column=spec.name,
                severity=Severity.ERROR,
                expected="a column required by the template",
            ))
    seen: set[str] = set()
    for column in table.columns:
        duplicate = column in seen
        seen.add(column)
        known = template.lookup_field(column) is not None or column == PROVENANCE_COLUMN
        if duplicate:
            issues.append(ValidationIssue(
                kind=IssueKind.UNKNOWN_COLUMN,
                column=column,
                severity=Severity.WARNING,
                expected="each column to appear once; duplicate occurrence ignored",
            ))
        elif not known:
            issues.append(ValidationIssue(
                kind=IssueKind.UNKNOWN_COLUMN,
                column=column,
                severity=Severity.WARNING,
                expected="a column declared by the template",
            ))
    return issues


def _column_display_order(template: Template, table: Table) -> tuple[str, ...]:
    order = list(template.field_names)
    for column in table.columns:
        if column not in order:
            order.append(column)
    return tuple(order)


def _sort_issues(issues: list[ValidationIssue], order: Sequence[str]) -> list[ValidationIssue]:
    rank = {name: i for i, name in enumerate(order)}
    return sorted(
        issues,
        key=lambda i: (
            i.row or 0,
            rank.get(i.column, len(rank)),
            _KIND_ORDER[i.kind],
            i.observed or "",
        ),
    )


def group_issues(
    issues: Iterable[ValidationIssue],
    column_order: Sequence[str] | None = None,
) -> list[IssueGroup]:
    """Partition addressed error-severity issues into batch-repair groups.

    The group key is (column, kind, trim+lowercase observed); warnings and
    column-level issues are excluded.  Ordering follows ``column_order``
    (first appearance order when omitted), then kind, then observed value.
    """
    grouped: dict[tuple[str, IssueKind, str], list[CellAddress]] = {}
    appearance: list[str] = []
    for issue in issues:
        if issue.severity is not Severity.ERROR or issue.row is None:
            continue
        if issue.column not in appearance:
            appearance.append(issue.column)
        key = (issue.column, issue.kind, normalize_observed(issue.observed or ""))
        grouped.setdefault(key, []).append(issue.address)
    order = list(column_order) if column_order is not None else appearance
    rank = {name: i for i, name in enumerate(order)}
    keys = sorted(
        grouped,
        key=lambda k: (rank.get(k[0], len(rank)), _KIND_ORDER[k[1]], k[2]),
    )
    return [
        IssueGroup(
            column=column,
            kind=kind,
            observed=observed,
            members=tuple(sorted(grouped[(column, kind, observed)])),
        )
        for column, kind, observed in keys
    ]


def validate_table(
    template: Template,
    table: Table,
    sets: Mapping[str, ValueSet] | None = None,
    *,
    now: datetime | None = None,
) -> ValidationReport:
    """Validate a whole table and build the report.

    ``sets`` maps field names to resolved value sets and must cover every
    controlled field that actually appears in the header.  Rows that are
    blank in every template column are treated as pre-allocated padding and
    skipped; their provenance cells are still checked.  ``now`` pins the
    report timestamp (tests; normally leave it None).

    Raises:
        MissingValueSetError: a controlled column is present in the header
            but has no entry in ``sets``.
    """
    sets = sets or {}
    issues = validate_header(template, table)

    fields_present: list[tuple[int, FieldSpec]] = []
    for spec in template.fields:
        idx = table.column_index(spec.name)
        if idx is None:
            continue
        if spec.datatype is Datatype.CONTROLLED and spec.name not in sets:
            raise MissingValueSetError(
                f"no resolved value set for controlled column {spec.name!r}"
            )
        fields_present.append((idx, spec))

    provenance_idx = table.column_index(PROVENANCE_COLUMN)

    for row in table.rows:
        padding = all(row.cells[idx].strip() == "" for idx, _ in fields_present)
        if not padding:
            for idx, spec in fields_present:
                raw = row.cells[idx]
                found = _check_cell(spec, raw, sets.get(spec.name))
                if found is None:
                    continue
                kind, expected = found
                issues.append(ValidationIssue(
                    kind=kind,
                    column=spec.name,
                    severity=Severity.ERROR,
                    row=row.index,
                    observed=None if kind is IssueKind.MISSING_REQUIRED else raw,
                    expected=expected,
                ))
        if provenance_idx is not None:
            raw = row.cells[provenance_idx]
            if raw.strip() != "" and raw != template.id:
                issues.append(ValidationIssue(
                    kind=IssueKind.PROVENANCE_MISMATCH,
                    column=PROVENANCE_COLUMN,
                    severity=Severity.ERROR,
                    row=row.index,
                    observed=raw,
                    expected=f"the template id {template.id!r}",
                ))

    order = _column_display_order(template, table)
    issues = _sort_issues(issues, order)
    groups = group_issues(issues, order)
    stamp = (now or datetime.now(timezone.utc)).strftime("%Y-%m-%dT%H:%M:%SZ")
    return ValidationReport(
        template_id=template.id,
        row_count=len(table.rows),
        generated_at=stamp,
        issues=tuple(issues),
        groups=tuple(groups),
        column_order=order,
    )
