"""metasheet: template-driven spreadsheet generation, validation, and repair.

The pipeline: declare a template (ordered field specs with datatypes and
constraints), generate a blank TSV or workbook from it, validate filled
sheets back against the template, and turn the resulting issue groups into
ranked repair suggestions that can be applied in batch.  The same core backs
the library API, the ``metasheet`` CLI, and the REST service in
``metasheet.service``.
"""

from .errors import (
    ConflictingActionsError,
    MetasheetError,
    MissingValueSetError,
    RepairError,
    SheetFormatError,
    SheetSerializationError,
    TemplateSchemaError,
    TemplateSyntaxError,
    TerminologyError,
    TerminologyUnavailableError,
    UnknownTargetError,
    UnknownValueSetError,
    WorkbookError,
)
from .generate import blank_table, generate_blank, render_spec
from .repair import (
    RepairAction,
    RepairSuggestion,
    SuggestionSource,
    action_from_dict,
    apply_repairs,
    attach_suggestions,
    edit_distance,
    similarity,
    suggest_for_group,
)
from .sheets import PROVENANCE_COLUMN, CellAddress, Row, Table, read_tsv, write_tsv
from .templates import (
    Datatype,
    FieldSpec,
    Template,
    ValueSetBinding,
    parse_template,
    serialize_template,
)
from .terminology import TerminologyClient, ValueSet, resolve_value_set
from .validate import (
    ADHERENCE_KINDS,
    COMPLETENESS_KINDS,
    IssueGroup,
    IssueKind,
    Severity,
    ValidationIssue,
    ValidationReport,
    classify,
    group_issues,
    normalize_observed,
    validate_cell,
    validate_header,
    validate_table,
)
from .workbook import read_workbook, write_workbook

__version__ = "0.1.0"

__all__ = [
    "ADHERENCE_KINDS",
    "COMPLETENESS_KINDS",
    "CellAddress",
    "ConflictingActionsError",
    "Datatype",
    "FieldSpec",
    "IssueGroup",
    "IssueKind",
    "MetasheetError",
    "MissingValueSetError",
    "PROVENANCE_COLUMN",
    "RepairAction",
    "RepairError",
    "RepairSuggestion",
    "Row",
    "Severity",
    "SheetFormatError",
    "SheetSerializationError",
    "SuggestionSource",
    "Table",
    "Template",
    "TemplateSchemaError",
    "TemplateSyntaxError",
    "TerminologyClient",
    "TerminologyError",
    "TerminologyUnavailableError",
    "UnknownTargetError",
    "UnknownValueSetError",
    "ValidationIssue",
    "ValidationReport",
    "ValueSet",
    "ValueSetBinding",
    "WorkbookError",
    "action_from_dict",
    "apply_repairs",
    "attach_suggestions",
    "blank_table",
    "classify",
    "edit_distance",
    "generate_blank",
    "group_issues",
    "normalize_observed",
    "parse_template",
    "read_tsv",
    "read_workbook",
    "render_spec",
    "resolve_value_set",
    "serialize_template",
    "similarity",
    "suggest_for_group",
    "validate_cell",
    "validate_header",
    "validate_table",
    "write_tsv",
    "write_workbook",
]
