"""Exception hierarchy shared across the package.

Every error raised by metasheet derives from MetasheetError so callers can
catch the whole family with one handler.  Validation findings are *not*
exceptions -- they are data (see metasheet.validate); exceptions here mean
the operation itself could not be carried out.
"""

from __future__ import annotations


class MetasheetError(Exception):
    """Base class for all metasheet errors."""


class TemplateSyntaxError(MetasheetError):
    """The template document is not well-formed (e.g. broken JSON)."""


class TemplateSchemaError(MetasheetError):
    """The template document parses but violates a template invariant.

    ``path`` points at the offending element, e.g. ``fields[2].range``.
    """

    def __init__(self, message: str, path: str = "") -> None:
        super().__init__(f"{path}: {message}" if path else message)
        self.path = path
        self.reason = message


class SheetFormatError(MetasheetError):
    """A spreadsheet byte-stream cannot be parsed (ragged row, bad encoding...)."""


class SheetSerializationError(MetasheetError):
    """A Table cannot be written in the requested format (e.g. tab in a TSV cell)."""


class WorkbookError(SheetFormatError):
    """A workbook archive is corrupt or structurally unusable."""


class TerminologyError(MetasheetError):
    """Base class for terminology-resolution failures."""


class UnknownValueSetError(TerminologyError):
    """The requested source/branch does not exist in the backing store."""


class TerminologyUnavailableError(TerminologyError):
    """The terminology service could not be reached or answered abnormally."""


class MissingValueSetError(MetasheetError):
    """validate_table was called without a resolved set for a controlled column."""


class RepairError(MetasheetError):
    """Base class for repair-application failures."""


class UnknownTargetError(RepairError):
    """A repair action names a group or cell that the report does not contain."""


class ConflictingActionsError(RepairError):
    """Two actions assign different replacement values to the same cell."""

    def __init__(self, message: str, cells: list | None = None) -> None:
        super().__init__(message)
        self.cells = cells or []
