"""Office Open XML workbook I/O without external spreadsheet libraries.

Only the slice of the format this suite needs: the first worksheet carries
header + data, an optional second worksheet named ``_provenance`` carries
key/value rows (``template_id``, <id>).  All cell values are read as display
strings, because the validation contract is over the strings users typed.

Writing uses inline strings exclusively; reading additionally understands
shared strings, cached formula strings, booleans, and plain numbers so that
files saved by real spreadsheet tools survive a round trip through the
validator.  Round-tripping is value-identical on the Table model, not
byte-identical (zip containers are not canonical).
"""

from __future__ import annotations

import io
import re
import zipfile
from decimal import Decimal, InvalidOperation
from xml.etree import ElementTree
from xml.sax.saxutils import escape, quoteattr

from .errors import WorkbookError
from .sheets import Row, Table

__all__ = ["read_workbook", "write_workbook"]

_NS_MAIN = "http://schemas.openxmlformats.org/spreadsheetml/2006/main"
_NS_REL_DOC = "http://schemas.openxmlformats.org/officeDocument/2006/relationships"
_NS_PKG_REL = "http://schemas.openxmlformats.org/package/2006/relationships"
_PROVENANCE_SHEET = "_provenance"

# Zip entries carry a fixed timestamp so identical tables produce identical
# archives (handy for caching and test determinism; the format contract
# itself only promises value-level round trips).
_ZIP_EPOCH = (1980, 1, 1, 0, 0, 0)


def _column_letters(index: int) -> str:
    """0-based column index -> spreadsheet letters (0 -> A, 26 -> AA)."""
    letters = ""
    index += 1
    while index:
        index, rem = divmod(index - 1, 26)
        letters = chr(ord("A") + rem) + letters
    return letters


_REF_RE = re.compile(r"^([A-Z]+)([0-9]+)$")


def _parse_ref(ref: str) -> tuple[int, int]:
    """Cell reference -> (0-based column index, 1-based row number)."""
    m = _REF_RE.match(ref)
    if not m:
        raise WorkbookError(f"malformed cell reference {ref!r}")
    letters, row = m.groups()
    col = 0
    for ch in letters:
        col = col * 26 + (ord(ch) - ord("A") + 1)
    return col - 1, int(row)


def _display_number(raw: str) -> str:
    # Spreadsheet tools may store 1000000000000000 as "1E+15"; users never
    # typed the exponent, so render fixed-point.
    if "e" not in raw and "E" not in raw:
        return raw
    try:
        return format(Decimal(raw), "f")
    except InvalidOperation:
        return raw


def _cell_xml(ref: str, value: str) -> str:
    if value == "":
        return f'<c r="{ref}" t="inlineStr"><is><t/></is></c>'
    return (
        f'<c r="{ref}" t="inlineStr"><is>'
        f'<t xml:space="preserve">{escape(value)}</t>'
        "</is></c>"
    )


def _sheet_xml(grid: list[list[str]], validations: list[tuple[str, str]] = ()) -> str:
    rows = []
    for r, cells in enumerate(grid, start=1):
        body = "".join(_cell_xml(f"{_column_letters(c)}{r}", v) for c, v in enumerate(cells))
        rows.append(f'<row r="{r}">{body}</row>')
    parts = [
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>',
        f'<worksheet xmlns="{_NS_MAIN}">',
        "<sheetData>",
        *rows,
        "</sheetData>",
    ]
    if validations:
        parts.append(f'<dataValidations count="{len(validations)}">')
        for sqref, formula in validations:
            parts.append(
                f'<dataValidation type="list" allowBlank="1" sqref="{sqref}">'
                f"<formula1>{escape(formula)}</formula1></dataValidation>"
            )
        parts.append("</dataValidations>")
    parts.append("</worksheet>")
    return "".join(parts)


def write_workbook(table: Table, *, dropdowns: dict[str, list[str]] | None = None) -> bytes:
    """Serialize a Table to workbook bytes.

    ``dropdowns`` maps column names to permissible labels; matching columns
    get a list-type data validation over the pre-allocated data rows.  Labels
    containing commas or quotes cannot be encoded as an inline list and the
    dropdown for that column is skipped (255-char list limit likewise).
    """
    grid = [list(table.columns)] + [list(row.cells) for row in table.rows]

    validations: list[tuple[str, str]] = []
    if dropdowns and table.rows:
        first, last = 2, len(table.rows) + 1
        for col_idx, name in enumerate(table.columns):
            labels = dropdowns.get(name)
            if not labels:
                continue
            if any("," in lab or '"' in lab for lab in labels):
                continue
            formula = '"' + ",".join(labels) + '"'
            if len(formula) > 257:  # 255-char list payload + enclosing quotes
                continue
            letter = _column_letters(col_idx)
            validations.append((f"{letter}{first}:{letter}{last}", formula))

    sheets = [("Data", _sheet_xml(grid, validations))]
    if table.provenance is not None:
        sheets.append((_PROVENANCE_SHEET, _sheet_xml([["template_id", table.provenance]])))

    sheet_entries = []
    rel_entries = []
    type_overrides = [
        '<Override PartName="/xl/workbook.xml" ContentType="application/vnd.'
        'openxmlformats-officedocument.spreadsheetml.sheet.main+xml"/>',
        '<Override PartName="/xl/styles.xml" ContentType="application/vnd.'
        'openxmlformats-officedocument.spreadsheetml.styles+xml"/>',
    ]
    for n, (name, _) in enumerate(sheets, start=1):
        sheet_entries.append(f'<sheet name={quoteattr(name)} sheetId="{n}" r:id="rId{n}"/>')
        rel_entries.append(
            f'<Relationship Id="rId{n}" Type="{_NS_REL_DOC}/worksheet" '
            f'Target="worksheets/sheet{n}.xml"/>'
        )
        type_overrides.append(
            f'<Override PartName="/xl/worksheets/sheet{n}.xml" ContentType="application/'
            'vnd.openxmlformats-officedocument.spreadsheetml.worksheet+xml"/>'
        )
    styles_rid = len(sheets) + 1
    rel_entries.append(
        f'<Relationship Id="rId{styles_rid}" Type="{_NS_REL_DOC}/styles" Target="styles.xml"/>'
    )

    content_types = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        '<Types xmlns="http://schemas.openxmlformats.org/package/2006/content-types">'
        '<Default Extension="rels" ContentType="application/vnd.openxmlformats-package.'
        'relationships+xml"/>'
        '<Default Extension="xml" ContentType="application/xml"/>'
        + "".join(type_overrides)
        + "</Types>"
    )
    root_rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<Relationships xmlns="{_NS_PKG_REL}">'
        f'<Relationship Id="rId1" Type="{_NS_REL_DOC}/officeDocument" Target="xl/workbook.xml"/>'
        "</Relationships>"
    )
    workbook_xml = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<workbook xmlns="{_NS_MAIN}" xmlns:r="{_NS_REL_DOC}">'
        f'<sheets>{"".join(sheet_entries)}</sheets></workbook>'
    )
    workbook_rels = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<Relationships xmlns="{_NS_PKG_REL}">{"".join(rel_entries)}</Relationships>'
    )
    styles_xml = (
        '<?xml version="1.0" encoding="UTF-8" standalone="yes"?>'
        f'<styleSheet xmlns="{_NS_MAIN}">'
        '<fonts count="1"><font/></fonts><fills count="1"><fill/></fills>'
        '<borders count="1"><border/></borders>'
        '<cellStyleXfs count="1"><xf/></cellStyleXfs><cellXfs count="1"><xf/></cellXfs>'
        "</styleSheet>"
    )

    buffer = io.BytesIO()
    with zipfile.ZipFile(buffer, "w", zipfile.ZIP_DEFLATED) as archive:
        def add(path: str, content: str) -> None:
            info = zipfile.ZipInfo(path, date_time=_ZIP_EPOCH)
            info.compress_type = zipfile.ZIP_DEFLATED
            archive.writestr(info, content.encode("utf-8"))

        add("[Content_Types].xml", content_types)
        add("_rels/.rels", root_rels)
        add("xl/workbook.xml", workbook_xml)
        add("xl/_rels/workbook.xml.rels", workbook_rels)
        add("xl/styles.xml", styles_xml)
        for n, (_, xml) in enumerate(sheets, start=1):
            add(f"xl/worksheets/sheet{n}.xml", xml)
    return buffer.getvalue()


def _tag(name: str) -> str:
    return f"{{{_NS_MAIN}}}{name}"


def _shared_strings(archive: zipfile.ZipFile) -> list[str]:
    try:
        data = archive.read("xl/sharedStrings.xml")
    except KeyError:
        return []
    root = ElementTree.fromstring(data)
    strings = []
    for si in root.iter(_tag("si")):
        strings.append("".join(t.text or "" for t in si.iter(_tag("t"))))
    return strings


def _cell_value(cell: ElementTree.Element, shared: list[str]) -> str:
    kind = cell.get("t", "n")
    if kind == "inlineStr":
        is_el = cell.find(_tag("is"))
        if is_el is None:
            return ""
        return "".join(t.text or "" for t in is_el.iter(_tag("t")))
    v = cell.find(_tag("v"))
    raw = v.text or "" if v is not None else ""
    if kind == "s":
        try:
            return shared[int(raw)]
        except (ValueError, IndexError):
            raise WorkbookError(f"dangling shared string reference {raw!r}")
    if kind == "b":
        return "true" if raw == "1" else "false"
    if kind in ("str", "e"):
        return raw
    return _display_number(raw)


def _sheet_grid(data: bytes, shared: list[str]) -> list[list[str]]:
    try:
        root = ElementTree.fromstring(data)
    except ElementTree.ParseError as exc:
        raise WorkbookError(f"malformed worksheet XML: {exc}")
    grid = []
    row_cursor = 0
    for row in root.iter(_tag("row")):
        row_num = int(row.get("r", row_cursor + 1))
        row_cursor = row_num
        cells: list[str] = []
        col_cursor = -1
        for cell in row.findall(_tag("c")):
            ref = cell.get("r")
            col = _parse_ref(ref)[0] if ref else col_cursor + 1
            col_cursor = col
            while len(cells) < col:
                cells.append("")
            cells.append(_cell_value(cell, shared))
        grid.append((row_num, cells))
    grid.sort(key=lambda pair: pair[0])
    return [cells for _, cells in grid]


def read_workbook(data: bytes) -> Table:
    """Parse workbook bytes into a Table.

    The first worksheet supplies header + data; provenance comes only from the
    ``_provenance`` worksheet (absent sheet means absent provenance).

    Raises:
        WorkbookError: corrupt archive, missing first worksheet, or a data
            cell lying beyond the header width.
    """
    try:
        archive = zipfile.ZipFile(io.BytesIO(data))
    except zipfile.BadZipFile as exc:
        raise WorkbookError(f"corrupt workbook archive: {exc}")

    with archive:
        try:
            workbook_xml = archive.read("xl/workbook.xml")
            rels_xml = archive.read("xl/_rels/workbook.xml.rels")
        except KeyError as exc:
            raise WorkbookError(f"corrupt workbook archive: missing part {exc}")

        try:
            wb_root = ElementTree.fromstring(workbook_xml)
            rel_root = ElementTree.fromstring(rels_xml)
        except ElementTree.ParseError as exc:
            raise WorkbookError(f"malformed workbook XML: {exc}")

        targets = {}
        for rel in rel_root.iter(f"{{{_NS_PKG_REL}}}Relationship"):
            target = rel.get("Target", "")
            targets[rel.get("Id")] = target.lstrip("/") if target.startswith("/") else f"xl/{target}"

        sheets = []
        for sheet in wb_root.iter(_tag("sheet")):
            rid = sheet.get(f"{{{_NS_REL_DOC}}}id")
            path = targets.get(rid)
            if path:
                sheets.append((sheet.get("name", ""), path))
        if not sheets:
            raise WorkbookError("workbook has no worksheets")

        shared = _shared_strings(archive)

        def load(path: str) -> list[list[str]]:
            try:
                return _sheet_grid(archive.read(path), shared)
            except KeyError:
                raise WorkbookError(f"corrupt workbook archive: missing part {path!r}")

        grid = load(sheets[0][1])
        if not grid:
            raise WorkbookError("first worksheet is empty: no header row")

        header = grid[0]
        width = len(header)
        rows = []
        for ordinal, cells in enumerate(grid[1:], start=1):
            if len(cells) > width:
                extra = cells[width:]
                if any(c != "" for c in extra):
                    raise WorkbookError(
                        f"data row {ordinal} has a value beyond the header width"
                    )
                cells = cells[:width]
            cells = cells + [""] * (width - len(cells))
            rows.append(Row(index=ordinal, cells=tuple(cells)))

        provenance = None
        for name, path in sheets[1:]:
            if name == _PROVENANCE_SHEET:
                for cells in load(path):
                    if len(cells) >= 2 and cells[0] == "template_id" and cells[1] != "":
                        provenance = cells[1]
                        break
                break

    return Table(columns=tuple(header), rows=tuple(rows), provenance=provenance)
