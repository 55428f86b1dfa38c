"""Command-line front end for pipelines and offline use.

Exit codes: 0 success (for ``validate``: no error-severity issues), 1
validation found errors, 2 usage or I/O failure.  Diagnostics go to stderr;
report JSON goes to stdout or ``--report``.
"""

from __future__ import annotations

import json
import sys
from pathlib import Path
from typing import NoReturn

import click

from . import __version__
from .errors import MetasheetError
from .generate import generate_blank, render_spec
from .repair import action_from_dict, apply_repairs, attach_suggestions
from .service.settings import Settings
from .sheets import Table, read_tsv, write_tsv
from .templates import Datatype, Template, parse_template
from .terminology import TerminologyClient, resolve_value_set
from .validate import validate_table
from .workbook import read_workbook, write_workbook


def _fail(message: str) -> NoReturn:
    click.echo(f"error: {message}", err=True)
    sys.exit(2)


def _read_bytes(path: str) -> bytes:
    try:
        return Path(path).read_bytes()
    except OSError as exc:
        _fail(str(exc))


def _sheet_format(path: str, explicit: str | None) -> str:
    if explicit:
        return explicit
    return "xlsx" if path.lower().endswith(".xlsx") else "tsv"


def _load_table(path: str, explicit_format: str | None) -> tuple[Table, str]:
    data = _read_bytes(path)
    fmt = _sheet_format(path, explicit_format)
    try:
        return (read_tsv(data) if fmt == "tsv" else read_workbook(data)), fmt
    except MetasheetError as exc:
        _fail(f"{path}: {exc}")


def _load_template(reference: str | None, table: Table | None, templates_dir: str | None) -> Template:
    if reference and Path(reference).is_file():
        return _parse_template_file(reference)
    template_id = reference or (table.provenance if table is not None else None)
    if not template_id:
        _fail("no template given and the sheet carries no provenance; pass --template")
    if not templates_dir:
        _fail(f"template id {template_id!r} needs --templates-dir (or METASHEET_TEMPLATES_DIR)")
    candidate = Path(templates_dir) / f"{template_id}.json"
    if not candidate.is_file():
        _fail(f"template {template_id!r} not found under {templates_dir}")
    return _parse_template_file(str(candidate))


def _parse_template_file(path: str) -> Template:
    try:
        return parse_template(_read_bytes(path))
    except MetasheetError as exc:
        _fail(f"{path}: {exc}")


def _terminology(fixtures: str | None) -> TerminologyClient | None:
    if fixtures:
        return TerminologyClient("fixture", fixtures_dir=fixtures)
    return None


def _resolve_sets(template: Template, table: Table, client: TerminologyClient | None):
    sets = {}
    try:
        for spec in template.fields:
            if spec.datatype is Datatype.CONTROLLED and spec.name in table.columns:
                sets[spec.name] = resolve_value_set(spec.value_set, client)
    except MetasheetError as exc:
        _fail(str(exc))
    return sets


def _write_output(data: bytes, out: str | None) -> None:
    if out:
        Path(out).write_bytes(data)
    else:
        click.get_binary_stream("stdout").write(data)


templates_dir_option = click.option(
    "--templates-dir", envvar="METASHEET_TEMPLATES_DIR",
    help="Directory of registered template documents (<id>.json).",
)
fixtures_option = click.option(
    "--fixtures", envvar="METASHEET_FIXTURES_DIR",
    help="Terminology fixture directory (<source>/<branch>.json).",
)
format_option = click.option(
    "--format", "sheet_format", type=click.Choice(["tsv", "xlsx"]),
    help="Sheet format; inferred from the file extension when omitted.",
)


@click.group()
@click.version_option(__version__)
def main() -> None:
    """Generate, validate, and repair template-driven metadata spreadsheets."""


@main.command()
@click.argument("template_file")
@click.option("--format", "sheet_format", type=click.Choice(["tsv", "xlsx"]), default="tsv", show_default=True)
@click.option("--rows", type=click.IntRange(min=0), default=None,
              help="Pre-allocated data rows (default 0 for tsv, 20 for xlsx).")
@click.option("-o", "--out", help="Output file (stdout when omitted).")
@fixtures_option
def generate(template_file: str, sheet_format: str, rows: int | None, out: str | None, fixtures: str | None) -> None:
    """Generate a blank spreadsheet from a template document."""
    template = _parse_template_file(template_file)
    try:
        data = generate_blank(template, sheet_format, rows, _terminology(fixtures))
    except MetasheetError as exc:
        _fail(str(exc))
    _write_output(data, out)


@main.command()
@click.argument("template_file")
@click.option("-o", "--out", help="Output file (stdout when omitted).")
def render(template_file: str, out: str | None) -> None:
    """Render a template as human-readable Markdown."""
    _write_output(render_spec(_parse_template_file(template_file)), out)


@main.command()
@click.argument("sheet")
@click.option("--template", "template_ref",
              help="Template document path, or a template id to look up in --templates-dir.")
@click.option("--report", "report_path", help="Also write the report JSON to this file.")
@templates_dir_option
@fixtures_option
@format_option
def validate(sheet: str, template_ref: str | None, report_path: str | None,
             templates_dir: str | None, fixtures: str | None, sheet_format: str | None) -> None:
    """Validate a spreadsheet; exit 1 when errors are found."""
    table, _ = _load_table(sheet, sheet_format)
    template = _load_template(template_ref, table, templates_dir)
    report = validate_table(template, table, _resolve_sets(template, table, _terminology(fixtures)))
    payload = report.to_json()
    click.echo(payload, nl=False)
    if report_path:
        Path(report_path).write_text(payload, encoding="utf-8")
    summary = report.summary
    click.echo(
        f"{sheet}: {summary['error_count']} error(s), {summary['warning_count']} warning(s)",
        err=True,
    )
    sys.exit(1 if summary["error_count"] else 0)


@main.command()
@click.argument("sheet")
@click.option("--template", "template_ref")
@click.option("-o", "--out", help="Output file for the suggestions JSON (stdout when omitted).")
@templates_dir_option
@fixtures_option
@format_option
def suggest(sheet: str, template_ref: str | None, out: str | None,
            templates_dir: str | None, fixtures: str | None, sheet_format: str | None) -> None:
    """Print ranked repair suggestions for every issue group."""
    table, _ = _load_table(sheet, sheet_format)
    template = _load_template(template_ref, table, templates_dir)
    sets = _resolve_sets(template, table, _terminology(fixtures))
    report = attach_suggestions(validate_table(template, table, sets), template, sets)
    payload = json.dumps(
        {"template_id": template.id, "groups": [g.to_dict() for g in report.groups]},
        indent=2, ensure_ascii=False,
    ) + "\n"
    _write_output(payload.encode("utf-8"), out)


@main.command()
@click.argument("sheet")
@click.option("--actions", "actions_path", required=True,
              help="JSON file with a list of repair actions.")
@click.option("--out", required=True, help="Where to write the repaired spreadsheet.")
@click.option("--report", "report_path", help="Also write the post-repair report JSON.")
@click.option("--template", "template_ref")
@templates_dir_option
@fixtures_option
@format_option
def repair(sheet: str, actions_path: str, out: str, report_path: str | None,
           template_ref: str | None, templates_dir: str | None,
           fixtures: str | None, sheet_format: str | None) -> None:
    """Apply repair actions to a spreadsheet and re-validate it."""
    table, fmt = _load_table(sheet, sheet_format)
    template = _load_template(template_ref, table, templates_dir)
    sets = _resolve_sets(template, table, _terminology(fixtures))
    report = validate_table(template, table, sets)

    try:
        raw_actions = json.loads(_read_bytes(actions_path))
        if not isinstance(raw_actions, list):
            raise ValueError("actions file must hold a JSON list")
        actions = [action_from_dict(a) for a in raw_actions]
    except (json.JSONDecodeError, ValueError) as exc:
        _fail(f"{actions_path}: {exc}")

    try:
        repaired = apply_repairs(table, report, actions)
    except MetasheetError as exc:
        _fail(str(exc))

    if fmt == "tsv":
        data = write_tsv(repaired)
    else:
        dropdowns = {name: list(vs.labels) for name, vs in sets.items()}
        data = write_workbook(repaired, dropdowns=dropdowns)
    Path(out).write_bytes(data)

    fresh = validate_table(template, repaired, sets)
    if report_path:
        Path(report_path).write_text(fresh.to_json(), encoding="utf-8")
    summary = fresh.summary
    click.echo(
        f"{out}: repaired; {summary['error_count']} error(s) remain",
        err=True,
    )


@main.command()
@click.option("--host", envvar="METASHEET_HOST", default="127.0.0.1", show_default=True)
@click.option("--port", envvar="METASHEET_PORT", type=int, default=8000, show_default=True)
@templates_dir_option
@fixtures_option
@click.option("--terminology-mode", type=click.Choice(["fixture", "live"]), default="fixture", show_default=True)
@click.option("--terminology-url", envvar="METASHEET_TERMINOLOGY_URL")
@click.option("--session-ttl", type=float, default=None, help="Upload session TTL in seconds.")
@click.option("--max-upload-mb", type=int, default=None, help="Upload size cap in MiB.")
def serve(host: str, port: int, templates_dir: str | None, fixtures: str | None,
          terminology_mode: str, terminology_url: str | None,
          session_ttl: float | None, max_upload_mb: int | None) -> None:
    """Run the REST service."""
    import uvicorn

    from .service import create_app

    settings = Settings.from_env(
        host=host,
        port=port,
        templates_dir=templates_dir,
        fixtures_dir=fixtures,
        terminology_mode=terminology_mode,
        terminology_url=terminology_url,
        session_ttl=session_ttl,
        max_upload_bytes=max_upload_mb * 1024 * 1024 if max_upload_mb else None,
    )
    uvicorn.run(create_app(settings), host=settings.host, port=settings.port)


if __name__ == "__main__":
    main()
