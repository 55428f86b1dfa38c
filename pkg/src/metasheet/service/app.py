"""The REST facade: validate, suggest, repair, templates, generation.

Every endpoint delegates to the library; the /validate body, the CLI
``--report`` output, and ``ValidationReport.to_json`` are the same bytes by
construction.  The session id for follow-up /suggest and /repair calls
travels in the ``X-Session-Id`` response header, leaving the /validate body
identical to the library-serialized report.
"""

from __future__ import annotations

import base64

from fastapi import FastAPI, File, Form, Request, UploadFile
from fastapi.exceptions import RequestValidationError
from fastapi.middleware.cors import CORSMiddleware
from fastapi.responses import JSONResponse, Response

from .. import __version__
from ..errors import (
    ConflictingActionsError,
    RepairError,
    SheetFormatError,
    TemplateSchemaError,
    TemplateSyntaxError,
    TerminologyError,
)
from ..generate import generate_blank
from ..repair import action_from_dict, apply_repairs, attach_suggestions
from ..sheets import read_tsv, write_tsv
from ..templates import Datatype, Template, parse_template, serialize_template
from ..terminology import TerminologyClient, ValueSet, resolve_value_set
from ..validate import validate_table
from ..workbook import read_workbook, write_workbook
from .models import (
    HealthResponse,
    RepairRequest,
    SuggestRequest,
    TemplateListResponse,
    TemplateSummary,
)
from .sessions import SessionStore
from .settings import Settings
from .store import TemplateStore

TSV_MEDIA_TYPE = "text/tab-separated-values"
XLSX_MEDIA_TYPE = "application/vnd.openxmlformats-officedocument.spreadsheetml.sheet"


def _error(status: int, detail: str) -> JSONResponse:
    return JSONResponse(status_code=status, content={"detail": detail})


def _detect_format(explicit: str | None, filename: str, data: bytes) -> str:
    if explicit:
        return explicit
    if filename.lower().endswith(".xlsx"):
        return "xlsx"
    if filename.lower().endswith(".tsv"):
        return "tsv"
    return "xlsx" if data[:4] == b"PK\x03\x04" else "tsv"


def create_app(
    settings: Settings | None = None,
    *,
    template_store: TemplateStore | None = None,
    terminology: TerminologyClient | None = None,
    session_store: SessionStore | None = None,
) -> FastAPI:
    settings = settings or Settings.from_env()
    store = template_store or TemplateStore(settings.templates_dir)
    sessions = session_store or SessionStore(ttl=settings.session_ttl)
    if terminology is None:
        if settings.terminology_mode == "live" and settings.terminology_url:
            terminology = TerminologyClient(
                "live",
                base_url=settings.terminology_url,
                api_key=settings.terminology_api_key,
                ttl=settings.terminology_ttl,
            )
        elif settings.fixtures_dir:
            terminology = TerminologyClient(
                "fixture",
                fixtures_dir=settings.fixtures_dir,
                ttl=settings.terminology_ttl,
            )

    app = FastAPI(title="metasheet", version=__version__)
    app.add_middleware(
        CORSMiddleware,
        allow_origins=settings.cors_origins,
        allow_methods=["*"],
        allow_headers=["*"],
        expose_headers=["X-Session-Id"],
    )

    @app.exception_handler(RequestValidationError)
    async def malformed_request(request: Request, exc: RequestValidationError):
        return _error(400, f"malformed request: {exc.errors()}")

    def resolve_sets(template: Template, columns: tuple[str, ...] | None) -> dict[str, ValueSet]:
        sets = {}
        for spec in template.fields:
            if spec.datatype is not Datatype.CONTROLLED:
                continue
            if columns is not None and spec.name not in columns:
                continue
            sets[spec.name] = resolve_value_set(spec.value_set, terminology)
        return sets

    @app.get("/health", response_model=HealthResponse)
    def health() -> HealthResponse:
        mode = settings.terminology_mode if terminology is not None else "none"
        return HealthResponse(status="ok", version=__version__, terminology_mode=mode)

    @app.post("/validate")
    def validate(
        file: UploadFile = File(...),
        format: str | None = Form(None),
        template_id: str | None = Form(None),
    ):
        data = file.file.read()
        if len(data) > settings.max_upload_bytes:
            return _error(413, f"upload exceeds the {settings.max_upload_bytes} byte cap")
        filename = file.filename or "upload"
        fmt = _detect_format(format, filename, data)
        if fmt not in ("tsv", "xlsx"):
            return _error(400, f"unknown format {fmt!r}; expected tsv or xlsx")
        try:
            table = read_tsv(data) if fmt == "tsv" else read_workbook(data)
        except SheetFormatError as exc:
            return _error(400, f"malformed spreadsheet: {exc}")

        resolved_id = template_id or table.provenance
        if not resolved_id:
            return _error(422, "spreadsheet carries no template provenance and no template_id override was given")
        template = store.get(resolved_id)
        if template is None:
            return _error(404, f"unknown template {resolved_id!r}")

        try:
            sets = resolve_sets(template, table.columns)
        except TerminologyError as exc:
            return _error(502, f"terminology resolution failed: {exc}")

        report = validate_table(template, table, sets)
        session = sessions.create(
            filename=filename,
            format=fmt,
            data=data,
            table=table,
            template=template,
            sets=sets,
            report=report,
        )
        return Response(
            content=report.to_json(),
            media_type="application/json",
            headers={"X-Session-Id": session.id},
        )

    @app.post("/suggest")
    def suggest(request: SuggestRequest):
        session = sessions.get(request.session_id)
        if session is None:
            return _error(404, f"unknown or expired session {request.session_id!r}")
        enriched = attach_suggestions(session.report, session.template, session.sets)
        return {
            "session_id": session.id,
            "template_id": session.template.id,
            "groups": [group.to_dict() for group in enriched.groups],
        }

    @app.post("/repair")
    def repair(request: RepairRequest):
        session = sessions.get(request.session_id)
        if session is None:
            return _error(404, f"unknown or expired session {request.session_id!r}")
        try:
            actions = [
                action_from_dict(model.model_dump(exclude_none=True))
                for model in request.actions
            ]
        except ValueError as exc:
            return _error(400, f"malformed action: {exc}")

        with session.lock:
            try:
                repaired = apply_repairs(session.table, session.report, actions)
            except ConflictingActionsError as exc:
                return _error(409, str(exc))
            except RepairError as exc:
                return _error(400, f"malformed action: {exc}")

            if repaired is session.table:
                data = session.data  # nothing changed: hand back the original bytes
            elif session.format == "tsv":
                data = write_tsv(repaired)
            else:
                dropdowns = {name: list(vs.labels) for name, vs in session.sets.items()}
                data = write_workbook(repaired, dropdowns=dropdowns)
            report = validate_table(session.template, repaired, session.sets)
            session.table = repaired
            session.data = data
            session.report = report

        return {
            "session_id": session.id,
            "filename": f"{session.filename}.repaired",
            "format": session.format,
            "file_base64": base64.b64encode(data).decode("ascii"),
            "report": report.to_dict(),
        }

    @app.get("/templates", response_model=TemplateListResponse)
    def list_templates() -> TemplateListResponse:
        return TemplateListResponse(templates=[
            TemplateSummary(id=t.id, name=t.name, version=t.version, field_count=len(t.fields))
            for t in store.list()
        ])

    @app.get("/templates/{template_id}")
    def get_template(template_id: str):
        template = store.get(template_id)
        if template is None:
            return _error(404, f"unknown template {template_id!r}")
        return Response(content=serialize_template(template), media_type="application/json")

    @app.put("/templates/{template_id}")
    async def put_template(template_id: str, request: Request):
        body = await request.body()
        try:
            template = parse_template(body)
        except (TemplateSyntaxError, TemplateSchemaError) as exc:
            return _error(400, f"invalid template document: {exc}")
        if template.id != template_id:
            return _error(400, f"document id {template.id!r} does not match path id {template_id!r}")
        created = store.put(template)
        return JSONResponse(
            status_code=201 if created else 200,
            content={"id": template.id, "created": created},
        )

    @app.get("/templates/{template_id}/spreadsheet")
    def template_spreadsheet(template_id: str, format: str = "tsv", rows: int | None = None):
        template = store.get(template_id)
        if template is None:
            return _error(404, f"unknown template {template_id!r}")
        if format not in ("tsv", "xlsx"):
            return _error(400, f"unknown format {format!r}; expected tsv or xlsx")
        try:
            data = generate_blank(template, format, rows, terminology)
        except TerminologyError as exc:
            return _error(502, f"terminology resolution failed: {exc}")
        media = TSV_MEDIA_TYPE if format == "tsv" else XLSX_MEDIA_TYPE
        return Response(
            content=data,
            media_type=media,
            headers={
                "Content-Disposition": f'attachment; filename="{template.id}.{format}"'
            },
        )

    return app
