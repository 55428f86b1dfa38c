"""Pydantic request/response models for the REST surface.

Validation reports are deliberately *not* re-modelled here: /validate
returns the library's serialized report verbatim so the REST body and the
library output stay bit-for-bit identical.
"""

from __future__ import annotations

from pydantic import BaseModel, Field


class GroupKeyModel(BaseModel):
    column: str
    kind: str
    observed: str


class CellRefModel(BaseModel):
    row: int
    column: str


class RepairActionModel(BaseModel):
    replacement: str
    group: GroupKeyModel | None = None
    cell: CellRefModel | None = None


class SuggestRequest(BaseModel):
    session_id: str


class RepairRequest(BaseModel):
    session_id: str
    actions: list[RepairActionModel] = Field(default_factory=list)


class TemplateSummary(BaseModel):
    id: str
    name: str
    version: str
    field_count: int


class TemplateListResponse(BaseModel):
    templates: list[TemplateSummary]


class HealthResponse(BaseModel):
    status: str
    version: str
    terminology_mode: str
