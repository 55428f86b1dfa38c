"""Declarative metadata templates.

A template is the schema for one kind of metadata sheet: an ordered list of
field specifications, each naming a column and constraining its values by
datatype, requiredness, numeric range, regular-expression pattern, or a
binding to a set of permissible values.

Templates travel as JSON documents, e.g.::

    {"id": "tmpl-sample-v1", "name": "Sample", "version": "1.0.0",
     "fields": [{"name": "time_unit", "datatype": "controlled", "required": true,
                 "value_set": {"kind": "inline", "labels": ["Year", "Month", "Day"]}}]}
"""

from __future__ import annotations

import json
import re
from dataclasses import dataclass, field
from enum import Enum
from typing import Any

from .errors import TemplateSchemaError, TemplateSyntaxError

__all__ = [
    "Datatype",
    "FieldSpec",
    "Template",
    "ValueSetBinding",
    "parse_template",
    "serialize_template",
]


class Datatype(str, Enum):
    TEXT = "text"
    INTEGER = "integer"
    DECIMAL = "decimal"
    BOOLEAN = "boolean"
    DATE = "date"
    CONTROLLED = "controlled"


NUMERIC_DATATYPES = frozenset({Datatype.INTEGER, Datatype.DECIMAL})


@dataclass(frozen=True)
class ValueSetBinding:
    """Where a controlled field gets its permissible values from.

    ``inline`` bindings carry the labels themselves; ``terminology`` bindings
    name a (source_id, branch_id) pair resolved through a terminology client.
    """

    kind: str  # "inline" | "terminology"
    labels: tuple[str, ...] = ()
    source_id: str = ""
    branch_id: str = ""


@dataclass(frozen=True)
class FieldSpec:
    """One column's contract."""

    name: str
    datatype: Datatype
    required: bool = False
    value_set: ValueSetBinding | None = None
    range: tuple[float, float] | None = None  # inclusive (min, max)
    pattern: str | None = None
    description: str | None = None
    example: str | None = None


@dataclass(frozen=True)
class Template:
    """An ordered, validated metadata schema.

    Immutable after construction; safe to share across threads.
    """

    id: str
    name: str
    version: str
    fields: tuple[FieldSpec, ...] = field(default=())

    def lookup_field(self, column: str) -> FieldSpec | None:
        """Return the field spec whose name equals ``column`` (case-sensitive)."""
        for spec in self.fields:
            if spec.name == column:
                return spec
        return None

    def field_index(self, column: str) -> int | None:
        """Position of ``column`` in the template, or None if not declared."""
        for i, spec in enumerate(self.fields):
            if spec.name == column:
                return i
        return None

    @property
    def field_names(self) -> tuple[str, ...]:
        return tuple(spec.name for spec in self.fields)


_DATATYPE_VALUES = {d.value for d in Datatype}
_FIELD_KEYS = {
    "name", "datatype", "required", "value_set", "range",
    "pattern", "description", "example",
}
_BINDING_KEYS = {"kind", "labels", "source_id", "branch_id"}


def _require(condition: bool, message: str, path: str) -> None:
    if not condition:
        raise TemplateSchemaError(message, path)


def _parse_binding(raw: Any, path: str) -> ValueSetBinding:
    _require(isinstance(raw, dict), "value_set must be an object", path)
    unknown = set(raw) - _BINDING_KEYS
    _require(not unknown, f"unknown keys: {sorted(unknown)}", path)
    kind = raw.get("kind")
    _require(kind in ("inline", "terminology"),
             "kind must be 'inline' or 'terminology'", f"{path}.kind")
    if kind == "inline":
        labels = raw.get("labels")
        _require(isinstance(labels, list) and labels,
                 "inline binding needs a non-empty labels list", f"{path}.labels")
        seen = set()
        for i, label in enumerate(labels):
            lpath = f"{path}.labels[{i}]"
            _require(isinstance(label, str) and label != "", "label must be a non-empty string", lpath)
            _require(label == label.strip(), "label has leading/trailing whitespace", lpath)
            _require(label not in seen, f"duplicate label {label!r}", lpath)
            seen.add(label)
        _require("source_id" not in raw and "branch_id" not in raw,
                 "inline binding cannot carry source_id/branch_id", path)
        return ValueSetBinding(kind="inline", labels=tuple(labels))
    source = raw.get("source_id")
    branch = raw.get("branch_id")
    _require(isinstance(source, str) and source != "", "terminology binding needs source_id", f"{path}.source_id")
    _require(isinstance(branch, str) and branch != "", "terminology binding needs branch_id", f"{path}.branch_id")
    _require("labels" not in raw, "terminology binding cannot carry inline labels", path)
    return ValueSetBinding(kind="terminology", source_id=source, branch_id=branch)


def _parse_field(raw: Any, path: str) -> FieldSpec:
    _require(isinstance(raw, dict), "field must be an object", path)
    unknown = set(raw) - _FIELD_KEYS
    _require(not unknown, f"unknown keys: {sorted(unknown)}", path)

    name = raw.get("name")
    _require(isinstance(name, str) and name != "", "field needs a non-empty name", f"{path}.name")

    datatype_raw = raw.get("datatype")
    _require(datatype_raw in _DATATYPE_VALUES,
             f"datatype must be one of {sorted(_DATATYPE_VALUES)}", f"{path}.datatype")
    datatype = Datatype(datatype_raw)

    required = raw.get("required", False)
    _require(isinstance(required, bool), "required must be a boolean", f"{path}.required")

    value_set = None
    if datatype is Datatype.CONTROLLED:
        _require("value_set" in raw, "controlled field needs a value_set", f"{path}.value_set")
        value_set = _parse_binding(raw["value_set"], f"{path}.value_set")
    else:
        _require("value_set" not in raw,
                 f"value_set is only valid on controlled fields, not {datatype.value}",
                 f"{path}.value_set")

    value_range = None
    if "range" in raw:
        _require(datatype in NUMERIC_DATATYPES,
                 f"range is only valid on integer/decimal fields, not {datatype.value}",
                 f"{path}.range")
        rng = raw["range"]
        _require(isinstance(rng, dict) and set(rng) == {"min", "max"},
                 "range must be an object with min and max", f"{path}.range")
        lo, hi = rng["min"], rng["max"]
        for bound, key in ((lo, "min"), (hi, "max")):
            _require(isinstance(bound, (int, float)) and not isinstance(bound, bool),
                     f"{key} must be a number", f"{path}.range.{key}")
        _require(lo <= hi, f"min must be <= max (got {lo} > {hi})", f"{path}.range")
        value_range = (lo, hi)

    pattern = raw.get("pattern")
    if pattern is not None:
        _require(isinstance(pattern, str), "pattern must be a string", f"{path}.pattern")
        try:
            re.compile(pattern)
        except re.error as exc:
            raise TemplateSchemaError(f"invalid regular expression: {exc}", f"{path}.pattern")

    for key in ("description", "example"):
        if key in raw:
            _require(isinstance(raw[key], str), f"{key} must be a string", f"{path}.{key}")

    return FieldSpec(
        name=name,
        datatype=datatype,
        required=required,
        value_set=value_set,
        range=value_range,
        pattern=pattern,
        description=raw.get("description"),
        example=raw.get("example"),
    )


def parse_template(document: bytes | str) -> Template:
    """Parse and validate a template document.

    Raises:
        TemplateSyntaxError: the document is not well-formed JSON.
        TemplateSchemaError: an invariant is violated; the error carries the
            path of the offending element.
    """
    if isinstance(document, bytes):
        try:
            document = document.decode("utf-8")
        except UnicodeDecodeError as exc:
            raise TemplateSyntaxError(f"template document is not UTF-8: {exc}")
    try:
        data = json.loads(document)
    except json.JSONDecodeError as exc:
        raise TemplateSyntaxError(f"malformed template document: {exc}")

    _require(isinstance(data, dict), "template document must be a JSON object", "$")
    unknown = set(data) - {"id", "name", "version", "fields"}
    _require(not unknown, f"unknown keys: {sorted(unknown)}", "$")

    template_id = data.get("id")
    _require(isinstance(template_id, str) and template_id != "", "id must be a non-empty string", "id")
    _require(not any(ch.isspace() for ch in template_id), "id must not contain whitespace", "id")
    name = data.get("name")
    _require(isinstance(name, str), "name must be a string", "name")
    version = data.get("version")
    _require(isinstance(version, str), "version must be a string", "version")

    fields_raw = data.get("fields")
    _require(isinstance(fields_raw, list) and fields_raw, "fields must be a non-empty list", "fields")
    fields = []
    seen_names: set[str] = set()
    for i, raw in enumerate(fields_raw):
        spec = _parse_field(raw, f"fields[{i}]")
        _require(spec.name not in seen_names, f"duplicate field name {spec.name!r}", f"fields[{i}].name")
        seen_names.add(spec.name)
        fields.append(spec)

    return Template(id=template_id, name=name, version=version, fields=tuple(fields))


def serialize_template(template: Template) -> bytes:
    """Render a Template back to its document form.

    ``parse_template(serialize_template(t))`` equals ``t``, field order
    preserved.
    """
    doc: dict[str, Any] = {
        "id": template.id,
        "name": template.name,
        "version": template.version,
        "fields": [],
    }
    for spec in template.fields:
        entry: dict[str, Any] = {
            "name": spec.name,
            "datatype": spec.datatype.value,
            "required": spec.required,
        }
        if spec.value_set is not None:
            if spec.value_set.kind == "inline":
                entry["value_set"] = {"kind": "inline", "labels": list(spec.value_set.labels)}
            else:
                entry["value_set"] = {
                    "kind": "terminology",
                    "source_id": spec.value_set.source_id,
                    "branch_id": spec.value_set.branch_id,
                }
        if spec.range is not None:
            entry["range"] = {"min": spec.range[0], "max": spec.range[1]}
        if spec.pattern is not None:
            entry["pattern"] = spec.pattern
        if spec.description is not None:
            entry["description"] = spec.description
        if spec.example is not None:
            entry["example"] = spec.example
        doc["fields"].append(entry)
    return (json.dumps(doc, indent=2, ensure_ascii=False) + "\n").encode("utf-8")
