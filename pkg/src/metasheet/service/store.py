"""Template registry: an in-memory map, optionally persisted to a directory.

The directory holds one ``<id>.json`` template document per template; all
documents load at startup (fail fast on invalid ones) and PUTs write back
through.  Desk-scale by design -- no database.
"""

from __future__ import annotations

import threading
from pathlib import Path

from ..templates import Template, parse_template, serialize_template


class TemplateStore:
    def __init__(self, directory: str | Path | None = None) -> None:
        self.directory = Path(directory) if directory is not None else None
        self._templates: dict[str, Template] = {}
        self._lock = threading.Lock()
        if self.directory is not None and self.directory.exists():
            for path in sorted(self.directory.glob("*.json")):
                template = parse_template(path.read_bytes())
                self._templates[template.id] = template

    def get(self, template_id: str) -> Template | None:
        with self._lock:
            return self._templates.get(template_id)

    def list(self) -> list[Template]:
        with self._lock:
            return sorted(self._templates.values(), key=lambda t: t.id)

    def put(self, template: Template) -> bool:
        """Register or replace a template; returns True when it was new."""
        with self._lock:
            created = template.id not in self._templates
            self._templates[template.id] = template
            if self.directory is not None:
                self.directory.mkdir(parents=True, exist_ok=True)
                (self.directory / f"{template.id}.json").write_bytes(
                    serialize_template(template)
                )
        return created
