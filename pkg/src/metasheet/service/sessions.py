"""Upload sessions: the only shared mutable state in the service.

A session pins one upload (bytes, parsed table, template, resolved value
sets) together with its latest validation report so that /suggest and
/repair can refer back to it.  Sessions expire a fixed TTL after creation
and are swept lazily.  Each session carries its own lock; repair requests
for one session serialize on it while different sessions proceed in
parallel.
"""

from __future__ import annotations

import threading
import time
import uuid
from dataclasses import dataclass, field
from typing import Callable, Mapping

from ..sheets import Table
from ..templates import Template
from ..terminology import ValueSet
from ..validate import ValidationReport


@dataclass
class Session:
    id: str
    filename: str
    format: str  # "tsv" | "xlsx"
    data: bytes
    table: Table
    template: Template
    sets: Mapping[str, ValueSet]
    report: ValidationReport
    expires_at: float
    lock: threading.Lock = field(default_factory=threading.Lock, repr=False)


class SessionStore:
    def __init__(self, ttl: float, clock: Callable[[], float] = time.monotonic) -> None:
        self.ttl = ttl
        self._clock = clock
        self._sessions: dict[str, Session] = {}
        self._lock = threading.Lock()

    def _sweep(self, now: float) -> None:
        expired = [sid for sid, s in self._sessions.items() if s.expires_at <= now]
        for sid in expired:
            del self._sessions[sid]

    def create(
        self,
        *,
        filename: str,
        format: str,
        data: bytes,
        table: Table,
        template: Template,
        sets: Mapping[str, ValueSet],
        report: ValidationReport,
    ) -> Session:
        now = self._clock()
        session = Session(
            id=uuid.uuid4().hex,
            filename=filename,
            format=format,
            data=data,
            table=table,
            template=template,
            sets=sets,
            report=report,
            expires_at=now + self.ttl,
        )
        with self._lock:
            self._sweep(now)
            self._sessions[session.id] = session
        return session

    def get(self, session_id: str) -> Session | None:
        now = self._clock()
        with self._lock:
            self._sweep(now)
            return self._sessions.get(session_id)
