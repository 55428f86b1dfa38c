"""Resolution of value-set bindings to permissible labels and synonyms.

Inline bindings resolve locally.  Terminology bindings go to a backing
store -- either a directory of fixture files (the default, fully offline)
or a remote HTTP service -- and results are cached per (source_id,
branch_id) with a time-to-live.

Fixture layout: ``<fixtures>/<source_id>/<branch_id>.json`` holding::

    {"id": "units/time", "labels": ["Year", "Month", "Day"],
     "synonyms": {"Year": ["yr"]}, "term_iris": {"Year": "http://..."}}

The live protocol is a GET of ``<base_url>/<source_id>/<branch_id>``
returning the same JSON shape; an API key, when configured, rides along
as the ``X-API-Key`` header.
"""

from __future__ import annotations

import json
import threading
import time
from dataclasses import dataclass, field
from pathlib import Path
from typing import Callable, Mapping

from .errors import (
    TerminologyError,
    TerminologyUnavailableError,
    UnknownValueSetError,
)
from .templates import ValueSetBinding

__all__ = ["ValueSet", "TerminologyClient", "resolve_value_set"]

DEFAULT_TTL_SECONDS = 24 * 60 * 60.0

# transport(url, headers) -> (status_code, body bytes); injectable so tests
# can prove fixture mode never touches the network.
Transport = Callable[[str, Mapping[str, str]], tuple[int, bytes]]


@dataclass(frozen=True)
class ValueSet:
    """Permissible labels for a controlled field, plus synonym expansion."""

    id: str
    labels: tuple[str, ...]
    synonyms: Mapping[str, tuple[str, ...]] = field(default_factory=dict)
    term_iris: Mapping[str, str] | None = None

    def __post_init__(self) -> None:
        if len(set(self.labels)) != len(self.labels):
            raise ValueError(f"value set {self.id!r} has duplicate labels")
        folded = {label.lower(): label for label in self.labels}
        for label, synonyms in self.synonyms.items():
            if label not in self.labels:
                raise ValueError(f"synonym key {label!r} is not a label of {self.id!r}")
            for synonym in synonyms:
                owner = folded.get(synonym.strip().lower())
                if owner is not None and owner != label:
                    raise ValueError(
                        f"synonym {synonym!r} of {label!r} collides with label {owner!r}"
                    )


def _parse_payload(raw: bytes, default_id: str, origin: str) -> ValueSet:
    try:
        data = json.loads(raw.decode("utf-8"))
    except (UnicodeDecodeError, json.JSONDecodeError) as exc:
        raise TerminologyError(f"{origin}: malformed value-set payload: {exc}")
    if not isinstance(data, dict) or not isinstance(data.get("labels"), list):
        raise TerminologyError(f"{origin}: payload must be an object with a labels list")
    labels = tuple(str(v) for v in data["labels"])
    synonyms_raw = data.get("synonyms", {})
    if not isinstance(synonyms_raw, dict):
        raise TerminologyError(f"{origin}: synonyms must be an object")
    synonyms = {str(k): tuple(str(s) for s in v) for k, v in synonyms_raw.items()}
    iris_raw = data.get("term_iris")
    term_iris = {str(k): str(v) for k, v in iris_raw.items()} if isinstance(iris_raw, dict) else None
    try:
        return ValueSet(
            id=str(data.get("id", default_id)),
            labels=labels,
            synonyms=synonyms,
            term_iris=term_iris,
        )
    except ValueError as exc:
        raise TerminologyError(f"{origin}: {exc}")


def _default_transport(url: str, headers: Mapping[str, str]) -> tuple[int, bytes]:
    import httpx

    try:
        response = httpx.get(url, headers=dict(headers), timeout=30.0)
    except httpx.HTTPError as exc:
        raise TerminologyUnavailableError(f"terminology service unreachable: {exc}")
    return response.status_code, response.content


class TerminologyClient:
    """Resolves terminology bindings with an in-memory TTL cache.

    Safe for concurrent callers: the cache tolerates concurrent read/insert
    and duplicate fetches of the same binding simply overwrite each other.
    """

    def __init__(
        self,
        mode: str = "fixture",
        *,
        fixtures_dir: str | Path | None = None,
        base_url: str | None = None,
        api_key: str | None = None,
        ttl: float = DEFAULT_TTL_SECONDS,
        transport: Transport | None = None,
        clock: Callable[[], float] = time.monotonic,
    ) -> None:
        if mode not in ("fixture", "live"):
            raise ValueError(f"mode must be 'fixture' or 'live', got {mode!r}")
        if mode == "fixture" and fixtures_dir is None:
            raise ValueError("fixture mode needs a fixtures_dir")
        if mode == "live" and not base_url:
            raise ValueError("live mode needs a base_url")
        self.mode = mode
        self.fixtures_dir = Path(fixtures_dir) if fixtures_dir is not None else None
        self.base_url = base_url.rstrip("/") if base_url else None
        self.api_key = api_key
        self.ttl = ttl
        self._transport = transport or _default_transport
        self._clock = clock
        self._cache: dict[tuple[str, str], tuple[float, ValueSet]] = {}
        self._lock = threading.Lock()

    def resolve(self, binding: ValueSetBinding) -> ValueSet:
        """Resolve a binding to a ValueSet.

        Inline bindings return immediately with an empty synonym map and no
        caching or I/O.  Terminology bindings consult the cache first; within
        the TTL, repeated resolutions return the same value.

        Raises:
            UnknownValueSetError: the source/branch does not exist.
            TerminologyUnavailableError: live service unreachable.
            TerminologyError: malformed payload.
        """
        if binding.kind == "inline":
            return ValueSet(id="inline", labels=binding.labels)

        key = (binding.source_id, binding.branch_id)
        now = self._clock()
        with self._lock:
            hit = self._cache.get(key)
            if hit is not None and hit[0] > now:
                return hit[1]

        value_set = self._fetch(binding)
        with self._lock:
            self._cache[key] = (now + self.ttl, value_set)
        return value_set

    def _fetch(self, binding: ValueSetBinding) -> ValueSet:
        origin = f"{binding.source_id}/{binding.branch_id}"
        if self.mode == "fixture":
            path = self.fixtures_dir / binding.source_id / f"{binding.branch_id}.json"
            try:
                raw = path.read_bytes()
            except FileNotFoundError:
                raise UnknownValueSetError(f"no fixture for value set {origin!r} (looked at {path})")
            except OSError as exc:
                raise TerminologyError(f"cannot read fixture {path}: {exc}")
            return _parse_payload(raw, origin, f"fixture {path}")

        url = f"{self.base_url}/{binding.source_id}/{binding.branch_id}"
        headers = {"Accept": "application/json"}
        if self.api_key:
            headers["X-API-Key"] = self.api_key
        status, body = self._transport(url, headers)
        if status == 404:
            raise UnknownValueSetError(f"terminology service knows no value set {origin!r}")
        if status != 200:
            raise TerminologyUnavailableError(f"terminology service returned HTTP {status} for {origin!r}")
        return _parse_payload(body, origin, url)


def resolve_value_set(binding: ValueSetBinding, client: TerminologyClient | None = None) -> ValueSet:
    """Resolve any binding; terminology bindings require a client."""
    if binding.kind == "inline":
        return ValueSet(id="inline", labels=binding.labels)
    if client is None:
        raise TerminologyError(
            f"value set {binding.source_id}/{binding.branch_id} needs a terminology client"
        )
    return client.resolve(binding)
