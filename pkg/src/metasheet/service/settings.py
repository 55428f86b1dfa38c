"""Service configuration, from constructor arguments or METASHEET_* env vars."""

from __future__ import annotations

import os
from dataclasses import dataclass, field

DEFAULT_SESSION_TTL = 60 * 60.0
DEFAULT_MAX_UPLOAD_BYTES = 20 * 1024 * 1024
DEFAULT_TERMINOLOGY_TTL = 24 * 60 * 60.0


@dataclass
class Settings:
    host: str = "127.0.0.1"
    port: int = 8000
    templates_dir: str | None = None
    fixtures_dir: str | None = None
    terminology_mode: str = "fixture"  # "fixture" | "live"
    terminology_url: str | None = None
    terminology_api_key: str | None = None
    terminology_ttl: float = DEFAULT_TERMINOLOGY_TTL
    session_ttl: float = DEFAULT_SESSION_TTL
    max_upload_bytes: int = DEFAULT_MAX_UPLOAD_BYTES
    cors_origins: list[str] = field(default_factory=lambda: ["*"])

    @classmethod
    def from_env(cls, **overrides) -> "Settings":
        env = os.environ
        settings = cls(
            host=env.get("METASHEET_HOST", "127.0.0.1"),
            port=int(env.get("METASHEET_PORT", "8000")),
            templates_dir=env.get("METASHEET_TEMPLATES_DIR"),
            fixtures_dir=env.get("METASHEET_FIXTURES_DIR"),
            terminology_mode=env.get("METASHEET_TERMINOLOGY_MODE", "fixture"),
            terminology_url=env.get("METASHEET_TERMINOLOGY_URL"),
            terminology_api_key=env.get("METASHEET_TERMINOLOGY_API_KEY"),
            terminology_ttl=float(env.get("METASHEET_TERMINOLOGY_TTL", DEFAULT_TERMINOLOGY_TTL)),
            session_ttl=float(env.get("METASHEET_SESSION_TTL", DEFAULT_SESSION_TTL)),
            max_upload_bytes=int(env.get("METASHEET_MAX_UPLOAD_MB", "20")) * 1024 * 1024,
            cors_origins=[
                origin.strip()
                for origin in env.get("METASHEET_CORS_ORIGINS", "*").split(",")
                if origin.strip()
            ],
        )
        for key, value in overrides.items():
            if value is not None:
                setattr(settings, key, value)
        return settings
