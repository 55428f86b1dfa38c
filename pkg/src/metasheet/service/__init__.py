"""HTTP facade over the metasheet core."""

from .app import create_app
from .sessions import Session, SessionStore
from .settings import Settings
from .store import TemplateStore

__all__ = ["Session", "SessionStore", "Settings", "TemplateStore", "create_app"]
