"""Collection service: task assignment, annotation intake, trial
sessions, and append-only persistence behind an HTTP API."""

from .config import ServiceConfig
from .store import Store, StoreError
from .app import create_app

__all__ = ["ServiceConfig", "Store", "StoreError", "create_app"]
