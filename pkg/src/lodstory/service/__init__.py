"""HTTP catalogue service: story CRUD, previews, a SPARQL proxy, tiered
authentication, and publication to static-site targets."""

from .app import create_app
from .auth import AuthProvider, FileAuthProvider, Principal, authenticate
from .config import ServiceConfig
from .publish import PublishTarget, publish_story, rebuild_site_index
from .store import StoryStore

__all__ = [
    "AuthProvider",
    "FileAuthProvider",
    "Principal",
    "PublishTarget",
    "ServiceConfig",
    "StoryStore",
    "authenticate",
    "create_app",
    "publish_story",
    "rebuild_site_index",
]
