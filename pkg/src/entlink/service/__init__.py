"""HTTP service wrapping the core link-analysis package."""

from .app import create_app

__all__ = ["create_app"]
