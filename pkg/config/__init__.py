"""Configuration module for the prefiltering simulator."""

from .settings import settings, Settings

__all__ = ["settings", "Settings"]
