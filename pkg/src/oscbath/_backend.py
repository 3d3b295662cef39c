"""Integration-kernel backend selection.

The compiled extension is preferred when it built; the pure-Python kernels
are a drop-in replacement. Set OSCBATH_BACKEND=python or =compiled to force
one (checked once, at first use).
"""
from __future__ import annotations

import importlib
import os

_ACTIVE = None

_CHOICES = {
    "compiled": "oscbath._core",
    "c": "oscbath._core",
    "python": "oscbath._core_py",
    "py": "oscbath._core_py",
}


def _load(choice: str):
    if choice in _CHOICES:
        return importlib.import_module(_CHOICES[choice])
    if choice != "auto":
        raise ValueError(f"unknown backend {choice!r}; "
                         f"pick one of {sorted(_CHOICES)} or 'auto'")
    try:
        return importlib.import_module("oscbath._core")
    except ImportError:
        return importlib.import_module("oscbath._core_py")


def active():
    """The kernel module in use, resolving it on first call."""
    global _ACTIVE
    if _ACTIVE is None:
        _ACTIVE = _load(os.environ.get("OSCBATH_BACKEND", "auto").lower())
    return _ACTIVE


def set_backend(choice: str):
    """Force a specific backend (tests and benchmarks)."""
    global _ACTIVE
    _ACTIVE = _load(choice)
    return _ACTIVE


def backend_name() -> str:
    return active().__name__.rsplit(".", 1)[1].lstrip("_")
