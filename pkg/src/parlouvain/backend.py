"""Kernel backend selection: compiled extension with pure-Python fallback.

The compiled module is preferred when importable. Set the environment
variable ``PARLOUVAIN_BACKEND=python`` (or call :func:`use`) to force the
fallback; both backends produce bit-identical results.
"""

from __future__ import annotations

import logging
import os

from . import _kernels_py as _python

log = logging.getLogger(__name__)

try:
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

_BY_NAME = {"python": _python, "compiled": _compiled}


def _initial():
    requested = os.environ.get("PARLOUVAIN_BACKEND", "auto").strip().lower()
    if requested == "python":
        return _python
    if requested == "compiled":
        if _compiled is None:
            raise ImportError(
                "PARLOUVAIN_BACKEND=compiled but the extension is not built")
        return _compiled
    if _compiled is None:
        log.info("compiled kernels unavailable, using the pure-Python fallback")
        return _python
    return _compiled


_active = _initial()


def active():
    """The kernel module currently in use."""
    return _active


def name() -> str:
    return "compiled" if _active is _compiled else "python"


def has_compiled() -> bool:
    return _compiled is not None


def use(which: str):
    """Switch backends ("compiled", "python", or "auto"); returns the old name."""
    global _active
    previous = name()
    key = which.strip().lower()
    if key == "auto":
        _active = _compiled if _compiled is not None else _python
        return previous
    if key not in _BY_NAME:
        raise ValueError(f"unknown backend {which!r}")
    module = _BY_NAME[key]
    if module is None:
        raise ValueError("compiled backend requested but the extension is not built")
    _active = module
    return previous
