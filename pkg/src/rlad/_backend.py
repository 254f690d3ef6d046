"""Pick the event-loop implementation once, at import.

The compiled extension is preferred; setting ``RLAD_PURE_PYTHON=1`` (or a
missing build) selects the pure-Python loops, which produce identical output.
"""

from __future__ import annotations

import os

from . import _purepy

COMPILED = None
if not os.environ.get("RLAD_PURE_PYTHON"):
    try:
        from . import _core as COMPILED
    except ImportError:  # source checkout without a built extension
        COMPILED = None

loops = COMPILED if COMPILED is not None else _purepy
name = "compiled" if COMPILED is not None else "python"


def get(which: str | None = None):
    """Return the loop module: ``None`` for the default, or "compiled" / "python"."""
    if which is None:
        return loops
    if which == "python":
        return _purepy
    if which == "compiled":
        if COMPILED is None:
            raise ImportError("rlad._core is not built (or RLAD_PURE_PYTHON is set)")
        return COMPILED
    raise ValueError(f"unknown backend {which!r}")
