"""Stepping-core selection: compiled extension when built, else pure Python.

NIBBLETAPE_BACKEND=pure|compiled forces the choice; ``compiled`` raises
if the extension is missing instead of silently falling back.
"""

from __future__ import annotations

import os

from . import _pycore

_choice = os.environ.get("NIBBLETAPE_BACKEND", "auto").lower()
if _choice not in ("auto", "pure", "compiled"):
    raise RuntimeError(
        f"NIBBLETAPE_BACKEND must be auto, pure or compiled, not {_choice!r}"
    )

if _choice == "pure":
    core = _pycore
else:
    try:
        from . import _core as core  # type: ignore[no-redef]
    except ImportError:
        if _choice == "compiled":
            raise RuntimeError(
                "NIBBLETAPE_BACKEND=compiled but the extension is not built; "
                "reinstall without NIBBLETAPE_NO_EXT"
            ) from None
        core = _pycore

BACKEND: str = core.BACKEND_NAME


def get_core(name: str):
    """Fetch a specific core by name ('pure' or 'compiled')."""
    if name == "pure":
        return _pycore
    if name == "compiled":
        from . import _core

        return _core
    raise ValueError(f"unknown backend {name!r}")


def available_backends() -> tuple[str, ...]:
    try:
        from . import _core  # noqa: F401
    except ImportError:
        return ("pure",)
    return ("pure", "compiled")
