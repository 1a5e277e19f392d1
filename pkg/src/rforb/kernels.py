"""Backend selection for the search kernels.

The compiled extension is used when it imports; ``RFORB_PURE_PYTHON=1``
forces the pure-Python fallback.
"""
from __future__ import annotations

import os

from . import _kernels_py

BACKENDS = {"python": _kernels_py}

try:
    from . import _kernels as _compiled  # type: ignore[attr-defined]
except ImportError:  # extension not built
    _compiled = None
else:
    BACKENDS["cython"] = _compiled

if _compiled is not None and os.environ.get("RFORB_PURE_PYTHON", "") in ("", "0"):
    DEFAULT_BACKEND = "cython"
else:
    DEFAULT_BACKEND = "python"


def get_backend(name: str | None = None):
    name = name or DEFAULT_BACKEND
    try:
        return BACKENDS[name]
    except KeyError:
        raise ValueError(f"kernel backend {name!r} unavailable; have {sorted(BACKENDS)}") from None


def available_backends() -> list[str]:
    return sorted(BACKENDS)
