"""Backend selection for the path-simulation kernels.

``HYPK_BACKEND`` chooses between ``numba`` (compiled, parallel over paths)
and ``numpy`` (vectorised lock-step fallback).  The default ``auto`` picks
numba when it imports.  ``HYPK_THREADS`` caps the numba worker count.
"""

from __future__ import annotations

import importlib.util
import os

from hypk.errors import DomainError

BACKENDS = ("numba", "numpy")


def numba_available() -> bool:
    return importlib.util.find_spec("numba") is not None


def resolve_backend(requested: str | None = None) -> str:
    """Return the backend name to use, validating ``requested`` or the env flag."""
    name = (requested or os.environ.get("HYPK_BACKEND") or "auto").strip().lower()
    if name == "auto":
        return "numba" if numba_available() else "numpy"
    if name not in BACKENDS:
        raise DomainError(f"unknown backend {name!r}; choose one of {BACKENDS + ('auto',)}")
    if name == "numba" and not numba_available():
        raise DomainError("backend 'numba' requested but numba is not installed")
    return name


def configure_threads() -> int | None:
    """Apply ``HYPK_THREADS`` to numba; returns the thread count in effect."""
    raw = os.environ.get("HYPK_THREADS")
    if not numba_available():
        return None
    import numba

    if "NUMBA_THREADING_LAYER" not in os.environ:
        # an old system TBB only triggers a warning; prefer the other layers
        numba.config.THREADING_LAYER_PRIORITY = ["omp", "workqueue", "tbb"]
    if raw:
        try:
            want = int(raw)
        except ValueError:
            raise DomainError(f"HYPK_THREADS must be an integer, got {raw!r}") from None
        if want < 1:
            raise DomainError("HYPK_THREADS must be >= 1")
        numba.set_num_threads(min(want, numba.config.NUMBA_NUM_THREADS))
    return numba.get_num_threads()
