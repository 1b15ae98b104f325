"""Deterministic random substrate with a selectable backend.

The compiled Cython core is used when available; the pure-Python twin
is the fallback.  Both implement the same MT19937 algorithm, 53-bit
uniform mapping, and distribution transforms, and produce bit-identical
draw sequences for a given seed.  Set the environment variable
``TCSLSIM_PURE=1`` before import to force the pure backend.

Draw accounting is documented in ``tcslsim.rng._pure``.
"""

from __future__ import annotations

import os

from . import _pure

if os.environ.get("TCSLSIM_PURE"):
    _backend = _pure
else:
    try:
        from . import _mtcore as _backend
    except ImportError:  # pragma: no cover - build without a compiler
        _backend = _pure

Mt19937 = _backend.Mt19937
BACKEND = "pure" if _backend is _pure else "compiled"


def backend_name() -> str:
    """Name of the active backend: "compiled" or "pure"."""
    return BACKEND


def seed_generator(seed) -> "Mt19937":
    """Create a generator from a 32-bit seed (state index starts at 624)."""
    return Mt19937(seed)


__all__ = ["Mt19937", "BACKEND", "backend_name", "seed_generator"]
