"""Kernel selection: compiled extension if built, pure fallback otherwise.

Set HECKEDIST_PURE_PYTHON=1 to force the fallback (used by the benchmark
and by tests that cross-check the two implementations).
"""

from __future__ import annotations

import os

from . import _purepoly

try:
    from . import _fastpoly  # type: ignore[attr-defined]

    HAVE_COMPILED = True
except ImportError:  # pragma: no cover - depends on build
    _fastpoly = None
    HAVE_COMPILED = False

if HAVE_COMPILED and not os.environ.get("HECKEDIST_PURE_PYTHON"):
    _active = _fastpoly
else:
    _active = _purepoly

mul = _active.mul
rem = _active.rem
divmod_poly = _active.divmod_poly
gcd = _active.gcd
powmod = _active.powmod


def backend_name() -> str:
    return "compiled" if _active is _fastpoly else "pure-python"


def implementations() -> dict:
    """All available kernel implementations keyed by name."""
    impls = {"pure-python": _purepoly}
    if HAVE_COMPILED:
        impls["compiled"] = _fastpoly
    return impls
