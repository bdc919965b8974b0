"""Enumeration backend selection.

Imports the compiled Cython kernel when available and falls back to the
pure-Python implementation otherwise. Set MLMIMO_PURE_PYTHON=1 to force
the fallback (used by the backend-equivalence tests and the benchmark).
"""

import os

if os.environ.get("MLMIMO_PURE_PYTHON"):
    from . import _enum_py as _impl
else:
    try:
        from . import _enum_cy as _impl  # type: ignore[attr-defined]
    except ImportError:
        from . import _enum_py as _impl

BACKEND = _impl.BACKEND
decode_box = _impl.decode_box
decode_unbounded = _impl.decode_unbounded
shortest_nonzero = _impl.shortest_nonzero
