"""Hot-kernel backend selection.

The compiled Cython extension is preferred when importable; otherwise
the numpy fallback is used. Set ACTIVESPLIT_PURE=1 to force the
fallback (useful when comparing backends or debugging).
"""

import os

from . import pure

BACKENDS = {"pure": pure}
try:
    from . import _ck

    BACKENDS["compiled"] = _ck
except ImportError:
    _ck = None

if os.environ.get("ACTIVESPLIT_PURE", "") not in ("", "0") or _ck is None:
    BACKEND = "pure"
else:
    BACKEND = "compiled"

_impl = BACKENDS[BACKEND]


def get_backend(name: str):
    """Fetch a backend module by name; None if unavailable."""
    return BACKENDS.get(name)


build_forest = _impl.build_forest
svr_solve = _impl.svr_solve
