"""Kernel backend selection.

The compiled extension is used when it imports; otherwise the pure-Python
twin.  Set ``GRAEVMETRIC_PURE_PYTHON=1`` to force the fallback.
"""
import os

from . import _pykernels

try:
    if os.environ.get("GRAEVMETRIC_PURE_PYTHON"):
        raise ImportError("pure Python forced")
    from . import _kernels as _compiled
except ImportError:
    _compiled = None

BACKENDS = {"python": _pykernels}
if _compiled is not None:
    BACKENDS["compiled"] = _compiled

BACKEND = "compiled" if _compiled is not None else "python"
_impl = BACKENDS[BACKEND]

bruteforce_min = _impl.bruteforce_min
capped_search = _impl.capped_search
