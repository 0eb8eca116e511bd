"""Backend selection for the integer kernels.

The compiled extension is used when it was built; otherwise the pure-Python
module is loaded. Set ``BSK_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("BSK_PURE_PYTHON"):
    from bsk import _pykernels as _impl
    BACKEND = "python"
else:
    try:
        from bsk import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:  # extension not built
        from bsk import _pykernels as _impl
        BACKEND = "python"

bfs = _impl.bfs
first_nonassociative = _impl.first_nonassociative
closure = _impl.closure
orbit_labels = _impl.orbit_labels


def backends():
    """Return ``{name: module}`` for every importable backend."""
    from bsk import _pykernels
    found = {"python": _pykernels}
    try:
        from bsk import _ckernels
        found["cython"] = _ckernels
    except ImportError:
        pass
    return found
