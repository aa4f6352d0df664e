"""Backend selection for the sieve kernels.

The compiled extension is used when importable; set ``MULTIQUAD_PURE_PYTHON=1``
to force the numpy fallback.
"""

import os

from . import _kernels_py

try:
    if os.environ.get("MULTIQUAD_PURE_PYTHON"):
        raise ImportError("pure-python backend requested")
    from . import _kernels as _impl

    BACKEND = "cython"
except ImportError:
    _impl = _kernels_py
    BACKEND = "python"

sieve_segment = _impl.sieve_segment
odd_squarefree_histogram = _impl.odd_squarefree_histogram


def backends():
    """Mapping of every importable backend name to its module."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels

        found["cython"] = _kernels
    except ImportError:
        pass
    return found
