"""Kernel backend selection.

The hot inner loops (pivoted QR with norm downdating, rank-1 reflector
application) exist twice: as numba-jitted loops and as pure numpy. The
environment variable ``CCEQR_BACKEND`` picks one at import time:

* ``auto`` (default) - numba when importable, numpy otherwise
* ``numba``          - require the jitted kernels
* ``numpy``          - force the pure-numpy fallback
"""

import os

_CHOICES = ("auto", "numba", "numpy")


def load_kernels(name):
    """Import and return the kernel module for an explicit backend name."""
    if name == "numba":
        from . import _kernels_numba
        return _kernels_numba
    if name == "numpy":
        from . import _kernels_numpy
        return _kernels_numpy
    raise ValueError(f"unknown kernel backend {name!r}; expected 'numba' or 'numpy'")


def _select():
    requested = os.environ.get("CCEQR_BACKEND", "auto").strip().lower()
    if requested not in _CHOICES:
        raise ValueError(
            f"CCEQR_BACKEND={requested!r} is not valid; choose one of {_CHOICES}"
        )
    if requested == "auto":
        try:
            return "numba", load_kernels("numba")
        except ImportError:
            return "numpy", load_kernels("numpy")
    return requested, load_kernels(requested)


BACKEND, kernels = _select()
