"""Kernel backend selection.

The compiled extension is used when importable; setting the environment
variable ``TETRAPLECTIC_PURE_PYTHON=1`` forces the numpy fallback.
"""

import os

from . import _kernels_py

if os.environ.get("TETRAPLECTIC_PURE_PYTHON", "") not in ("", "0"):
    kernels = _kernels_py
else:
    try:
        from . import _kernels as kernels
    except ImportError:  # extension not built
        kernels = _kernels_py

BACKEND = kernels.NAME


def available():
    """All importable backends, keyed by name (used by tests and the benchmark)."""
    found = {"python": _kernels_py}
    try:
        from . import _kernels
    except ImportError:
        pass
    else:
        found[_kernels.NAME] = _kernels
    return found
