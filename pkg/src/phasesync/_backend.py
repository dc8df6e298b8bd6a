"""Pick the kernel implementation once, at import.

The compiled module is used when it imports cleanly, unless the environment
variable ``PHASESYNC_PURE_PYTHON`` is set to a non-empty value other than 0.
"""
import os

from . import _pykernels

_force_py = os.environ.get("PHASESYNC_PURE_PYTHON", "") not in ("", "0")

kernels = _pykernels
BACKEND = "python"
if not _force_py:
    try:
        from . import _ckernels
    except ImportError:
        pass
    else:
        kernels = _ckernels
        BACKEND = "cython"

__all__ = ["kernels", "BACKEND"]
