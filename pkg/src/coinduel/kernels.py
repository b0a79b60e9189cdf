"""Select the compiled kernels when available, else the pure-Python twin.

Set ``COINDUEL_PURE_PYTHON=1`` to force the fallback.
"""
import os

if os.environ.get("COINDUEL_PURE_PYTHON", "") not in ("", "0"):
    from . import _kernels_py as _impl
else:
    try:
        from . import _kernels as _impl
    except ImportError:  # extension not built
        from . import _kernels_py as _impl

IMPLEMENTATION = _impl.IMPLEMENTATION
UNIT_ROUNDOFF = 2.0**-53
indicator_sign = _impl.indicator_sign
scan_optimal = _impl.scan_optimal
classify_point = _impl.classify_point
classify_batch = _impl.classify_batch
BATCH_FIELDS = _impl.BATCH_FIELDS
