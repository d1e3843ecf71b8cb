"""Kernel dispatch: the compiled extension when importable, numpy otherwise.

Set ``SIEVELAB_PURE_PYTHON=1`` to force the numpy fallback.
"""

import os

from . import _fallback

if os.environ.get("SIEVELAB_PURE_PYTHON", "") not in ("", "0"):
    _impl = _fallback
else:
    try:
        from . import _core as _impl
    except ImportError:  # extension not built
        _impl = _fallback

BACKEND = _impl.BACKEND
power_residue_histogram = _impl.power_residue_histogram
exp_sums_rational = _impl.exp_sums_rational
cubic_sum = _impl.cubic_sum


def available_backends():
    """Name -> module for every backend that can be imported here."""
    out = {"python": _fallback}
    try:
        from . import _core

        out["compiled"] = _core
    except ImportError:
        pass
    return out
