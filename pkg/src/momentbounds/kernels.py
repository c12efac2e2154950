"""Backend selection for the numerical kernels.

The compiled extension ``momentbounds._kernels`` is used when it imports;
otherwise, or when ``MOMENTBOUNDS_PURE_PYTHON`` is set to a non-empty value,
the numpy implementations in ``momentbounds._pykernels`` are used. ``BACKEND``
names the active choice.
"""
from __future__ import annotations

import os

from . import _pykernels

_accel = None
if not os.environ.get("MOMENTBOUNDS_PURE_PYTHON"):
    try:
        from . import _kernels as _accel
    except ImportError:
        _accel = None

_impl = _accel if _accel is not None else _pykernels
BACKEND = "cython" if _accel is not None else "python"

dot2 = _impl.dot2
sum2 = _impl.sum2
power_moments = _impl.power_moments
minorant_min_gap = _impl.minorant_min_gap
golden_max_F = _impl.golden_max_F


def available_backends() -> dict:
    """Map backend name to kernel module, for tests and benchmarks."""
    backends = {"python": _pykernels}
    if _accel is not None:
        backends["cython"] = _accel
    else:
        try:
            from . import _kernels
        except ImportError:
            pass
        else:
            backends["cython"] = _kernels
    return backends
