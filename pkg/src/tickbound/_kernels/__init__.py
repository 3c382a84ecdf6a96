"""Hot graph kernels with a compiled backend and a pure-Python fallback.

The compiled module is used when it was built and imports cleanly; set
``TICKBOUND_PURE_PYTHON=1`` to force the fallback.  ``BACKEND`` names the
active implementation.
"""
import os

import numpy as np

from . import _pykernels

UNREACHABLE = _pykernels.UNREACHABLE
UNBOUNDED = _pykernels.UNBOUNDED

_impl = _pykernels
BACKEND = "python"
if not os.environ.get("TICKBOUND_PURE_PYTHON"):
    try:
        from . import _ckernels as _impl  # type: ignore[no-redef]

        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels


def available_backends():
    names = {"python": _pykernels}
    try:
        from . import _ckernels

        names["cython"] = _ckernels
    except ImportError:
        pass
    return names


class Kernels:
    """Thin wrapper fixing dtypes so both backends see identical inputs."""

    def __init__(self, impl):
        self.impl = impl

    def reach_mask(self, ptr, dst, init, alive):
        return np.asarray(self.impl.reach_mask(_i(ptr), _i(dst), int(init), _b(alive)), dtype=np.uint8)

    def coreach_mask(self, ptr, dst, marked, alive):
        return np.asarray(self.impl.coreach_mask(_i(ptr), _i(dst), _b(marked), _b(alive)), dtype=np.uint8)

    def counter_expand(self, ptr, evt, dst, marked, tick, budget, init, lifo=True):
        return self.impl.counter_expand(
            _i(ptr), _i(evt), _i(dst), _b(marked), int(tick), int(budget), int(init), bool(lifo)
        )

    def tick_longest(self, ptr, evt, dst, tick, target, alive):
        return np.asarray(
            self.impl.tick_longest(_i(ptr), _i(evt), _i(dst), int(tick), _b(target), _b(alive)),
            dtype=np.int64,
        )


def _i(a):
    return np.ascontiguousarray(a, dtype=np.int64)


def _b(a):
    return np.ascontiguousarray(a, dtype=np.uint8)


kernels = Kernels(_impl)


def use_backend(name):
    """Switch the process-wide backend; returns the previous name."""
    global BACKEND
    prev = BACKEND
    kernels.impl = available_backends()[name]
    BACKEND = name
    return prev
