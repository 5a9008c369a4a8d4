"""Kernel selection: the compiled extension when importable, else pure Python.

Set ``LSBOUNDARY_PURE=1`` to force the fallback.
"""
import os

import numpy as np

from . import _kernels_py

BACKEND = "python"
_impl = _kernels_py
if not os.environ.get("LSBOUNDARY_PURE"):
    try:
        from . import _kernels as _impl  # type: ignore[no-redef]
        BACKEND = "cython"
    except ImportError:
        _impl = _kernels_py


def walk_product(codes, values, impl=None):
    impl = impl or _impl
    return impl.walk_product(np.ascontiguousarray(codes, dtype=np.int8),
                             np.ascontiguousarray(values, dtype=np.float64))


def walk_products(codes, values, offsets, impl=None):
    impl = impl or _impl
    return impl.walk_products(np.ascontiguousarray(codes, dtype=np.int8),
                              np.ascontiguousarray(values, dtype=np.float64),
                              np.ascontiguousarray(offsets, dtype=np.int64))


def crossing_product(D, lsh, lch, impl=None):
    impl = impl or _impl
    arr = [np.ascontiguousarray(x, dtype=np.float64) for x in (D, lsh, lch)]
    return impl.crossing_product(*arr)


def crossing_log_traces(D, lsh, lch, offsets, impl=None):
    impl = impl or _impl
    arr = [np.ascontiguousarray(x, dtype=np.float64) for x in (D, lsh, lch)]
    return np.asarray(impl.crossing_log_traces(*arr, np.ascontiguousarray(offsets, dtype=np.int64)))


def twisted_traces(l, m, k1, k2, impl=None):
    impl = impl or _impl
    arr = [np.ascontiguousarray(x, dtype=np.float64) for x in (l, m, k1, k2)]
    return np.asarray(impl.twisted_traces(*arr))
