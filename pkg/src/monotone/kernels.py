"""Backend selection for the hot kernels.

The compiled extension is used when it imports; otherwise the numpy
reference implementation. Set ``MONOTONE_PURE_PYTHON=1`` to force the latter.
"""
import os

import numpy as np

from . import _pykernels

if os.environ.get("MONOTONE_PURE_PYTHON", "") not in ("", "0"):
    _impl = _pykernels
    BACKEND = "python"
else:
    try:
        from . import _ckernels as _impl
        BACKEND = "cython"
    except ImportError:
        _impl = _pykernels
        BACKEND = "python"


def _c(a):
    return np.ascontiguousarray(a, dtype=np.float64)


def slope_sup(Y, Ys, x, xs, min_dist=1e-12, impl=None):
    return (impl or _impl).slope_sup(_c(Y), _c(Ys), _c(x), _c(xs), float(min_dist))


def related_min(Y, Ys, x, xs, impl=None):
    return (impl or _impl).related_min(_c(Y), _c(Ys), _c(x), _c(xs))


def enlargement_min(Y, Ys, x, xs, eps, weighted, impl=None):
    return (impl or _impl).enlargement_min(
        _c(Y), _c(Ys), _c(x), _c(xs), float(eps), bool(weighted))


def pairwise_min(Y, Ys, impl=None):
    return (impl or _impl).pairwise_min(_c(Y), _c(Ys))


def dykstra_halfspaces(A, b, p, tol=1e-8, max_sweeps=100_000, impl=None):
    w, sweeps, ok = (impl or _impl).dykstra_halfspaces(
        _c(A), _c(b), _c(p), float(tol), int(max_sweeps))
    return np.asarray(w), int(sweeps), bool(ok)
