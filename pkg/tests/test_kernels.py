import os
import subprocess
import sys

import numpy as np
import pytest
from hypothesis import given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays

from monotone import _pykernels, kernels

ck = pytest.importorskip("monotone._ckernels", reason="compiled kernels not built")

coord = st.floats(-5, 5, allow_nan=False, width=64)


@st.composite
def graph_case(draw, min_rows=1):
    n = draw(st.integers(1, 4))
    m = draw(st.integers(min_rows, 40))
    Y = draw(arrays(np.float64, (m, n), elements=coord))
    Ys = draw(arrays(np.float64, (m, n), elements=coord))
    x = draw(arrays(np.float64, (n,), elements=coord))
    xs = draw(arrays(np.float64, (n,), elements=coord))
    return Y, Ys, x, xs


def _same(a, b, tol=1e-12):
    a, b = np.ravel(np.asarray(a, float)), np.ravel(np.asarray(b, float))
    assert a.shape == b.shape
    np.testing.assert_allclose(a, b, rtol=tol, atol=tol)


@given(graph_case())
def test_slope_sup_backends_agree(case):
    _same(kernels.slope_sup(*case, impl=_pykernels)[0], kernels.slope_sup(*case, impl=ck)[0])


@given(graph_case())
def test_related_min_backends_agree(case):
    _same(kernels.related_min(*case, impl=_pykernels)[0], kernels.related_min(*case, impl=ck)[0])


@given(graph_case(), st.floats(0, 3), st.booleans())
def test_enlargement_min_backends_agree(case, eps, weighted):
    a = kernels.enlargement_min(*case, eps, weighted, impl=_pykernels)[0]
    b = kernels.enlargement_min(*case, eps, weighted, impl=ck)[0]
    _same(a, b)


@given(graph_case(min_rows=2))
def test_pairwise_min_backends_agree(case):
    Y, Ys, _, _ = case
    _same(kernels.pairwise_min(Y, Ys, impl=_pykernels)[0], kernels.pairwise_min(Y, Ys, impl=ck)[0])


@given(st.integers(1, 3), st.integers(1, 8), st.data())
def test_dykstra_backends_agree(n, m, data):
    A = data.draw(arrays(np.float64, (m, n), elements=st.floats(-2, 2, width=64)))
    p = data.draw(arrays(np.float64, (n,), elements=coord))
    # b from a known interior point keeps the system feasible
    w0 = data.draw(arrays(np.float64, (n,), elements=st.floats(-1, 1, width=64)))
    b = A @ w0 - 0.1
    wa, _, oka = kernels.dykstra_halfspaces(A, b, p, impl=_pykernels)
    wb, _, okb = kernels.dykstra_halfspaces(A, b, p, impl=ck)
    assert oka == okb
    _same(wa, wb, tol=1e-9)


def test_backend_flag_selects_fallback():
    env = dict(os.environ, MONOTONE_PURE_PYTHON="1")
    out = subprocess.run([sys.executable, "-c", "from monotone import kernels; print(kernels.BACKEND)"],
                         env=env, capture_output=True, text=True, check=True)
    assert out.stdout.strip() == "python"
    assert kernels.BACKEND in ("cython", "python")
