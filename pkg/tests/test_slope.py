import math

import numpy as np
import pytest

from monotone.errors import InvalidInput
from monotone.operators import (BoxNormalCone, GraphSample, Linear, NormSubdiff, catalog,
                                monotone_related, sample_graph)
from monotone.slope import (image_distance, regularity_gap, slope_enlarged, slope_estimate,
                            slope_exact)

TOL = 1e-3
ROT = Linear([[0.0, -1.0], [1.0, 0.0]])
ID1 = Linear([[1.0]])
BOX1 = BoxNormalCone([0.0], [1.0])


def _brute_slope(Y, Ys, x, xs):
    best = 0.0
    for y, ys in zip(Y, Ys):
        r = np.linalg.norm(y - x)
        if r >= 1e-12:
            best = max(best, float((xs - ys) @ (y - x) / r))
    return best


# --- slope_exact --------------------------------------------------------------

def test_slope_exact_examples():
    s = GraphSample([[0.0], [1.0]], [[0.0], [1.0]])
    assert slope_exact(s, [2.0], [0.0]).value == pytest.approx(1)
    assert slope_exact(s, [1.0], [1.0]).value == 0
    assert slope_exact(GraphSample([[0.0]], [[0.0]]), [1.0], [-1.0]).value == pytest.approx(1)


def test_slope_exact_degenerate():
    r = slope_exact(GraphSample([[1.0]], [[0.0]]), [1.0], [5.0])
    assert r.value == 0 and r.degenerate


def test_slope_exact_matches_brute_force(rng):
    s = sample_graph(ROT, 2.0, 0.25)
    for _ in range(20):
        x, xs = rng.uniform(-2, 2, 2), rng.uniform(-3, 3, 2)
        assert slope_exact(s, x, xs).value == pytest.approx(_brute_slope(s.Y, s.Ys, x, xs), abs=1e-12)


def test_slope_zero_iff_monotone_related(rng):
    s = sample_graph(ID1, 2.0, 0.25)
    for _ in range(200):
        x, xs = rng.uniform(-2, 2, 1), rng.uniform(-2, 2, 1)
        related, _ = monotone_related(x, xs, s, 0.0)
        assert (slope_exact(s, x, xs).value == 0) == related


# --- slope_estimate -----------------------------------------------------------

def test_slope_estimate_rotation():
    r = slope_estimate(ROT, [0, 0], [1, 0], TOL)
    assert r.value == pytest.approx(1, abs=TOL)
    assert r.is_lower_bound


def test_slope_estimate_identity():
    assert slope_estimate(ID1, [0.0], [2.0], TOL).value == pytest.approx(2, abs=TOL)


def test_slope_estimate_outside_box_is_infinite():
    assert slope_estimate(BOX1, [2.0], [0.3], TOL).value == math.inf


def test_slope_estimate_bad_tol():
    with pytest.raises(InvalidInput):
        slope_estimate(ID1, [0.0], [1.0], 0.0)


# --- image_distance -----------------------------------------------------------

def test_image_distance_examples():
    assert image_distance(NormSubdiff(1.0, [0, 0]), [0, 0], [3, 0]) == pytest.approx(2)
    assert image_distance(ID1, [0.7], [0.7]) == 0
    assert image_distance(BOX1, [2.0], [0.0]) == math.inf


# --- regularity_gap -----------------------------------------------------------

def test_regularity_gap_rotation_at_origin(rng):
    queries = [(np.zeros(2), rng.uniform(-3, 3, 2)) for _ in range(5)]
    v = regularity_gap(ROT, queries, TOL)
    assert v.holds and v.worst_violation <= TOL


def test_regularity_gap_identity_example():
    v = regularity_gap(ID1, [(np.array([0.0]), np.array([2.0]))], TOL)
    assert v.holds
    L, d = v.witnesses[2][1]
    assert d == 2 and L == pytest.approx(2, abs=TOL)


def test_regularity_gap_graph_points_give_zero():
    qs = [(np.array([0.5]), np.array([0.0])), (np.array([1.0]), np.array([4.0]))]
    v = regularity_gap(BOX1, qs, TOL)
    assert v.holds and v.worst_violation == 0


# --- slope_enlarged -----------------------------------------------------------

def test_slope_enlarged_identity():
    assert slope_enlarged(ID1, 0.5, [0.0], [2.0], TOL).value == pytest.approx(1.5, abs=TOL)


def test_slope_enlarged_clamps_to_zero():
    assert slope_enlarged(ID1, 3.0, [0.0], [2.0], TOL).value == 0


def test_slope_enlarged_zero_eps_equals_slope():
    a = slope_enlarged(ROT, 0.0, [0.3, 0.1], [1.0, -1.0], TOL).value
    b = slope_estimate(ROT, [0.3, 0.1], [1.0, -1.0], TOL).value
    assert a == pytest.approx(b, abs=TOL)


def test_slope_enlarged_rejects_negative_eps():
    with pytest.raises(InvalidInput):
        slope_enlarged(ID1, -1.0, [0.0], [0.0])


@pytest.mark.parametrize("name", sorted(catalog()))
def test_slope_never_exceeds_distance(name, rng):
    T = catalog()[name]
    for _ in range(10):
        x, xs = rng.uniform(-2, 2, T.dim), rng.uniform(-3, 3, T.dim)
        L = slope_estimate(T, x, xs, TOL).value
        d = image_distance(T, x, xs)
        assert L <= d + 1e-9
