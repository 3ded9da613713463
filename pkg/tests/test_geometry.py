import itertools
import math

import numpy as np
import pytest
from scipy.optimize import minimize
from scipy.spatial import ConvexHull

from monotone import geometry as geo
from monotone.errors import InvalidInput, ResourceError


def H(rows):
    return geo.HalfspaceIntersection.from_constraints(rows)


# --- vectors ----------------------------------------------------------------

def test_as_vec_rejects_bad_input():
    with pytest.raises(InvalidInput):
        geo.as_vec([])
    with pytest.raises(InvalidInput):
        geo.as_vec(np.zeros(9))
    with pytest.raises(InvalidInput):
        geo.as_vec([1.0, math.nan])
    with pytest.raises(InvalidInput):
        geo.as_vec([1.0, 2.0], dim=3)
    v = geo.as_vec([1, 2])
    assert not v.flags.writeable


# --- set_contains -------------------------------------------------------------

def test_contains_ball_boundary_and_outside():
    B = geo.Ball([0, 0], 1)
    assert geo.set_contains(B, [1, 0], 0)
    assert not geo.set_contains(B, [1.5, 0], 0)


def test_contains_halfspace_interval():
    S = H([([1.0], 0.0), ([-1.0], -1.0)])
    assert geo.set_contains(S, [0.5], 0)
    assert geo.set_contains(S, [1.0], 0)
    assert not geo.set_contains(S, [1.1], 0)


def test_contains_exact_variants_at_tol_zero():
    assert geo.set_contains(geo.Singleton([1, 2]), [1, 2], 0)
    assert geo.set_contains(geo.Box([0, 0], [1, 1]), [1, 0.5], 0)
    assert not geo.set_contains(geo.Box([0, 0], [1, 1]), [1 + 1e-15, 0.5], 0)
    assert geo.set_contains(geo.FinitePoints([[0, 0], [1, 1]]), [1, 1], 0)
    assert geo.set_contains(geo.OrthantCone([0, 0], [1, 0]), [5, 0], 0)
    assert not geo.set_contains(geo.OrthantCone([0, 0], [1, 0]), [5, 1e-14], 0)


def test_contains_dimension_mismatch():
    with pytest.raises(InvalidInput):
        geo.set_contains(geo.Ball([0, 0], 1), [0], 0)


def test_contains_negative_tol():
    with pytest.raises(InvalidInput):
        geo.set_contains(geo.Ball([0, 0], 1), [0, 0], -1)


# --- set_distance -------------------------------------------------------------

def test_distance_examples():
    assert geo.set_distance(geo.Ball([0, 0], 1), [3, 0]) == pytest.approx(2)
    assert geo.set_distance(geo.Empty(2), [0, 0]) == math.inf
    # brute force over the segment
    t = np.linspace(0, 1, 100001)
    brute = np.abs(t - 2).min()
    assert geo.set_distance(geo.Polytope([[0.0], [1.0]]), [2.0]) == pytest.approx(brute, abs=1e-9)


def test_distance_closed_forms(rng):
    box = geo.Box([0, -1], [2, 1])
    cone = geo.OrthantCone([1, 1], [-1, 1])
    for _ in range(50):
        p = rng.uniform(-4, 4, 2)
        q = np.clip(p, box.lo, box.hi)
        assert geo.set_distance(box, p) == pytest.approx(np.linalg.norm(p - q))
        c = np.array([min(p[0], 1.0), max(p[1], 1.0)])
        assert geo.set_distance(cone, p) == pytest.approx(np.linalg.norm(p - c))


def _hull_distance(V, p):
    # oracle: 0 inside the hull, else the nearest hull edge
    hull = ConvexHull(V)
    if np.all(hull.equations[:, :2] @ p + hull.equations[:, 2] <= 0):
        return 0.0
    best = math.inf
    for i, j in hull.simplices:
        a, b = V[i], V[j]
        t = np.clip((p - a) @ (b - a) / ((b - a) @ (b - a)), 0, 1)
        best = min(best, float(np.linalg.norm(a + t * (b - a) - p)))
    return best


def test_distance_polytope_matches_hull_edges(rng):
    for _ in range(20):
        V = rng.standard_normal((6, 2))
        p = 2 * rng.standard_normal(2)
        assert geo.set_distance(geo.Polytope(V), p) == pytest.approx(_hull_distance(V, p), abs=1e-8)


def test_distance_halfspace_matches_brute(rng):
    S = H([([1, 0], 0), ([0, 1], 0), ([-1, -1], -1)])
    g = np.linspace(0, 1, 801)
    X, Y = np.meshgrid(g, g)
    pts = np.stack([X.ravel(), Y.ravel()], 1)
    pts = pts[pts.sum(1) <= 1]
    for p in ([2, 2], [-1, 0.5], [0.2, 0.2], [3, -2]):
        oracle = np.linalg.norm(pts - p, axis=1).min()
        assert geo.set_distance(S, p) == pytest.approx(oracle, abs=2e-3)


def _slsqp_distance(A, b, p, start):
    # oracle: a general-purpose constrained minimizer
    r = minimize(lambda w: ((w - p) ** 2).sum(), start, jac=lambda w: 2 * (w - p),
                 constraints=[{"type": "ineq", "fun": lambda w: A @ w - b, "jac": lambda w: A}],
                 method="SLSQP", options={"ftol": 1e-15, "maxiter": 500})
    return float(np.linalg.norm(r.x - p))


def test_distance_halfspace_matches_slsqp(rng):
    for _ in range(200):
        n, m = rng.integers(1, 4), rng.integers(1, 9)
        A = rng.standard_normal((m, n))
        c = rng.standard_normal(n)
        b = A @ c - rng.uniform(0, 1, m)
        p = 3 * rng.standard_normal(n)
        d = geo.set_distance(geo.HalfspaceIntersection(A, b), p)
        assert d == pytest.approx(_slsqp_distance(A, b, p, c), abs=1e-6)


def test_distance_halfspace_narrow_wedge():
    # nearly parallel rows: cyclic projections crawl here
    for a in (2.0 ** -7, 1.39617927e-08):
        S = geo.HalfspaceIntersection([[a, 1.0], [0.0, -1.0]], [a, 0.0])
        np.testing.assert_allclose(S.project(np.zeros(2)), [1.0, 0.0], atol=1e-9)


def test_projection_helpers_agree(rng):
    for _ in range(300):
        n, m = rng.integers(1, 4), rng.integers(1, 9)
        A = rng.standard_normal((m, n))
        b = A @ rng.standard_normal(n) - rng.uniform(0, 1, m)
        p = 3 * rng.standard_normal(n)
        np.testing.assert_allclose(geo._ldp_project(A, b, p), geo._active_set_project(A, b, p),
                                   atol=1e-7)


# --- set_support --------------------------------------------------------------

def test_support_examples(rng):
    c = np.array([0.3, -0.2])
    u = np.array([0.6, 0.8])
    assert geo.set_support(geo.Ball(c, 2), u) == pytest.approx(c @ u + 2)
    V = rng.standard_normal((7, 2))
    assert geo.set_support(geo.Polytope(V), u) == pytest.approx((V @ u).max())
    ray = geo.OrthantCone([0.0], [-1])
    assert geo.set_support(ray, [1.0]) == 0
    assert geo.set_support(ray, [-1.0]) == math.inf


def test_support_halfspace_unbounded_and_bounded():
    half = H([([1, 0], 0)])
    assert geo.set_support(half, [1, 0]) == math.inf
    tri = H([([1, 0], 0), ([0, 1], 0), ([-1, -1], -1)])
    u = np.array([1, 1]) / math.sqrt(2)
    assert geo.set_support(tri, u) == pytest.approx(1 / math.sqrt(2), abs=1e-9)
    assert geo.set_support(tri, [-1, 0]) == pytest.approx(0, abs=1e-9)


def test_support_errors():
    with pytest.raises(InvalidInput):
        geo.set_support(geo.Empty(1), [1.0])
    with pytest.raises(InvalidInput):
        geo.set_support(geo.Ball([0, 0], 1), [1, 1])


# --- set_is_empty -------------------------------------------------------------

def test_is_empty_examples():
    assert geo.set_is_empty(H([([1.0], 1.0), ([-1.0], 0.0)]))
    assert not geo.set_is_empty(geo.Ball([3, 4], 0))
    assert not geo.set_is_empty(H([([1, 0], 0), ([0, 1], 0), ([-1, -1], -1)]))
    assert geo.set_is_empty(geo.Empty(3))


def test_is_empty_fm_caps():
    A = np.eye(5)
    with pytest.raises(ResourceError):
        geo.fm_is_empty(A, np.zeros(5))


def test_is_empty_large_system_uses_lp():
    # many rows, feasible: the LP witness settles it without FM
    rng = np.random.default_rng(0)
    A = rng.standard_normal((500, 3))
    b = -np.abs(rng.standard_normal(500)) - 0.1
    assert not geo.HalfspaceIntersection(A, b).is_empty()


# --- minkowski_ball -----------------------------------------------------------

def test_minkowski_ball_examples():
    r = geo.minkowski_ball(geo.Singleton([0, 0]), 1)
    assert isinstance(r, geo.Ball) and r.radius == 1
    r = geo.minkowski_ball(geo.Ball([1, 0], 1), 0.5)
    assert isinstance(r, geo.Ball) and r.radius == 1.5
    np.testing.assert_array_equal(r.center, [1, 0])
    box = geo.Box([0.0], [1.0])
    assert geo.minkowski_ball(box, 0) is box
    with pytest.raises(InvalidInput):
        geo.minkowski_ball(box, -0.1)


def test_ballsum_flattens():
    S = geo.BallSum(geo.BallSum(geo.Box([0.0], [1.0]), 0.5), 0.25)
    assert not isinstance(S.base, geo.BallSum)
    assert S.radius == pytest.approx(0.75)


def test_ballsum_distance_formula(rng):
    base = geo.Box([0, 0], [1, 2])
    for _ in range(30):
        p = rng.uniform(-4, 4, 2)
        r = rng.uniform(0, 2)
        S = geo.minkowski_ball(base, r)
        assert geo.set_distance(S, p) == pytest.approx(max(0, geo.set_distance(base, p) - r), abs=1e-12)


# --- hausdorff_estimate -------------------------------------------------------

def test_hausdorff_examples():
    U = np.array([[1, 0], [0, 1], [-1, 0], [0, -1]], dtype=float)
    assert geo.hausdorff_estimate(geo.Ball([0, 0], 1), geo.Ball([0, 0], 2), U) == pytest.approx(1)
    S = geo.Box([0, 0], [1, 1])
    assert geo.hausdorff_estimate(S, S, U) == 0
    B = geo.Ball([0.5, 0.5], 0.5)
    assert geo.hausdorff_estimate(S, B, U) == pytest.approx(0, abs=1e-15)
    diag = np.array([[1, 1]]) / math.sqrt(2)
    # box: sqrt(2); ball: 1/sqrt(2) + 0.5
    assert geo.hausdorff_estimate(S, B, diag) == pytest.approx(math.sqrt(2) - 1 / math.sqrt(2) - 0.5)
    assert geo.hausdorff_estimate(S, B, diag) == pytest.approx(0.2071, abs=1e-4)


def test_hausdorff_unbounded_rejected():
    with pytest.raises(InvalidInput):
        geo.hausdorff_estimate(geo.OrthantCone([0.0], [1]), geo.Ball([0.0], 1), [[1.0]])


# --- constructors -------------------------------------------------------------

@pytest.mark.parametrize("make", [
    lambda: geo.Ball([0, 0], -1),
    lambda: geo.Box([1, 0], [0, 1]),
    lambda: geo.Polytope(np.zeros((0, 2))),
    lambda: geo.OrthantCone([0, 0], [2, 0]),
    lambda: geo.BallSum(geo.Box([0.0], [1.0]), -1),
])
def test_invalid_constructions(make):
    with pytest.raises(InvalidInput):
        make()


def test_fm_exhaustive_small_systems():
    # all sign patterns of a fixed 1-D system family
    for lo, hi in itertools.product([-1.0, 0.0, 1.0], repeat=2):
        S = H([([1.0], lo), ([-1.0], -hi)])
        assert S.is_empty() == (lo > hi)
