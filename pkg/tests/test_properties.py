"""Property tests for the invariants each module promises."""
import math

import numpy as np
from hypothesis import assume, given
from hypothesis import strategies as st
from hypothesis.extra.numpy import arrays
from scipy.optimize import linprog

from monotone import geometry as geo
from monotone import theorems as th
from monotone.enlargements import EnlargementQuery, enlargement_membership, image_plus_ball
from monotone.operators import (GraphSample, catalog, evaluate, monotone_related,
                                resolvent_point, sample_graph)
from monotone.slope import slope_exact

CATALOG = catalog()
names = st.sampled_from(sorted(CATALOG))
coord = st.floats(-3, 3, allow_nan=False, width=64)


def vec(n, lo=-3.0, hi=3.0):
    return arrays(np.float64, (n,), elements=st.floats(lo, hi, width=64))


@st.composite
def convex_sets(draw, n=None):
    n = n or draw(st.integers(1, 3))
    kind = draw(st.sampled_from(["singleton", "points", "ball", "box", "polytope", "halfspace",
                                 "cone", "ballsum"]))
    c = draw(vec(n))
    if kind == "singleton":
        return geo.Singleton(c)
    if kind == "points":
        return geo.FinitePoints(draw(arrays(np.float64, (draw(st.integers(1, 5)), n), elements=coord)))
    if kind == "ball":
        return geo.Ball(c, draw(st.floats(0, 2)))
    if kind == "box":
        w = draw(vec(n, 0, 2))
        return geo.Box(c, c + w)
    if kind == "polytope":
        return geo.Polytope(draw(arrays(np.float64, (draw(st.integers(1, 6)), n), elements=coord)))
    if kind == "halfspace":
        m = draw(st.integers(1, 5))
        # coefficients on a 1/8 grid keep distinct rows apart in angle
        A = draw(arrays(np.float64, (m, n), elements=st.integers(-8, 8).map(lambda k: k / 8)))
        assume(np.all(np.abs(A).max(axis=1) > 0.1))
        # rows through a known point keep the set nonempty
        return geo.HalfspaceIntersection(A, A @ c - draw(st.floats(0, 1)))
    if kind == "cone":
        return geo.OrthantCone(c, draw(arrays(np.int64, (n,), elements=st.integers(-1, 1))))
    return geo.minkowski_ball(geo.Box(c, c + 1.0), draw(st.floats(0, 1)))


# --- geometry -----------------------------------------------------------------

@given(convex_sets(), st.data())
def test_contains_iff_zero_distance(S, data):
    p = data.draw(vec(S.dim))
    for q in (p, S.project(p)):
        d = geo.set_distance(S, q)
        iterative = isinstance(S, (geo.Polytope, geo.HalfspaceIntersection))
        if iterative:
            assert geo.set_contains(S, q, 1e-10) == (d <= 1e-10)
        else:
            assert geo.set_contains(S, q, 0) == (d == 0)


@given(convex_sets(), st.floats(0, 2), st.floats(0, 2), st.data())
def test_minkowski_ball_monotone(S, r1, r2, data):
    r1, r2 = min(r1, r2), max(r1, r2)
    small, big = geo.minkowski_ball(S, r1), geo.minkowski_ball(S, r2)
    for _ in range(100 // 10):
        p = data.draw(vec(S.dim, -5, 5))
        # a boundary point of the smaller set
        b = small.project(p)
        assert geo.set_distance(big, b) <= 1e-8


@given(convex_sets(), st.floats(0, 3), st.data())
def test_minkowski_ball_distance_shift(S, r, data):
    p = data.draw(vec(S.dim, -5, 5))
    expect = max(0.0, geo.set_distance(S, p) - r)
    assert abs(geo.set_distance(geo.minkowski_ball(S, r), p) - expect) <= 1e-8


@st.composite
def halfspace_systems(draw):
    n = draw(st.integers(1, 3))
    m = draw(st.integers(1, 12 - 2 * n))
    A = draw(arrays(np.float64, (m, n), elements=st.integers(-3, 3).map(float)))
    b = draw(arrays(np.float64, (m,), elements=st.integers(-4, 4).map(lambda k: k / 2)))
    # the box |w_i| <= 2 bounds the region the grid oracle scans
    A = np.vstack([A, np.eye(n), -np.eye(n)])
    b = np.concatenate([b, -2 * np.ones(n), -2 * np.ones(n)])
    return A, b


@given(halfspace_systems())
def test_is_empty_agrees_with_grid_oracle(sys_):
    A, b = sys_
    n = A.shape[1]
    axis = np.linspace(-2, 2, {1: 801, 2: 161, 3: 41}[n])
    G = np.stack([g.ravel() for g in np.meshgrid(*[axis] * n, indexing="ij")], axis=1)
    grid_hit = bool(np.any(np.all(G @ A.T - b >= -1e-12, axis=1)))
    empty = geo.set_is_empty(geo.HalfspaceIntersection(A, b))
    if grid_hit:
        assert not empty
    else:
        # no grid point: FM may still find a sliver; an LP oracle must agree
        res = linprog(np.zeros(n), A_ub=-A, b_ub=-b, bounds=[(None, None)] * n, method="highs")
        assert empty == (res.status == 2)


# --- operators ----------------------------------------------------------------

@given(names, st.data())
def test_resolvent_on_graph(name, data):
    T = CATALOG[name]
    z = data.draw(vec(T.dim, -6, 6))
    p = resolvent_point(T, z)
    assert geo.set_contains(evaluate(T, p.y), p.ystar, 1e-9)
    assert np.all(np.abs(p.y + p.ystar - z) <= 1e-12)


@given(names, st.floats(0.5, 3), st.sampled_from([0.1, 0.25, 0.5]))
def test_sample_graph_monotone(name, R, h):
    s = sample_graph(CATALOG[name], R, h)
    from monotone.operators import validate_monotone
    assert validate_monotone(s).holds


# --- slope --------------------------------------------------------------------

@st.composite
def finite_monotone(draw, n=2):
    m = draw(st.integers(1, 25))
    Y = draw(arrays(np.float64, (m, n), elements=coord))
    name = draw(st.sampled_from(["rotation", "psd_nonsym", "sqrt1p", "normsubdiff"]))
    T = CATALOG[name]
    P = [resolvent_point(T, y) for y in Y]
    return GraphSample([p.y for p in P], [p.ystar for p in P])


@given(finite_monotone(), finite_monotone(), vec(2), vec(2))
def test_slope_grows_under_refinement(s1, s2, x, xs):
    union = s1.merge(s2)
    assert slope_exact(union, x, xs).value >= slope_exact(s1, x, xs).value - 1e-15


@given(finite_monotone(), vec(2), vec(2))
def test_zero_slope_iff_related(s, x, xs):
    related, worst = monotone_related(x, xs, s, 0.0)
    L = slope_exact(s, x, xs).value
    assume(abs(worst) > 1e-9)
    assert (L == 0) == related


# --- enlargements -------------------------------------------------------------

@given(finite_monotone(), vec(2), vec(2), st.floats(0, 3))
def test_membership_iff_slope_below_eps(s, x, xs, eps):
    ok, _ = enlargement_membership(s, EnlargementQuery("norm_weighted", eps, x), xs)
    L = slope_exact(s, x, xs).value
    # membership tolerates 1e-9 absolute, i.e. 1e-9 / |y - x| in slope units
    r = np.linalg.norm(s.Y - x, axis=1)
    assume(r[r >= 1e-12].min(initial=1.0) > 1e-4 and abs(L - eps) > 1e-4)
    assert ok == (L <= eps)


@given(finite_monotone(), vec(2), vec(2), st.floats(0, 2), st.floats(0, 2),
       st.sampled_from(["norm_weighted", "constant"]))
def test_membership_nested(s, x, xs, e1, e2, kind):
    e1, e2 = min(e1, e2), max(e1, e2)
    if enlargement_membership(s, EnlargementQuery(kind, e1, x), xs)[0]:
        assert enlargement_membership(s, EnlargementQuery(kind, e2, x), xs)[0]


@given(names, st.data())
def test_ball_around_image_is_inside_enlargement(name, data):
    T = CATALOG[name]
    z = data.draw(vec(T.dim))
    x = resolvent_point(T, z).y
    eps = data.draw(st.floats(0.01, 2))
    u = data.draw(vec(T.dim, -1, 1))
    nu = np.linalg.norm(u)
    assume(nu > 1e-6)
    t = evaluate(T, x).project(data.draw(vec(T.dim)))
    xs = t + eps * data.draw(st.floats(0, 1)) * u / nu
    s = sample_graph(T, 3.0, 0.25)
    ok, worst = enlargement_membership(s, EnlargementQuery("norm_weighted", eps, x), xs)
    assert worst >= -1e-9


@given(names, st.data())
def test_cross_monotonicity(name, data):
    T = CATALOG[name]
    eps, delta = data.draw(st.floats(0, 2)), data.draw(st.floats(0, 2))
    px, py = resolvent_point(T, data.draw(vec(T.dim))), resolvent_point(T, data.draw(vec(T.dim)))

    def ball_point(c, r):
        u = data.draw(vec(T.dim, -1, 1))
        nu = np.linalg.norm(u)
        return c if nu < 1e-9 else c + r * min(1.0, nu) * u / nu

    xs, ys = ball_point(px.ystar, eps), ball_point(py.ystar, delta)
    lhs = float((xs - ys) @ (px.y - py.y))
    assert lhs >= -(eps + delta) * np.linalg.norm(px.y - py.y) - 1e-9


@given(names, st.data())
def test_remark_chain_distance_route(name, data):
    # d(x*, T(x) + eps B) = max(0, d(x*, T(x)) - eps), exactly
    T = CATALOG[name]
    x, xs, eps = data.draw(vec(T.dim)), data.draw(vec(T.dim)), data.draw(st.floats(0, 3))
    d = geo.set_distance(evaluate(T, x), xs)
    got = geo.set_distance(image_plus_ball(T, x, eps), xs)
    if math.isinf(d):
        assert math.isinf(got)
    else:
        assert abs(got - max(0.0, d - eps)) <= 1e-8


# --- theorems -----------------------------------------------------------------

@given(st.integers(0, 2**32 - 1))
def test_checkers_deterministic(seed):
    T = CATALOG["identity"]
    a = th.check_lemma6(T, trials=20, seed=seed).to_dict()
    b = th.check_lemma6(T, trials=20, seed=seed).to_dict()
    assert a == b


@given(names)
def test_no_verdict_holds_above_tol(name):
    T = CATALOG[name]
    for v in [th.check_lemma6(T, trials=10)]:
        assert not v.holds or v.worst_violation <= v.params["tol"]
