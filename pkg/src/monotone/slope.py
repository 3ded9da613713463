"""The slope functional L(x, x*, T), the image distance d(x*, T(x)), the
regularity gap between them, and the slope of the norm-weighted enlargement.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from . import geometry as geo
from . import kernels
from .errors import InvalidInput, NumericalError
from .operators import FiniteGraph, GraphSample, OperatorSpec, evaluate
from .sampling import RaySearch, anchors_for, direction_set, scale_ladder
from .verdict import Verdict

INFINITY_THRESHOLD = 1e6
MIN_PAIR_DIST = 1e-12
MAX_ROUNDS = 40


@dataclass(frozen=True)
class SlopeResult:
    value: float
    truncation_radius: float
    density: float
    is_lower_bound: bool
    converged: bool
    degenerate: bool = False

    def __post_init__(self):
        if not self.value >= 0:
            raise ValueError(f"slope must be >= 0, got {self.value}")


def slope_exact(s: GraphSample, x, xstar) -> SlopeResult:
    """max(0, max over pairs with y != x of <x* - y*, y - x> / |y - x|)."""
    if len(s) == 0:
        raise InvalidInput("empty graph sample")
    x, xstar = geo.as_vec(x, s.dim), geo.as_vec(xstar, s.dim)
    val, idx = kernels.slope_sup(s.Y, s.Ys, x, xstar, MIN_PAIR_DIST)
    return SlopeResult(max(0.0, val), s.radius, s.density, math.isfinite(s.radius), True,
                       degenerate=idx < 0)


def _probe(T: OperatorSpec, x, xstar, tol, density, max_rounds=MAX_ROUNDS):
    """Radius-doubling, density-halving slope search.

    Returns (result, sampler) where ``sampler()`` builds the GraphSample of
    every evaluated pair (deduplication is costly, so it is deferred).

    Ray lengths form a geometric ladder, so each round only adds the new
    shortest and longest rungs (the samples are nested) and zooms when the
    incumbent improves.
    """
    x, xstar = geo.as_vec(x, T.dim), geo.as_vec(xstar, T.dim)
    if isinstance(T, FiniteGraph):
        return slope_exact(T.sample, x, xstar), lambda: T.sample
    if not tol > 0:
        raise InvalidInput("tol must be > 0")
    R = 2.0 * (np.linalg.norm(x) + 1.0)
    # vertical rays only show once |y*| can exceed |x*|
    # and rays from a far anchor (a drifting fixed point) must be outgrown
    anchors = anchors_for(T, x, xstar)
    spread = np.linalg.norm(anchors - x, axis=1).max()
    r_floor = 4.0 * (np.linalg.norm(x) + np.linalg.norm(xstar) + spread + 1.0)
    h = density

    def score(Y, Ys):
        return kernels.slope_sup(Y, Ys, x, xstar, MIN_PAIR_DIST)

    search = RaySearch(T, x, anchors, score)
    search.add(scale_ladder(h / 64.0, R), grid_radius=R)
    search.zoom(h, R)
    prev = None
    for _ in range(max_rounds):
        best = max(0.0, search.best)
        if best > INFINITY_THRESHOLD:
            return SlopeResult(math.inf, R, h, True, True), _sampler(search, T, R, h)
        if prev is not None and best - prev < tol and R >= r_floor:
            return SlopeResult(best, R, h, True, True), _sampler(search, T, R, h)
        prev = best
        R *= 2.0
        h /= 2.0
        if search.add([h / 64.0, R], grid_radius=R):
            search.zoom(h, R)
    raise NumericalError(f"slope estimate did not settle in {max_rounds} rounds",
                         best_bound=max(0.0, search.best))


def _sampler(search, T, R, h):
    return lambda: search.sample(T.label, R, h)


def slope_estimate(T: OperatorSpec, x, xstar, tol: float = 1e-3,
                   density: float = 1e-3) -> SlopeResult:
    """Sampled lower bound of L(x, x*, T); +inf once it passes 1e6."""
    return _probe(T, x, xstar, tol, density)[0]


def image_distance(T: OperatorSpec, x, xstar) -> float:
    """d(x*, T(x)); inf when x is outside the domain."""
    return geo.set_distance(evaluate(T, x), geo.as_vec(xstar, T.dim))


def regularity_gap(T: OperatorSpec, queries, tol: float = 1e-3,
                   density: float = 1e-3, bound_tol: float = 1e-9) -> Verdict:
    """Compare L and d on each query (x, x*).

    Holds when every finite gap is within tol, both sides agree on being
    infinite, and L <= d + bound_tol throughout.
    """
    worst, wit = 0.0, []
    bound_ok = True
    finite_agree = True
    n_inf = 0
    for x, xs in queries:
        L = slope_estimate(T, x, xs, tol, density).value
        d = image_distance(T, x, xs)
        if L > d + bound_tol:
            bound_ok = False
        if math.isinf(L) or math.isinf(d):
            n_inf += 1
            gap = 0.0 if math.isinf(L) and math.isinf(d) else math.inf
            finite_agree &= gap == 0.0
        else:
            gap = abs(d - L)
        if gap > worst or (not wit and gap >= worst):
            worst = gap
            wit = [("x", x), ("xstar", xs), ("L_d", [L, d])]
    holds = worst <= tol and bound_ok and finite_agree
    params = {"tol": tol, "h": density, "queries": len(queries), "infinite": n_inf,
              "operator": T.label, "bound_ok": bound_ok}
    if not holds and worst <= tol:
        worst = math.inf
    return Verdict("RegularityGap", holds, worst, wit, params)


def slope_enlarged(T: OperatorSpec, eps: float, x, xstar, tol: float = 1e-3,
                   density: float = 1e-3, n_delta: int = 21, top_k: int = 64) -> SlopeResult:
    """Slope of the norm-weighted enlargement T^eps at (x, x*).

    The sup runs over delta on [0, delta_max] and pairs (y, z* + u*) with
    (y, z*) in the sampled graph and u* on the delta-sphere, so y* ranges over
    T(y) + delta*B, a subset of T^delta(y).
    """
    if not eps >= 0:
        raise InvalidInput("eps must be >= 0")
    x, xstar = geo.as_vec(x, T.dim), geo.as_vec(xstar, T.dim)
    base, sampler = _probe(T, x, xstar, tol, density)
    if math.isinf(base.value):
        return base
    sample = sampler()
    D = sample.Y - x
    nrm = np.linalg.norm(D, axis=1)
    ok = nrm >= MIN_PAIR_DIST
    E = D[ok] / nrm[ok, None]
    q = np.einsum("ij,ij->i", xstar - sample.Ys[ok], E)
    order = np.argsort(q)[::-1][:top_k]
    q, E = q[order], E[order]
    d = image_distance(T, x, xstar)
    delta_max = d + 1.0 if math.isfinite(d) else 10.0
    deltas = np.linspace(0.0, delta_max, n_delta)
    U = direction_set(T.dim, 64)
    # term = <x* - z* - u*, e> - eps - delta for u* = delta * U_k
    ue = E @ U.T
    terms = q[:, None, None] - deltas[None, :, None] * (ue[:, None, :] + 1.0) - eps
    val = max(0.0, float(terms.max(initial=-np.inf)))
    return SlopeResult(val, base.truncation_radius, base.density, True, base.converged)
