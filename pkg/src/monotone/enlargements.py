"""Enlargements of a monotone operator: membership, sampled sets, domains.

Two kinds are supported.  ``norm_weighted`` (T^eps) admits pairs whose
monotonicity defect against every graph pair (y, y*) is at most
eps * |x - y|; ``constant`` (T_eps) admits a defect of at most eps.

Against an infinite graph only a sample is available, so a membership
report is a necessary condition at the sample's radius, while an emptiness
report is conclusive (a violated constraint is a certificate).
"""
from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from . import geometry as geo
from . import kernels
from .errors import InternalInconsistency, InvalidInput
from .operators import GraphSample, OperatorSpec, evaluate, sample_graph
from .sampling import local_sample

KINDS = ("norm_weighted", "constant")
MEMBER_TOL = 1e-9
MIN_PAIR_DIST = 1e-12


@dataclass(frozen=True)
class EnlargementQuery:
    kind: str
    eps: float
    x: np.ndarray
    radius: float = 8.0
    density: float = 1e-2
    weighted: bool = field(init=False, repr=False)

    def __post_init__(self):
        if self.kind not in KINDS:
            raise InvalidInput(f"kind must be one of {KINDS}, got {self.kind!r}")
        if not self.eps >= 0:
            raise InvalidInput(f"eps must be >= 0, got {self.eps}")
        if not (self.radius > 0 and self.density > 0):
            raise InvalidInput("radius and density must be > 0")
        object.__setattr__(self, "x", geo.as_vec(self.x))
        object.__setattr__(self, "eps", float(self.eps))
        object.__setattr__(self, "weighted", self.kind == "norm_weighted")


def _sample_for(T, q: EnlargementQuery) -> GraphSample:
    if isinstance(T, GraphSample):
        s = T
    else:
        s = sample_graph(T, q.radius, q.density)
    if len(s) == 0:
        raise InvalidInput("empty graph sample")
    if s.dim != q.x.size:
        raise InvalidInput(f"dimension mismatch: sample {s.dim}, query {q.x.size}")
    return s


def enlargement_membership(T, q: EnlargementQuery, xstar):
    """(member, worst) with worst = min of <x* - y*, x - y> + eps * w.

    ``T`` is an operator (sampled on the uniform grid of the query) or a
    GraphSample.  Pairs with y = x impose nothing and are skipped.
    """
    s = _sample_for(T, q)
    xstar = geo.as_vec(xstar, s.dim)
    worst, _ = kernels.enlargement_min(s.Y, s.Ys, q.x, xstar, q.eps, q.weighted)
    return worst >= -MEMBER_TOL, worst


def _rows(s: GraphSample, q: EnlargementQuery):
    D = q.x - s.Y
    nrm = np.linalg.norm(D, axis=1)
    keep = nrm >= MIN_PAIR_DIST
    D, nrm, Ys = D[keep], nrm[keep], s.Ys[keep]
    w = nrm if q.weighted else np.ones_like(nrm)
    return D, np.einsum("ij,ij->i", Ys, D) - q.eps * w


def enlargement_polyhedron(s: GraphSample, q: EnlargementQuery) -> geo.HalfspaceIntersection:
    """{x* : <x*, x - y> >= <y*, x - y> - eps * w for every sampled pair}."""
    s = _sample_for(s, q)
    A, b = _rows(s, q)
    return geo.HalfspaceIntersection(A, b)


def image_plus_ball(T: OperatorSpec, x, eps: float) -> geo.ConvexSet:
    """T(x) + eps * B; Empty outside the domain."""
    if not eps >= 0:
        raise InvalidInput(f"eps must be >= 0, got {eps}")
    return geo.minkowski_ball(evaluate(T, x), float(eps))


def _points_of(S: geo.ConvexSet, rng, count: int) -> np.ndarray:
    """Points of a nonempty convex set: projections of random vectors."""
    n = S.dim
    V = rng.standard_normal((count, n)) * rng.choice([0.1, 1.0, 10.0], size=(count, 1))
    return np.array([S.project(v) for v in V])


def full_enlargement_delta(T: OperatorSpec, x, eps: float, sample: GraphSample | None = None,
                           seed: int = 0, count: int = 100) -> float:
    """Radius delta with T(x) + delta * B inside T^eps(x); delta = eps.

    The inclusion is verified on ``count`` points of T(x) + eps * B (a third
    of them on the outer sphere); a failure raises InternalInconsistency.
    """
    if not eps > 0:
        raise InvalidInput(f"eps must be > 0, got {eps}")
    x = geo.as_vec(x, T.dim)
    image = evaluate(T, x)
    if image.is_empty():
        raise InvalidInput(f"{x} is outside the domain of {T.label}")
    if sample is None:
        sample = local_sample(T, x, 1e-3, 4.0 * (1.0 + np.linalg.norm(x)))
    rng = np.random.default_rng(seed)
    base = _points_of(image, rng, count)
    U = rng.standard_normal((count, T.dim))
    U /= np.linalg.norm(U, axis=1, keepdims=True)
    r = eps * rng.uniform(size=count) ** (1.0 / T.dim)
    r[: count // 3] = eps
    q = EnlargementQuery("norm_weighted", eps, x)
    for p in base + r[:, None] * U:
        ok, worst = enlargement_membership(sample, q, p)
        if not ok:
            raise InternalInconsistency(
                f"point {p} of T(x) + eps*B fails membership (worst {worst})")
    return float(eps)


@dataclass(frozen=True)
class ProbeOutcome:
    x: np.ndarray
    nonempty: bool
    radius: float


def domain_probe(T: OperatorSpec, kind: str, eps: float, grid, points_per_axis: int | None = None,
                 max_radius: float = 1e6) -> list[tuple[np.ndarray, bool]]:
    """Decide emptiness of the sampled enlargement at each grid point.

    The dual variable is confined to the window |x*_i| <= 5 (1 + g) + eps,
    g the largest grid norm; every catalog operator has an image element
    of that size on its domain.  The graph is sampled on a uniform grid of
    radius R = 10 (1 + g), doubled (same point count) until emptiness is
    certified or R passes ``max_radius``.  Output follows grid order.
    """
    return [(o.x, o.nonempty) for o in domain_probe_detailed(
        T, kind, eps, grid, points_per_axis, max_radius)]


def domain_probe_detailed(T: OperatorSpec, kind: str, eps: float, grid,
                          points_per_axis: int | None = None,
                          max_radius: float = 1e6) -> list[ProbeOutcome]:
    if kind not in KINDS:
        raise InvalidInput(f"kind must be one of {KINDS}, got {kind!r}")
    if not eps >= 0:
        raise InvalidInput(f"eps must be >= 0, got {eps}")
    X = np.array([geo.as_vec(p, T.dim) for p in grid])
    if X.size == 0:
        return []
    n = T.dim
    g = float(np.linalg.norm(X, axis=1).max())
    rho = 5.0 * (1.0 + g) + eps
    m = points_per_axis or {1: 2001, 2: 41}.get(n, 9)
    K = (m - 1) // 2
    W = np.vstack([np.eye(n), -np.eye(n)])
    Wb = np.full(2 * n, -rho)
    samples: dict[float, GraphSample] = {}

    def sample_at(R):
        if R not in samples:
            samples[R] = sample_graph(T, R, R / K)
        return samples[R]

    out = []
    for x in X:
        R = 10.0 * (1.0 + g)
        q = EnlargementQuery(kind, eps, x, R, R / K)
        while True:
            A, b = _rows(sample_at(R), q)
            empty = geo.fm_is_empty(np.vstack([A, W]), np.concatenate([b, Wb]))
            if empty or R * 2.0 > max_radius:
                break
            R *= 2.0
        out.append(ProbeOutcome(x, not empty, R))
    return out


def interval_grid(lo: float, hi: float, count: int, dim: int = 1) -> np.ndarray:
    """``count`` evenly spaced points per axis on [lo, hi]^dim."""
    axis = np.linspace(lo, hi, count)
    mesh = np.meshgrid(*([axis] * dim), indexing="ij")
    return np.stack([m.ravel() for m in mesh], axis=1)


__all__ = [
    "KINDS", "EnlargementQuery", "enlargement_membership", "enlargement_polyhedron",
    "image_plus_ball", "full_enlargement_delta", "domain_probe", "domain_probe_detailed",
    "ProbeOutcome", "interval_grid",
]
