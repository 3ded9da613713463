"""Catalog of monotone operators on R^n.

Each operator evaluates exactly to a ConvexSet, computes batched scaled
resolvents (Minty parametrization) that land on the graph exactly, and
serializes to a plain dict for scenario files.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from functools import reduce

import numpy as np

from . import geometry as geo
from . import kernels
from .errors import InvalidInput, NumericalError, ResourceError
from .verdict import Verdict

MONOTONE_TOL = 1e-9
MAX_GRID_POINTS = 1_000_000
BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class GraphPoint:
    y: np.ndarray
    ystar: np.ndarray


@dataclass(frozen=True, eq=False)
class GraphSample:
    """Finite list of graph pairs stored row-wise in ``Y`` and ``Ys``."""

    Y: np.ndarray
    Ys: np.ndarray
    source: str = "finite"
    radius: float = math.inf
    density: float = 0.0

    def __post_init__(self):
        Y = np.atleast_2d(np.array(self.Y, dtype=float))
        Ys = np.atleast_2d(np.array(self.Ys, dtype=float))
        if Y.shape != Ys.shape:
            raise InvalidInput(f"graph sample shapes differ: {Y.shape} vs {Ys.shape}")
        if not (np.all(np.isfinite(Y)) and np.all(np.isfinite(Ys))):
            raise InvalidInput("graph sample has non-finite entries")
        Y, Ys = _dedupe_pairs(Y, Ys)
        Y.setflags(write=False)
        Ys.setflags(write=False)
        object.__setattr__(self, "Y", Y)
        object.__setattr__(self, "Ys", Ys)

    @classmethod
    def from_points(cls, pairs, **kw):
        pairs = list(pairs)
        if not pairs:
            raise InvalidInput("graph sample needs at least one pair")
        Y = np.array([np.ravel(p[0]) for p in pairs], dtype=float)
        Ys = np.array([np.ravel(p[1]) for p in pairs], dtype=float)
        return cls(Y, Ys, **kw)

    @property
    def dim(self) -> int:
        return self.Y.shape[1]

    def __len__(self):
        return self.Y.shape[0]

    @property
    def points(self) -> list[GraphPoint]:
        return [GraphPoint(y, ys) for y, ys in zip(self.Y, self.Ys)]

    def merge(self, other: "GraphSample") -> "GraphSample":
        return GraphSample(np.vstack([self.Y, other.Y]), np.vstack([self.Ys, other.Ys]),
                           self.source, max(self.radius, other.radius),
                           min(self.density, other.density) or max(self.density, other.density))


def _dedupe_pairs(Y, Ys):
    if len(Y) < 2:
        return Y, Ys
    _, idx = np.unique(np.hstack([Y, Ys]), axis=0, return_index=True)
    idx.sort()
    return Y[idx], Ys[idx]


# ---------------------------------------------------------------------------
# Operator variants
# ---------------------------------------------------------------------------

class OperatorSpec:
    """Base class for monotone operators; see the concrete variants."""

    dim: int
    maximal = True

    def evaluate(self, x: np.ndarray) -> geo.ConvexSet:
        raise NotImplementedError

    def resolvent(self, Z: np.ndarray, scale: float = 1.0):
        """Batched (I + scale*T)^-1: rows of Z -> (Y, Ys) with Ys in T(Y)."""
        raise NotImplementedError(f"{type(self).__name__} has no resolvent")

    def project_image(self, X: np.ndarray, V: np.ndarray):
        """Row-wise projection of V onto T(X); returns (P, ok) with ok=False
        where T(x) is empty."""
        P = np.empty_like(V)
        ok = np.ones(len(X), dtype=bool)
        for i, (x, v) in enumerate(zip(X, V)):
            S = self.evaluate(x)
            if S.is_empty():
                ok[i] = False
                P[i] = np.nan
            else:
                P[i] = S.project(v)
        return P, ok

    def kink_points(self) -> np.ndarray:
        """Isolated points where the image jumps to a larger set."""
        return np.zeros((0, self.dim))

    def domain_distance(self, x: np.ndarray) -> float:
        """Distance from x to the closure of the domain (analytic)."""
        return 0.0

    def domain_box(self):
        """(lo, hi) bounds of the domain, or None when D_T = R^n."""
        return None

    def bound(self) -> float:
        """sup of |y*| over the graph (inf when unbounded)."""
        return math.inf

    def to_dict(self) -> dict:
        raise NotImplementedError

    @property
    def label(self) -> str:
        return type(self).__name__

    def _x(self, x):
        return geo.as_vec(x, self.dim)


@dataclass(frozen=True, eq=False)
class FiniteGraph(OperatorSpec):
    """Operator whose graph is a finite monotone sample (not maximal)."""

    sample: GraphSample
    maximal = False

    def __post_init__(self):
        v = validate_monotone(self.sample)
        if not v.holds:
            (_, yi), (_, ysi), (_, yj), (_, ysj) = v.witnesses[:4]
            raise InvalidInput(
                f"finite graph is not monotone: pairs #{v.params['i']} "
                f"(y={yi}, y*={ysi}) and #{v.params['j']} (y={yj}, y*={ysj}) "
                f"give {v.params['worst_value']:.6g} < 0")

    @property
    def dim(self):
        return self.sample.dim

    def evaluate(self, x):
        x = self._x(x)
        hit = np.linalg.norm(self.sample.Y - x, axis=1) <= 1e-12
        if not hit.any():
            return geo.Empty(self.dim)
        return geo.FinitePoints(self.sample.Ys[hit])

    def domain_distance(self, x):
        return float(np.linalg.norm(self.sample.Y - self._x(x), axis=1).min())

    def to_dict(self):
        return {"type": "finite_graph",
                "points": [[y.tolist(), ys.tolist()] for y, ys in zip(self.sample.Y, self.sample.Ys)]}

    @property
    def label(self):
        return f"FiniteGraph[{len(self.sample)}]"


@dataclass(frozen=True, eq=False)
class Linear(OperatorSpec):
    """x -> A x with A + A^T positive semidefinite."""

    matrix: np.ndarray

    def __post_init__(self):
        A = np.atleast_2d(np.array(self.matrix, dtype=float))
        if A.shape[0] != A.shape[1] or not 1 <= A.shape[0] <= geo.MAX_DIM:
            raise InvalidInput(f"linear operator needs a square n x n matrix, got {A.shape}")
        if not np.all(np.isfinite(A)):
            raise InvalidInput("matrix has non-finite entries")
        lam_min = float(np.linalg.eigvalsh(A + A.T).min())
        if lam_min < -1e-10:
            raise InvalidInput(f"A + A^T has eigenvalue {lam_min:.3g} < 0; not monotone")
        A.setflags(write=False)
        object.__setattr__(self, "matrix", A)

    @property
    def dim(self):
        return self.matrix.shape[0]

    def value(self, X):
        return X @ self.matrix.T

    def evaluate(self, x):
        return geo.Singleton(self.matrix @ self._x(x))

    def resolvent(self, Z, scale=1.0):
        M = np.eye(self.dim) + scale * self.matrix
        Y = np.linalg.solve(M, np.atleast_2d(Z).T).T
        return Y, self.value(Y)

    def project_image(self, X, V):
        return self.value(X), np.ones(len(X), dtype=bool)

    def bound(self):
        return 0.0 if not np.any(self.matrix) else math.inf

    def to_dict(self):
        return {"type": "linear", "matrix": self.matrix.tolist()}

    @property
    def label(self):
        return f"Linear{self.matrix.tolist()}"


@dataclass(frozen=True, eq=False)
class NormSubdiff(OperatorSpec):
    """Subdifferential of z -> lam * |z - center|."""

    lam: float
    center: np.ndarray

    def __post_init__(self):
        if not (self.lam > 0 and math.isfinite(self.lam)):
            raise InvalidInput(f"lambda must be > 0, got {self.lam}")
        object.__setattr__(self, "lam", float(self.lam))
        object.__setattr__(self, "center", geo.as_vec(self.center))

    @property
    def dim(self):
        return self.center.size

    def evaluate(self, x):
        d = self._x(x) - self.center
        r = float(np.linalg.norm(d))
        if r == 0.0:
            return geo.Ball(np.zeros(self.dim), self.lam)
        return geo.Singleton(self.lam * d / r)

    def resolvent(self, Z, scale=1.0):
        V = np.atleast_2d(Z) - self.center
        r = np.linalg.norm(V, axis=1)
        mu = scale * self.lam
        inside = r <= mu
        Y = np.empty_like(V)
        Ys = np.empty_like(V)
        Y[inside] = self.center
        Ys[inside] = V[inside] / scale
        out = ~inside
        Y[out] = self.center + V[out] * (1.0 - mu / r[out])[:, None]
        D = Y[out] - self.center
        Ys[out] = self.lam * D / np.linalg.norm(D, axis=1)[:, None]
        return Y, Ys

    def project_image(self, X, V):
        D = X - self.center
        r = np.linalg.norm(D, axis=1)
        P = np.empty_like(V)
        at = r == 0.0
        P[~at] = self.lam * D[~at] / r[~at, None]
        nv = np.linalg.norm(V[at], axis=1)
        shrink = np.minimum(1.0, self.lam / np.maximum(nv, 1e-300))
        P[at] = V[at] * shrink[:, None]
        return P, np.ones(len(X), dtype=bool)

    def kink_points(self):
        return self.center[None, :]

    def bound(self):
        return self.lam

    def to_dict(self):
        return {"type": "norm_subdiff", "lambda": self.lam, "center": self.center.tolist()}

    @property
    def label(self):
        return f"NormSubdiff(lam={self.lam:g}, center={self.center.tolist()})"


@dataclass(frozen=True, eq=False)
class BoxNormalCone(OperatorSpec):
    """Normal cone of the box [lo, hi] (lo < hi componentwise)."""

    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = geo.as_vec(self.lo), geo.as_vec(self.hi)
        if lo.size != hi.size or np.any(lo >= hi):
            raise InvalidInput("box normal cone needs lo < hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    def evaluate(self, x):
        x = self._x(x)
        if np.any(x < self.lo) or np.any(x > self.hi):
            return geo.Empty(self.dim)
        signs = np.where(x == self.hi, 1, np.where(x == self.lo, -1, 0))
        if not signs.any():
            return geo.Singleton(np.zeros(self.dim))
        return geo.OrthantCone(np.zeros(self.dim), signs)

    def resolvent(self, Z, scale=1.0):
        Z = np.atleast_2d(Z)
        Y = np.clip(Z, self.lo, self.hi)
        return Y, (Z - Y) / scale

    def project_image(self, X, V):
        ok = np.all((X >= self.lo) & (X <= self.hi), axis=1)
        P = np.where(X == self.hi, np.maximum(V, 0.0),
                     np.where(X == self.lo, np.minimum(V, 0.0), 0.0))
        P[~ok] = np.nan
        return P, ok

    def domain_distance(self, x):
        x = self._x(x)
        return float(np.linalg.norm(x - np.clip(x, self.lo, self.hi)))

    def domain_box(self):
        return self.lo, self.hi

    def to_dict(self):
        return {"type": "box_normal_cone", "lo": self.lo.tolist(), "hi": self.hi.tolist()}

    @property
    def label(self):
        return f"BoxNormalCone({self.lo.tolist()}, {self.hi.tolist()})"


SMOOTH_CATALOG = ("sqrt1p",)


@dataclass(frozen=True, eq=False)
class SmoothGradient(OperatorSpec):
    """Bounded smooth monotone map; ``sqrt1p``: x -> x / sqrt(1 + |x|^2).

    It is the gradient of sqrt(1 + |x|^2), hence maximal monotone, with
    |T x| < 1 everywhere.
    """

    name: str
    n: int

    def __post_init__(self):
        if self.name not in SMOOTH_CATALOG:
            raise InvalidInput(f"unknown smooth gradient {self.name!r}")
        if not 1 <= int(self.n) <= geo.MAX_DIM:
            raise InvalidInput(f"dimension {self.n} outside [1, {geo.MAX_DIM}]")
        object.__setattr__(self, "n", int(self.n))

    @property
    def dim(self):
        return self.n

    def value(self, X):
        X = np.atleast_2d(X)
        return X / np.sqrt(1.0 + (X * X).sum(axis=1))[:, None]

    def evaluate(self, x):
        return geo.Singleton(self.value(self._x(x))[0])

    def resolvent(self, Z, scale=1.0):
        Z = np.atleast_2d(Z)
        r = np.linalg.norm(Z, axis=1)
        # f(s) = s + scale * s / sqrt(1 + s^2) - r is increasing and concave on
        # s >= 0 with f' >= 1: Newton iterates sit left of the root and rise
        # monotonically, and the root lies in [s, s - f(s)].
        s = np.maximum(r - scale, 0.0)
        for _ in range(100):
            q = np.sqrt(1.0 + s * s)
            f = s + scale * s / q - r
            s_new = np.maximum(s - f / (1.0 + scale / q**3), 0.0)
            if np.all(s_new <= s):
                break
            s = np.maximum(s, s_new)
        f = s + scale * s / np.sqrt(1.0 + s * s) - r
        if np.any(-f > np.maximum(1.0, r) * BISECTION_TOL):
            raise NumericalError("sqrt1p resolvent did not converge",
                                 best_bound=float((-f).max()))
        with np.errstate(invalid="ignore", divide="ignore"):
            Y = np.where(r[:, None] > 0, Z * (s / np.where(r > 0, r, 1.0))[:, None], 0.0)
        return Y, self.value(Y)

    def project_image(self, X, V):
        return self.value(X), np.ones(len(X), dtype=bool)

    def bound(self):
        return 1.0

    def to_dict(self):
        return {"type": "smooth_gradient", "id": self.name, "dim": self.n}

    @property
    def label(self):
        return f"SmoothGradient({self.name}, n={self.n})"


@dataclass(frozen=True, eq=False)
class Sum(OperatorSpec):
    """Pointwise Minkowski sum of member operators."""

    terms: tuple

    def __post_init__(self):
        terms = []
        for t in self.terms:
            terms.extend(t.terms if isinstance(t, Sum) else [t])
        if not terms:
            raise InvalidInput("sum needs at least one operator")
        if len({t.dim for t in terms}) != 1:
            raise InvalidInput("sum members differ in dimension")
        object.__setattr__(self, "terms", tuple(terms))
        if self._domain_bounds() is False:
            raise InvalidInput("sum members have disjoint domains")

    @property
    def dim(self):
        return self.terms[0].dim

    @property
    def maximal(self):
        return all(t.maximal for t in self.terms)

    def evaluate(self, x):
        x = self._x(x)
        return reduce(geo.minkowski_sum, (t.evaluate(x) for t in self.terms))

    def _rest(self):
        rest = self.terms[1:]
        return rest[0] if len(rest) == 1 else Sum(rest)

    def resolvent(self, Z, scale=1.0, tol=1e-13, max_iter=2000, check_every=25,
                  place_tol=1e-9, snap_tol=1e-4):
        """Graph pairs (y, y*) with y + scale*y* close to z.

        Pairs are always exact graph pairs: each Douglas-Rachford iterate is
        completed on the other member by projection.  A row is finished once
        its completed pair lands within ``place_tol`` of z (relative) or the
        iterates agree to ``tol``.  When both members kink at the solution
        convergence is sublinear, so iterates within ``snap_tol`` of a member
        kink are also tried at the kink itself against the whole sum image
        (a snap is kept only when it lowers the residual).
        After ``max_iter`` the best completed pairs are returned as they are.
        """
        Z = np.atleast_2d(np.asarray(Z, dtype=float))
        if len(self.terms) == 1:
            return self.terms[0].resolvent(Z, scale)
        first, rest = self.terms[0], self._rest()
        # Douglas-Rachford on 0 in (x - z) + scale*T1 x + scale*T2 x, the
        # quadratic split evenly so both halves are strongly monotone.
        mu = 2.0 * scale / 3.0
        scale_z = 1.0 + np.abs(Z).max(initial=0.0)
        thresh, place = tol * scale_z, place_tol * scale_z
        kinks = self.kink_points()
        Y, Ys = np.empty_like(Z), np.empty_like(Z)
        act = np.arange(len(Z))
        Za, w = Z, Z.copy()
        for k in range(1, max_iter + 1):
            a, ta = first.resolvent((2.0 * w + Za) / 3.0, mu)
            r = 2.0 * a - w
            b, tb = rest.resolvent((2.0 * r + Za) / 3.0, mu)
            w = w + b - a
            agreed = np.abs(b - a).max(axis=1) <= thresh
            # snapping costs a set projection per row, so only on a doubling schedule
            snap = len(kinks) > 0 and (k & (k - 1) == 0 or k == max_iter)
            if k % check_every and k < max_iter and not snap and not agreed.all():
                continue
            Yc, Ysc, res = self._complete(first, rest, a, ta, b, tb, Za, scale)
            if snap:
                Yc, Ysc, res = self._snap(kinks, a, Yc, Ysc, res, Za, scale, snap_tol * scale_z)
            done = agreed | (res <= place) | (k == max_iter)
            if np.any(done & ~np.isfinite(res)):
                raise NumericalError("sum resolvent left both member domains")
            Y[act[done]], Ys[act[done]] = Yc[done], Ysc[done]
            act, Za, w = act[~done], Za[~done], w[~done]
            if act.size == 0:
                break
        return Y, Ys

    def kink_points(self):
        return np.vstack([t.kink_points() for t in self.terms])

    def _snap(self, kinks, A, Y, Ys, res, Z, scale, radius):
        """Retry rows whose iterate sits near a kink at the kink itself."""
        Y, Ys, res = Y.copy(), Ys.copy(), res.copy()
        for c in kinks:
            near = np.flatnonzero(np.abs(A - c).max(axis=1) <= radius)
            if near.size == 0:
                continue
            S = self.evaluate(c)
            if S.is_empty():
                continue
            P = np.array([S.project(v) for v in (Z[near] - c) / scale])
            rc = np.abs(c + scale * P - Z[near]).max(axis=1)
            better = rc < res[near]
            idx = near[better]
            Y[idx], Ys[idx], res[idx] = c, P[better], rc[better]
        return Y, Ys, res

    @staticmethod
    def _complete(first, rest, a, ta, b, tb, Z, scale):
        """Exact graph pairs from either side; keep the one closest to z."""
        Pa, oka = rest.project_image(a, (Z - a) / scale - ta)
        Pb, okb = first.project_image(b, (Z - b) / scale - tb)
        Ysa = ta + np.where(oka[:, None], Pa, 0.0)
        Ysb = tb + np.where(okb[:, None], Pb, 0.0)
        ra = np.where(oka, np.abs(a + scale * Ysa - Z).max(axis=1), np.inf)
        rb = np.where(okb, np.abs(b + scale * Ysb - Z).max(axis=1), np.inf)
        use_b = (rb < ra)[:, None]
        return np.where(use_b, b, a), np.where(use_b, Ysb, Ysa), np.minimum(ra, rb)

    def project_image(self, X, V):
        single = [t for t in self.terms if isinstance(t, (Linear, SmoothGradient))]
        others = [t for t in self.terms if t not in single]
        if len(others) <= 1:
            base = sum((t.project_image(X, V)[0] for t in single), np.zeros_like(V))
            if not others:
                return base, np.ones(len(X), dtype=bool)
            P, ok = others[0].project_image(X, V - base)
            return P + base, ok
        return super().project_image(X, V)

    def _domain_bounds(self):
        lo = np.full(self.dim, -np.inf)
        hi = np.full(self.dim, np.inf)
        for t in self.terms:
            if isinstance(t, FiniteGraph):
                return None
            box = t.domain_box()
            if box is not None:
                lo, hi = np.maximum(lo, box[0]), np.minimum(hi, box[1])
        if np.any(lo > hi):
            return False
        return lo, hi

    def domain_box(self):
        b = self._domain_bounds()
        if b is None or np.all(np.isinf(b[0])) and np.all(np.isinf(b[1])):
            return None
        return b

    def domain_distance(self, x):
        x = self._x(x)
        b = self._domain_bounds()
        if b is None:
            raise NotImplementedError("domain of a sum containing a finite graph")
        return float(np.linalg.norm(x - np.clip(x, *b)))

    def bound(self):
        return float(sum(t.bound() for t in self.terms))

    def to_dict(self):
        return {"type": "sum", "terms": [t.to_dict() for t in self.terms]}

    @property
    def label(self):
        return "Sum[" + ", ".join(t.label for t in self.terms) + "]"


def zero_operator(n: int) -> Linear:
    return Linear(np.zeros((n, n)))


# ---------------------------------------------------------------------------
# Operations
# ---------------------------------------------------------------------------

def evaluate(T: OperatorSpec, x) -> geo.ConvexSet:
    """T(x) as a ConvexSet; Empty iff x is outside the domain."""
    return T.evaluate(geo.as_vec(x, T.dim))


def resolvent_point(T: OperatorSpec, z) -> GraphPoint:
    """(x, x*) on the graph with x + x* = z."""
    if not T.maximal:
        raise InvalidInput(f"{T.label} is not a maximal catalog member")
    z = geo.as_vec(z, T.dim)
    Y, Ys = T.resolvent(z[None, :])
    return GraphPoint(Y[0], Ys[0])


def grid_points(n: int, radius: float, step: float) -> np.ndarray:
    """Lexicographic grid {k*step : |k*step| <= radius}^n."""
    if not (radius > 0 and step > 0 and step <= radius):
        raise InvalidInput(f"need 0 < step <= radius, got R={radius}, h={step}")
    K = int(math.floor(radius / step + 1e-9))
    m = 2 * K + 1
    if m ** n > MAX_GRID_POINTS:
        raise ResourceError(f"grid of {m}^{n} points exceeds {MAX_GRID_POINTS}")
    axis = np.arange(-K, K + 1) * step
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


def sample_graph(T: OperatorSpec, R: float, h: float) -> GraphSample:
    """Graph pairs J(z) for z on the grid of step h in [-R, R]^n."""
    if isinstance(T, FiniteGraph):
        return GraphSample(T.sample.Y, T.sample.Ys, T.label, math.inf, 0.0)
    Z = grid_points(T.dim, R, h)
    Y, Ys = T.resolvent(Z)
    return GraphSample(Y, Ys, T.label, R, h)


def validate_monotone(s: GraphSample) -> Verdict:
    """Pairwise check <y_i* - y_j*, y_i - y_j> >= -1e-9 over the sample."""
    if len(s) < 2:
        return Verdict("Monotone", True, 0.0, params={"tol": MONOTONE_TOL, "pairs": 0})
    worst, i, j = kernels.pairwise_min(s.Y, s.Ys)
    holds = worst >= -MONOTONE_TOL
    params = {"tol": MONOTONE_TOL, "worst_value": worst, "i": i, "j": j,
              "pairs": len(s) * (len(s) - 1) // 2}
    wit = [("y_i", s.Y[i]), ("ystar_i", s.Ys[i]), ("y_j", s.Y[j]), ("ystar_j", s.Ys[j])]
    return Verdict("Monotone", holds, max(0.0, -worst), wit, params)


def monotone_related(x, xstar, s: GraphSample, tol: float = 0.0):
    """(worst >= -tol, worst) with worst = min <y* - x*, y - x> over the sample."""
    if len(s) == 0:
        raise InvalidInput("empty graph sample")
    x, xstar = geo.as_vec(x, s.dim), geo.as_vec(xstar, s.dim)
    worst, _ = kernels.related_min(s.Y, s.Ys, x, xstar)
    return worst >= -tol, worst


def operator_from_dict(d: dict) -> OperatorSpec:
    """Inverse of ``OperatorSpec.to_dict``."""
    if not isinstance(d, dict) or "type" not in d:
        raise InvalidInput(f"operator description needs a 'type' field: {d!r}")
    kind = d["type"]
    try:
        if kind == "finite_graph":
            return FiniteGraph(GraphSample.from_points(d["points"], source="finite_graph"))
        if kind == "linear":
            return Linear(d["matrix"])
        if kind == "norm_subdiff":
            return NormSubdiff(d["lambda"], d["center"])
        if kind == "box_normal_cone":
            return BoxNormalCone(d["lo"], d["hi"])
        if kind == "smooth_gradient":
            return SmoothGradient(d.get("id", "sqrt1p"), d["dim"])
        if kind == "sum":
            return Sum(tuple(operator_from_dict(t) for t in d["terms"]))
    except KeyError as exc:
        raise InvalidInput(f"operator {kind!r} is missing field {exc}") from None
    raise InvalidInput(f"unknown operator type {kind!r}")


def catalog() -> dict[str, OperatorSpec]:
    """The named operators the checks run on."""
    return {
        "identity": Linear([[1.0]]),
        "rotation": Linear([[0.0, -1.0], [1.0, 0.0]]),
        "psd_nonsym": Linear([[1.0, 2.0], [0.0, 1.0]]),
        "box1": BoxNormalCone([0.0], [1.0]),
        "box2": BoxNormalCone([0.0, 0.0], [1.0, 1.0]),
        "normsubdiff": NormSubdiff(1.0, [0.0, 0.0]),
        "sqrt1p": SmoothGradient("sqrt1p", 2),
    }


def named_operator(name: str, dim: int | None = None) -> OperatorSpec:
    """Catalog lookup; ``dim`` rebuilds dimension-generic members."""
    if dim is not None:
        builders = {
            "identity": lambda n: Linear(np.eye(n)),
            "box": lambda n: BoxNormalCone(np.zeros(n), np.ones(n)),
            "normsubdiff": lambda n: NormSubdiff(1.0, np.zeros(n)),
            "sqrt1p": lambda n: SmoothGradient("sqrt1p", n),
        }
        if name in builders:
            return builders[name](dim)
    cat = catalog()
    if name not in cat:
        raise InvalidInput(f"unknown catalog operator {name!r}; known: {sorted(cat)}")
    return cat[name]
