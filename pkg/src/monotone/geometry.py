"""Vectors and closed convex subsets of R^n.

Primal and dual spaces are identified through the dot product, the norm is
Euclidean, and the dual unit ball is the Euclidean unit ball.  Every set
variant supports projection, distance, membership and support queries;
emptiness is decided exactly (Fourier-Motzkin) for half-space systems.

Extended reals are plain IEEE floats: ``math.inf`` is the value +oo.
"""
from __future__ import annotations

import itertools
import math
from dataclasses import dataclass
from functools import cached_property
from typing import Sequence

import numpy as np

from . import kernels
from .errors import InvalidInput, NumericalError, ResourceError

MAX_DIM = 8
FM_MAX_DIM = 4
FM_BUDGET = 64
FM_COEF_TOL = 1e-12
FM_PAIR_CAP = 4_000_000
DYKSTRA_TOL = 1e-8
DYKSTRA_MAX_SWEEPS = 100_000


def as_vec(p, dim: int | None = None) -> np.ndarray:
    """Validate and freeze a point of R^n (1 <= n <= 8, finite coordinates)."""
    v = np.array(p, dtype=float).reshape(-1)
    if not 1 <= v.size <= MAX_DIM:
        raise InvalidInput(f"dimension {v.size} outside [1, {MAX_DIM}]")
    if not np.all(np.isfinite(v)):
        raise InvalidInput(f"non-finite coordinate in {v}")
    if dim is not None and v.size != dim:
        raise InvalidInput(f"dimension mismatch: expected {dim}, got {v.size}")
    v.setflags(write=False)
    return v


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    if not np.all(np.isfinite(a)):
        raise InvalidInput("non-finite coordinates")
    a.setflags(write=False)
    return a


def _unit(v, eps=0.0):
    nv = float(np.linalg.norm(v))
    return v / nv if nv > eps else None


# ---------------------------------------------------------------------------
# Set variants
# ---------------------------------------------------------------------------

class ConvexSet:
    """Base class; subclasses are frozen dataclasses."""

    dim: int

    def project(self, p: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def distance(self, p: np.ndarray) -> float:
        return float(np.linalg.norm(p - self.project(p)))

    def contains(self, p: np.ndarray, tol: float) -> bool:
        return self.distance(p) <= tol

    def support(self, u: np.ndarray) -> float:
        raise NotImplementedError

    def is_empty(self) -> bool:
        return False

    def is_bounded(self) -> bool:
        return True

    def translate(self, v: np.ndarray) -> "ConvexSet":
        raise NotImplementedError

    def _check(self, p):
        return as_vec(p, self.dim)


@dataclass(frozen=True, eq=False)
class Empty(ConvexSet):
    dim: int

    def project(self, p):
        raise InvalidInput("projection onto the empty set")

    def distance(self, p):
        self._check(p)
        return math.inf

    def contains(self, p, tol):
        self._check(p)
        return False

    def support(self, u):
        raise InvalidInput("support of the empty set")

    def is_empty(self):
        return True

    def translate(self, v):
        return self


@dataclass(frozen=True, eq=False)
class Singleton(ConvexSet):
    point: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "point", as_vec(self.point))

    @property
    def dim(self):
        return self.point.size

    def project(self, p):
        return self.point.copy()

    def contains(self, p, tol):
        return float(np.linalg.norm(self._check(p) - self.point)) <= tol

    def support(self, u):
        return float(self.point @ u)

    def translate(self, v):
        return Singleton(self.point + v)


@dataclass(frozen=True, eq=False)
class FinitePoints(ConvexSet):
    """A finite point set (the image of a finite graph at one x)."""

    points: np.ndarray

    def __post_init__(self):
        P = _frozen(np.atleast_2d(self.points))
        if P.shape[0] == 0:
            raise InvalidInput("FinitePoints needs at least one point")
        object.__setattr__(self, "points", P)

    @property
    def dim(self):
        return self.points.shape[1]

    def project(self, p):
        d = np.linalg.norm(self.points - p, axis=1)
        return self.points[int(np.argmin(d))].copy()

    def support(self, u):
        return float((self.points @ u).max())

    def translate(self, v):
        return FinitePoints(self.points + v)


@dataclass(frozen=True, eq=False)
class Ball(ConvexSet):
    center: np.ndarray
    radius: float

    def __post_init__(self):
        object.__setattr__(self, "center", as_vec(self.center))
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise InvalidInput(f"ball radius must be finite and >= 0, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.center.size

    def project(self, p):
        d = p - self.center
        nd = float(np.linalg.norm(d))
        if nd <= self.radius:
            return np.array(p, dtype=float)
        return self.center + d * (self.radius / nd)

    def distance(self, p):
        return max(0.0, float(np.linalg.norm(self._check(p) - self.center)) - self.radius)

    def support(self, u):
        return float(self.center @ u) + self.radius * float(np.linalg.norm(u))

    def translate(self, v):
        return Ball(self.center + v, self.radius)


@dataclass(frozen=True, eq=False)
class Box(ConvexSet):
    lo: np.ndarray
    hi: np.ndarray

    def __post_init__(self):
        lo, hi = as_vec(self.lo), as_vec(self.hi)
        if lo.size != hi.size:
            raise InvalidInput("box bounds differ in dimension")
        if np.any(lo > hi):
            raise InvalidInput("box needs lo <= hi componentwise")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def dim(self):
        return self.lo.size

    def project(self, p):
        return np.clip(p, self.lo, self.hi)

    def support(self, u):
        return float(np.maximum(self.lo * u, self.hi * u).sum())

    def translate(self, v):
        return Box(self.lo + v, self.hi + v)


@dataclass(frozen=True, eq=False)
class Polytope(ConvexSet):
    """Convex hull of a nonempty vertex list."""

    vertices: np.ndarray

    def __post_init__(self):
        V = _frozen(np.atleast_2d(self.vertices))
        if V.shape[0] == 0:
            raise InvalidInput("polytope vertex list is empty")
        as_vec(V[0])
        object.__setattr__(self, "vertices", V)

    @property
    def dim(self):
        return self.vertices.shape[1]

    def project(self, p):
        return p + min_norm_point(self.vertices - p)

    def support(self, u):
        return float((self.vertices @ u).max())

    def translate(self, v):
        return Polytope(self.vertices + v)


@dataclass(frozen=True, eq=False)
class HalfspaceIntersection(ConvexSet):
    """{w : <a_k, w> >= b_k for every row k}."""

    A: np.ndarray
    b: np.ndarray

    def __post_init__(self):
        A = np.array(self.A, dtype=float)
        if A.ndim != 2:
            raise InvalidInput("constraint matrix must be 2-D")
        b = np.array(self.b, dtype=float).reshape(-1)
        if A.shape[0] != b.size:
            raise InvalidInput("constraint rows and right-hand sides differ in count")
        if not 1 <= A.shape[1] <= MAX_DIM:
            raise InvalidInput(f"dimension {A.shape[1]} outside [1, {MAX_DIM}]")
        object.__setattr__(self, "A", _frozen(A))
        object.__setattr__(self, "b", _frozen(b))

    @classmethod
    def from_constraints(cls, constraints: Sequence[tuple], dim: int | None = None):
        if not constraints:
            if dim is None:
                raise InvalidInput("empty constraint list needs an explicit dim")
            return cls(np.zeros((0, dim)), np.zeros(0))
        A = np.array([np.ravel(a) for a, _ in constraints], dtype=float)
        b = np.array([bb for _, bb in constraints], dtype=float)
        return cls(A, b)

    @property
    def dim(self):
        return self.A.shape[1]

    def is_empty(self):
        return self._empty

    @cached_property
    def _empty(self) -> bool:
        # a verified feasible point settles large systems cheaply; otherwise
        # Fourier-Motzkin decides exactly
        if self.A.shape[0] > FM_BUDGET and _feasible_point(self.A, self.b) is not None:
            return False
        return fm_is_empty(self.A, self.b)

    def is_bounded(self):
        if self.is_empty():
            return True
        n = self.dim
        dirs = np.vstack([np.eye(n), -np.eye(n)])
        return all(math.isfinite(self.support(u)) for u in dirs)

    def contains(self, p, tol):
        p = self._check(p)
        if self.A.shape[0] == 0:
            return True
        norms = np.linalg.norm(self.A, axis=1)
        viol = self.b - self.A @ p
        if np.all(viol <= 0):
            return True
        # zero rows are pure feasibility conditions on b
        if np.any((norms == 0) & (viol > 0)):
            return False
        if tol == 0:
            return False
        if np.any(viol > tol * norms):
            return False
        return self.distance(p) <= tol

    def project(self, p):
        if self.is_empty():
            raise InvalidInput("projection onto an empty half-space system")
        if self.A.shape[0] == 0 or np.all(self.A @ p >= self.b):
            return np.array(p, dtype=float)
        keep = np.linalg.norm(self.A, axis=1) > 0
        # exact least-distance solve; Dykstra's stopping rule is no optimality
        # certificate, so it only backs up a failed solve
        w = _ldp_project(self.A[keep], self.b[keep], p)
        if w is None:
            w = _active_set_project(self.A[keep], self.b[keep], p)
        if w is not None:
            return w
        w, sweeps, ok = kernels.dykstra_halfspaces(
            self.A[keep], self.b[keep], p, DYKSTRA_TOL, DYKSTRA_MAX_SWEEPS)
        if not ok:
            raise NumericalError(
                f"Dykstra did not converge in {sweeps} sweeps",
                best_bound=float(np.linalg.norm(p - w)))
        return w

    def distance(self, p):
        p = self._check(p)
        if self.is_empty():
            return math.inf
        return float(np.linalg.norm(p - self.project(p)))

    @cached_property
    def _lp_rows(self) -> dict:
        # row norms shared by every support LP on this system
        return {}

    def support(self, u):
        if self.is_empty():
            raise InvalidInput("support of an empty half-space system")
        return _halfspace_support(self.A, self.b, np.asarray(u, dtype=float), self._lp_rows)

    def translate(self, v):
        return HalfspaceIntersection(self.A, self.b + self.A @ v)


@dataclass(frozen=True, eq=False)
class OrthantCone(ConvexSet):
    """apex + product of rays: coordinate i ranges over apex_i + s_i * [0, inf).

    ``signs`` entries are -1, 0 or +1; 0 pins the coordinate to the apex.
    """

    apex: np.ndarray
    signs: np.ndarray

    def __post_init__(self):
        apex = as_vec(self.apex)
        s = np.array(self.signs, dtype=int).reshape(-1)
        if s.size != apex.size or not np.all(np.isin(s, (-1, 0, 1))):
            raise InvalidInput("orthant signs must be -1/0/+1, one per coordinate")
        s.setflags(write=False)
        object.__setattr__(self, "apex", apex)
        object.__setattr__(self, "signs", s)

    @property
    def dim(self):
        return self.apex.size

    def project(self, p):
        d = p - self.apex
        d = np.where(self.signs > 0, np.maximum(d, 0.0),
                     np.where(self.signs < 0, np.minimum(d, 0.0), 0.0))
        return self.apex + d

    def support(self, u):
        if np.any(self.signs * u > 0):
            return math.inf
        return float(self.apex @ u)

    def is_bounded(self):
        return not np.any(self.signs)

    def translate(self, v):
        return OrthantCone(self.apex + v, self.signs)


@dataclass(frozen=True, eq=False)
class BallSum(ConvexSet):
    """base + radius * (unit ball); never nested."""

    base: ConvexSet
    radius: float

    def __post_init__(self):
        if isinstance(self.base, BallSum):
            object.__setattr__(self, "radius", self.radius + self.base.radius)
            object.__setattr__(self, "base", self.base.base)
        if not (self.radius >= 0 and math.isfinite(self.radius)):
            raise InvalidInput(f"ball radius must be finite and >= 0, got {self.radius}")
        object.__setattr__(self, "radius", float(self.radius))

    @property
    def dim(self):
        return self.base.dim

    def project(self, p):
        q = self.base.project(p)
        d = p - q
        nd = float(np.linalg.norm(d))
        if nd <= self.radius:
            return np.array(p, dtype=float)
        return q + d * (self.radius / nd)

    def distance(self, p):
        return max(0.0, self.base.distance(p) - self.radius)

    def support(self, u):
        return self.base.support(u) + self.radius * float(np.linalg.norm(u))

    def is_empty(self):
        return self.base.is_empty()

    def is_bounded(self):
        return self.base.is_bounded()

    def translate(self, v):
        return BallSum(self.base.translate(v), self.radius)


# ---------------------------------------------------------------------------
# Set operations (module-level API)
# ---------------------------------------------------------------------------

def _dim_check(S: ConvexSet, p) -> np.ndarray:
    return as_vec(p, S.dim)


def set_contains(S: ConvexSet, p, tol: float = 0.0) -> bool:
    """True iff the distance from p to S is at most tol."""
    p = _dim_check(S, p)
    if tol < 0:
        raise InvalidInput("tol must be >= 0")
    return S.contains(p, tol)


def set_distance(S: ConvexSet, p) -> float:
    """Euclidean distance from p to S (inf for the empty set)."""
    p = _dim_check(S, p)
    if S.is_empty():
        return math.inf
    return S.distance(p)


def set_project(S: ConvexSet, p) -> np.ndarray:
    p = _dim_check(S, p)
    if S.is_empty():
        raise InvalidInput("projection onto the empty set")
    return S.project(p)


def set_support(S: ConvexSet, u) -> float:
    """sup over S of <., u> for a unit vector u (may be inf)."""
    u = _dim_check(S, u)
    if abs(float(np.linalg.norm(u)) - 1.0) > 1e-12:
        raise InvalidInput("support direction must be a unit vector")
    if S.is_empty():
        raise InvalidInput("support of the empty set")
    return S.support(u)


def set_is_empty(S: ConvexSet) -> bool:
    return S.is_empty()


def minkowski_ball(S: ConvexSet, r: float) -> ConvexSet:
    """S + r * (unit ball)."""
    if not r >= 0:
        raise InvalidInput(f"ball radius must be >= 0, got {r}")
    if r == 0 or isinstance(S, Empty):
        return S
    if isinstance(S, Singleton):
        return Ball(S.point, r)
    if isinstance(S, Ball):
        return Ball(S.center, S.radius + r)
    return BallSum(S, r)


def hausdorff_estimate(S1: ConvexSet, S2: ConvexSet, directions) -> float:
    """max over the given unit directions of |h_S1(u) - h_S2(u)|.

    A lower bound of the Hausdorff distance, exact in the dense limit.
    """
    if S1.dim != S2.dim:
        raise InvalidInput("dimension mismatch")
    U = np.atleast_2d(np.asarray(directions, dtype=float))
    if U.shape[0] == 0:
        raise InvalidInput("no directions given")
    best = 0.0
    for u in U:
        a, b = set_support(S1, u), set_support(S2, u)
        if not (math.isfinite(a) and math.isfinite(b)):
            raise InvalidInput("hausdorff_estimate needs bounded sets")
        best = max(best, abs(a - b))
    return best


def translate(S: ConvexSet, v) -> ConvexSet:
    return S.translate(_dim_check(S, v))


def _as_intervals(S: ConvexSet):
    """(lo, hi) arrays for product-of-interval sets, else None."""
    if isinstance(S, Singleton):
        return S.point.copy(), S.point.copy()
    if isinstance(S, Box):
        return S.lo.copy(), S.hi.copy()
    if isinstance(S, OrthantCone):
        lo = np.where(S.signs < 0, -np.inf, S.apex)
        hi = np.where(S.signs > 0, np.inf, S.apex)
        return lo, hi
    return None


def _from_intervals(lo, hi) -> ConvexSet:
    if np.all(np.isfinite(lo)) and np.all(np.isfinite(hi)):
        return Singleton(lo) if np.array_equal(lo, hi) else Box(lo, hi)
    n = lo.size
    fixed = np.isfinite(lo) & np.isfinite(hi) & (lo == hi)
    half = np.isfinite(lo) ^ np.isfinite(hi)
    if np.all(fixed | half):
        apex = np.where(np.isfinite(lo), lo, hi)
        signs = np.where(fixed, 0, np.where(np.isfinite(lo), 1, -1))
        return OrthantCone(apex, signs)
    rows, rhs = [], []
    for i in range(n):
        e = np.zeros(n)
        e[i] = 1.0
        if np.isfinite(lo[i]):
            rows.append(e)
            rhs.append(lo[i])
        if np.isfinite(hi[i]):
            rows.append(-e)
            rhs.append(-hi[i])
    return HalfspaceIntersection(np.array(rows).reshape(-1, n), np.array(rhs))


def minkowski_sum(S1: ConvexSet, S2: ConvexSet) -> ConvexSet:
    """S1 + S2 for the combinations that stay inside the variant family."""
    if S1.dim != S2.dim:
        raise InvalidInput("dimension mismatch")
    if S1.is_empty() or S2.is_empty():
        return Empty(S1.dim)
    for P, Q in ((S1, S2), (S2, S1)):
        if isinstance(P, Singleton):
            return Q.translate(P.point)
    for P, Q in ((S1, S2), (S2, S1)):
        if isinstance(P, Ball):
            return minkowski_ball(Q.translate(P.center), P.radius)
        if isinstance(P, BallSum):
            return minkowski_ball(minkowski_sum(P.base, Q), P.radius)
    I1, I2 = _as_intervals(S1), _as_intervals(S2)
    if I1 is not None and I2 is not None:
        with np.errstate(invalid="ignore"):
            return _from_intervals(I1[0] + I2[0], I1[1] + I2[1])
    V1 = _vertex_list(S1)
    V2 = _vertex_list(S2)
    if V1 is not None and V2 is not None:
        return Polytope((V1[:, None, :] + V2[None, :, :]).reshape(-1, S1.dim))
    raise NotImplementedError(
        f"Minkowski sum of {type(S1).__name__} and {type(S2).__name__}")


def _vertex_list(S):
    if isinstance(S, (Polytope,)):
        return S.vertices
    if isinstance(S, FinitePoints):
        return S.points
    if isinstance(S, Box):
        n = S.dim
        corners = np.array(np.meshgrid(*[[0, 1]] * n, indexing="ij")).reshape(n, -1).T
        return S.lo + corners * (S.hi - S.lo)
    return None


def set_gap(S1: ConvexSet, S2: ConvexSet, tol: float = 1e-13,
            max_iter: int = 200_000) -> float:
    """inf of |p - q| over p in S1, q in S2, by alternating projections.

    The returned value is an upper bound (distance of a feasible pair).
    """
    if S1.is_empty() or S2.is_empty():
        return math.inf
    if isinstance(S1, Singleton):
        return S2.distance(S1.point)
    if isinstance(S2, Singleton):
        return S1.distance(S2.point)
    # ball against anything: distance of the center minus the radius
    for B, S in ((S1, S2), (S2, S1)):
        if isinstance(B, Ball):
            return max(0.0, S.distance(B.center) - B.radius)
    p = S1.project(S2.project(np.zeros(S1.dim)))
    gap = math.inf
    for _ in range(max_iter):
        q = S2.project(p)
        p_new = S1.project(q)
        gap = float(np.linalg.norm(p_new - q))
        if np.linalg.norm(p_new - p) <= tol:
            break
        p = p_new
    return gap


def _ldp_project(A, b, p, tol: float = 1e-9):
    """Projection of p onto {w : A w >= b} as a least-distance program,
    reduced to nonnegative least squares (Lawson-Hanson).  None when the
    result is not feasible to ``tol``."""
    from scipy.optimize import lsq_linear

    norms = np.linalg.norm(A, axis=1)
    G = A / norms[:, None]
    h = (b - A @ p) / norms
    n = A.shape[1]
    E = np.vstack([G.T, h[None, :]])
    f = np.zeros(n + 1)
    f[n] = 1.0
    # bounded-variable least squares; scipy's nnls can stop short of the optimum
    u = lsq_linear(E, f, bounds=(0.0, np.inf), method="bvls", tol=1e-14).x
    r = E @ u - f
    if abs(r[n]) < 1e-14:
        return None
    w = p - r[:n] / r[n]
    if np.any(h - G @ (w - p) > tol * np.maximum(1.0, np.abs(h))):
        return None
    return w


def _active_set_project(A, b, p, tol: float = 1e-9, budget: int = 20_000):
    """Projection by active-set enumeration: the nearest feasible point among
    the projections of p onto {A_S w = b_S}, |S| <= n.  Exact and immune to
    conditioning, but only for small systems (None beyond ``budget``)."""
    m, n = A.shape
    if sum(math.comb(m, k) for k in range(1, min(m, n) + 1)) > budget:
        return None
    norms = np.linalg.norm(A, axis=1)
    G, h = A / norms[:, None], b / norms
    if np.all(G @ p >= h):
        return np.array(p, dtype=float)
    best, best_d = None, math.inf
    for k in range(1, min(m, n) + 1):
        for S in itertools.combinations(range(m), k):
            GS = G[list(S)]
            # minimal-norm step onto GS w = hS (no Gram matrix: it squares
            # the conditioning)
            w = p + np.linalg.lstsq(GS, h[list(S)] - GS @ p, rcond=None)[0]
            if np.any(h - G @ w > tol * np.maximum(1.0, np.abs(h))):
                continue
            d = float(np.linalg.norm(w - p))
            if d < best_d:
                best, best_d = w, d
    return best


# ---------------------------------------------------------------------------
# Polytope projection: Wolfe's minimum-norm-point algorithm
# ---------------------------------------------------------------------------

def min_norm_point(P: np.ndarray, eps: float = 1e-12, max_iter: int = 10_000) -> np.ndarray:
    """Point of minimum Euclidean norm in conv(rows of P); finite termination."""
    P = np.atleast_2d(np.asarray(P, dtype=float))
    scale = max(1.0, float((P * P).sum(axis=1).max()))
    S = [int(np.argmin((P * P).sum(axis=1)))]
    lam = np.array([1.0])
    x = P[S[0]].copy()
    for _ in range(max_iter):
        g = P @ x
        j = int(np.argmin(g))
        if x @ x - g[j] <= eps * scale or j in S:
            return x
        S.append(j)
        lam = np.append(lam, 0.0)
        while True:
            alpha = _affine_minimizer(P[S])
            if np.all(alpha > eps):
                lam = alpha
                x = lam @ P[S]
                break
            neg = alpha <= eps
            theta = min(1.0, float(np.min(lam[neg] / (lam[neg] - alpha[neg]))))
            lam = theta * alpha + (1 - theta) * lam
            keep = lam > eps
            S = [s for s, k in zip(S, keep) if k]
            lam = lam[keep]
            lam = lam / lam.sum()
            x = lam @ P[S]
    raise NumericalError("min-norm-point did not terminate",
                         best_bound=float(np.linalg.norm(x)))


def _affine_minimizer(Q: np.ndarray) -> np.ndarray:
    k = Q.shape[0]
    M = np.zeros((k + 1, k + 1))
    M[:k, :k] = Q @ Q.T
    M[:k, k] = 1.0
    M[k, :k] = 1.0
    rhs = np.zeros(k + 1)
    rhs[k] = 1.0
    sol = np.linalg.lstsq(M, rhs, rcond=None)[0]
    return sol[:k]


# ---------------------------------------------------------------------------
# Half-space systems: Fourier-Motzkin emptiness and LP support
# ---------------------------------------------------------------------------

def _dedupe(A, b):
    """Merge rows with equal (scaled) coefficients, keeping the tightest b."""
    if A.shape[0] == 0:
        return A, b
    scale = np.abs(A).max(axis=1)
    scale[scale == 0] = 1.0
    A = A / scale[:, None]
    b = b / scale
    key = np.round(A / FM_COEF_TOL).astype(np.int64) if A.shape[1] else np.zeros((len(b), 0), np.int64)
    _, inv = np.unique(key, axis=0, return_inverse=True)
    inv = inv.reshape(-1)
    nb = np.full(inv.max() + 1, -np.inf)
    np.maximum.at(nb, inv, b)
    first = np.zeros(inv.max() + 1, dtype=int)
    first[inv[::-1]] = np.arange(len(inv))[::-1]
    return A[first], nb


def fm_is_empty(A, b, *, max_dim: int = FM_MAX_DIM, budget: int = FM_BUDGET,
                feas_tol: float = 1e-9) -> bool:
    """Decide emptiness of {w : A w >= b} by Fourier-Motzkin elimination.

    Rows are deduplicated after every elimination; more than ``budget``
    distinct derived rows raises ResourceError.
    """
    A = np.array(A, dtype=float)
    b = np.array(b, dtype=float).reshape(-1)
    n = A.shape[1]
    if n > max_dim:
        raise ResourceError(f"Fourier-Motzkin capped at n <= {max_dim}, got {n}")
    while True:
        if A.shape[0] == 0:
            return False
        zero = np.abs(A).max(axis=1, initial=0.0) <= FM_COEF_TOL
        if np.any(b[zero] > feas_tol * np.maximum(1.0, np.abs(b[zero]))):
            return True
        A, b = A[~zero], b[~zero]
        if A.shape[0] == 0:
            return False
        k = A.shape[1] - 1
        col = A[:, k]
        pos, neg = col > FM_COEF_TOL, col < -FM_COEF_TOL
        Z = ~(pos | neg)
        Ap, bp = A[pos, :k] / col[pos, None], b[pos] / col[pos]
        An, bn = A[neg, :k] / -col[neg, None], b[neg] / -col[neg]
        if k == 0:
            # last variable: w >= max(bp) and w <= -max(bn)
            if pos.any() and neg.any():
                s = bp.max() + bn.max()
                return bool(s > feas_tol * max(1.0, abs(bp.max()), abs(bn.max())))
            return False
        if Ap.shape[0] * An.shape[0] > FM_PAIR_CAP:
            raise ResourceError(
                f"Fourier-Motzkin step would combine {Ap.shape[0]} x {An.shape[0]} rows")
        newA = (Ap[:, None, :] + An[None, :, :]).reshape(-1, k)
        newb = (bp[:, None] + bn[None, :]).reshape(-1)
        A = np.vstack([A[Z, :k], newA])
        b = np.concatenate([b[Z], newb])
        nonconst = np.abs(A).max(axis=1, initial=0.0) > FM_COEF_TOL
        if np.any(b[~nonconst] > feas_tol * np.maximum(1.0, np.abs(b[~nonconst]))):
            return True
        A, b = _dedupe(A[nonconst], b[nonconst])
        if A.shape[0] > budget:
            raise ResourceError(
                f"Fourier-Motzkin produced {A.shape[0]} derived constraints (> {budget})")


# presolve misreads the near-degenerate slivers that tight enlargements
# produce (opposing constraints almost tangent) as infeasible
_LP_OPTIONS = {"presolve": False}
LP_BOX = 1e9
ROWGEN_BATCH = 512
ROWGEN_SEED_ROWS = 64
ROWGEN_MAX_ROUNDS = 200


def _row_norms(A: np.ndarray, cache: dict | None) -> np.ndarray:
    if cache is not None and "norms" in cache:
        return cache["norms"]
    norms = np.linalg.norm(A, axis=1)
    norms = np.where(norms > 0, norms, 1.0)
    if cache is not None:
        cache["norms"] = norms
    return norms


def _initial_rows(A: np.ndarray, norms: np.ndarray, dirs: np.ndarray,
                  per_dir: int = ROWGEN_SEED_ROWS) -> np.ndarray:
    """Rows whose normals best oppose each direction (they cap it first)."""
    S = (A @ -dirs.T) / norms[:, None]
    k = min(per_dir, len(A))
    return np.unique(np.argpartition(-S, k - 1, axis=0)[:k].ravel())


def _row_generation(A, b, solve, dirs, tol, cache=None):
    """Solve an LP over {A w >= b} by adding violated rows to an active set.

    ``solve(A_sub, b_sub)`` returns (status, w) for the relaxation; a
    relaxed optimum that satisfies every row is optimal for the full system,
    and an infeasible relaxation proves the full system infeasible.
    """
    norms = _row_norms(A, cache)
    thresh = tol * np.maximum(1.0, np.abs(b))
    active = _initial_rows(A, norms, dirs)
    for _ in range(ROWGEN_MAX_ROUNDS):
        status, w = solve(A[active], b[active])
        if w is None:
            return status, None
        viol = (b - A @ w - thresh) / norms
        bad = np.flatnonzero(viol > 0)
        if bad.size == 0:
            return status, w
        add = np.setdiff1d(bad[np.argsort(viol[bad])[::-1][:ROWGEN_BATCH]], active)
        if add.size == 0:
            # violations left only on active rows are solver tolerance
            return status, w
        active = np.union1d(active, add)
    raise NumericalError("row generation did not settle", best_bound=float(viol.max()))


def _feasible_point(A, b, tol: float = 1e-9):
    """A point with A w >= b - tol * max(1, |b|), found by maximizing the
    normalized slack; None when there is none."""
    from scipy.optimize import linprog

    n = A.shape[1]

    def solve(As, bs):
        norms = np.linalg.norm(As, axis=1)
        c = np.zeros(n + 1)
        c[-1] = -1.0
        res = linprog(c, A_ub=-np.hstack([As, -norms[:, None]]), b_ub=-bs,
                      bounds=[(-LP_BOX, LP_BOX)] * n + [(None, 1.0)],
                      method="highs", options=_LP_OPTIONS)
        # a negative optimal slack proves the relaxation (hence the system) infeasible
        if res.status != 0 or res.x[-1] < -tol:
            return res.status, None
        return res.status, res.x[:n]

    dirs = np.vstack([np.eye(n), -np.eye(n)])
    return _row_generation(A, b, solve, dirs, tol)[1]


def _halfspace_support(A, b, u, cache: dict | None = None) -> float:
    n = A.shape[1]
    if A.shape[0] == 0:
        return 0.0 if not np.any(u) else math.inf
    if n == 1:
        a = A[:, 0]
        lo = (b[a > 0] / a[a > 0]).max(initial=-np.inf)
        hi = (b[a < 0] / a[a < 0]).min(initial=np.inf)
        return float(max(u[0] * lo, u[0] * hi)) if u[0] != 0 else 0.0
    from scipy.optimize import linprog

    def solve(As, bs):
        res = linprog(-u, A_ub=-As, b_ub=-bs, bounds=[(-LP_BOX, LP_BOX)] * n,
                      method="highs", options=_LP_OPTIONS)
        return res.status, (res.x if res.status == 0 else None)

    dirs = np.vstack([np.eye(n), -np.eye(n), u[None, :]])
    status, w = _row_generation(A, b, solve, dirs, 1e-12, cache)
    if w is None:
        raise NumericalError(f"support LP failed (status {status})")
    # an optimum on the artificial box means the true support is unbounded
    if np.abs(w).max() >= 0.999 * LP_BOX:
        return math.inf
    return float(u @ w)
