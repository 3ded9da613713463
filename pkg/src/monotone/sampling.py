"""Multiscale graph sampling concentrated near a base point.

Uniform z-grids waste almost all their points far from where a supremum over
the graph is approached.  Here graph pairs come from resolvents of rays
z = a + t*u cast from a few anchors a (the base point x, the Minty point
x + x*, and a fixed point z with J(z) = x, i.e. z - x in T(x)), over a
geometric ladder of lengths t and a direction set u, plus a coarse global
grid.  A zoom stage re-samples around the best ray found by a score.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .operators import GraphSample, OperatorSpec

_GAUSS = np.random.default_rng(20240611)


def direction_set(n: int, count: int) -> np.ndarray:
    """Deterministic unit directions; exact +/- axes are always included."""
    if n == 1:
        return np.array([[1.0], [-1.0]])
    if n == 2:
        th = 2 * np.pi * np.arange(count) / count
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    G = np.random.default_rng(n).standard_normal((count, n))
    G /= np.linalg.norm(G, axis=1, keepdims=True)
    return np.vstack([np.eye(n), -np.eye(n), G])


def refine_directions(u: np.ndarray, width: float, count: int) -> np.ndarray:
    n = u.size
    if n == 1:
        return u[None, :]
    if n == 2:
        th = math.atan2(u[1], u[0]) + np.linspace(-width, width, count)
        return np.stack([np.cos(th), np.sin(th)], axis=1)
    G = u + width * np.random.default_rng(count).standard_normal((count, n))
    G = np.vstack([u, G])
    return G / np.linalg.norm(G, axis=1, keepdims=True)


def fixed_point_anchor(T: OperatorSpec, x: np.ndarray, z0: np.ndarray,
                       iters: int = 500, tol: float = 1e-13):
    """Iterate z <- x + z - J(z); a fixed point has z - x in T(x).

    The map is firmly nonexpansive, so the iteration converges whenever T(x)
    is nonempty; outside the domain it drifts along the normal direction,
    which is itself a useful anchor.  Returns (z, converged).
    """
    z = np.array(z0, dtype=float)
    for _ in range(iters):
        y, _ = T.resolvent(z[None, :])
        z_new = x + z - y[0]
        if np.abs(z_new - z).max() <= tol * (1.0 + np.abs(z).max()):
            return z_new, True
        z = z_new
    return z, False


def anchors_for(T: OperatorSpec, x: np.ndarray, xstar: np.ndarray | None = None):
    start = x if xstar is None else x + xstar
    fp, _ = fixed_point_anchor(T, x, start)
    A = [x, fp] if xstar is None else [x, x + xstar, fp]
    return np.array(A)


def scale_ladder(t_min: float, t_max: float, factor: float = 2.0) -> np.ndarray:
    k = max(1, int(math.ceil(math.log(t_max / t_min, factor))) + 1)
    return t_min * factor ** np.arange(k)


@dataclass
class Rays:
    """Ray samples z = anchors[a] + t * u with bookkeeping for zooming."""

    Z: np.ndarray
    anchor: np.ndarray
    U: np.ndarray
    t: np.ndarray


def cast(anchors: np.ndarray, dirs: np.ndarray, scales: np.ndarray) -> Rays:
    na, nd, ns = len(anchors), len(dirs), len(scales)
    ai = np.repeat(np.arange(na), nd * ns)
    U = np.tile(np.repeat(dirs, ns, axis=0), (na, 1))
    t = np.tile(scales, na * nd)
    Z = anchors[ai] + t[:, None] * U
    return Rays(Z, ai, U, t)


def coarse_grid(n: int, radius: float, per_axis: int = 9) -> np.ndarray:
    if n > 3:
        per_axis = 3
    axis = np.linspace(-radius, radius, per_axis)
    mesh = np.meshgrid(*([axis] * n), indexing="ij")
    return np.stack([g.ravel() for g in mesh], axis=1)


class RaySearch:
    """Incremental ray sampler maximizing ``score(Y, Ys) -> (value, index)``.

    ``add`` casts rays at new lengths from every anchor; ``zoom`` re-samples
    finer directions and lengths around the incumbent ray.  Every evaluated
    pair is kept, so the incumbent value never decreases.
    """

    def __init__(self, T: OperatorSpec, x: np.ndarray, anchors: np.ndarray, score,
                 n_dirs: int | None = None):
        self.T, self.x, self.anchors, self.score = T, x, anchors, score
        n = x.size
        self.n_dirs = n_dirs or {1: 2, 2: 128}.get(n, 512)
        self.dirs = direction_set(n, self.n_dirs)
        self.best = -math.inf
        self.ray = None
        self._Y, self._Ys = [], []

    def _run(self, rays: Rays) -> bool:
        Y, Ys = self.T.resolvent(rays.Z)
        self._Y.append(Y)
        self._Ys.append(Ys)
        val, i = self.score(Y, Ys)
        if i >= 0 and val > self.best:
            self.best = val
            self.ray = (int(rays.anchor[i]), rays.U[i].copy(), float(rays.t[i]))
            return True
        return False

    def add(self, scales, grid_radius: float | None = None) -> bool:
        rays = cast(self.anchors, self.dirs, np.asarray(scales, dtype=float))
        if grid_radius is not None:
            G = coarse_grid(self.x.size, grid_radius)
            D = G - self.anchors[0]
            nrm = np.linalg.norm(D, axis=1)
            keep = nrm > 0
            rays = Rays(np.vstack([rays.Z, G[keep]]),
                        np.concatenate([rays.anchor, np.zeros(keep.sum(), int)]),
                        np.vstack([rays.U, D[keep] / nrm[keep, None]]),
                        np.concatenate([rays.t, nrm[keep]]))
        return self._run(rays)

    def zoom(self, density: float, radius: float = math.inf, levels: int = 3,
             count: int = 21):
        """Refine around the incumbent; lengths are clipped to ``radius``."""
        if self.ray is None:
            return
        n = self.x.size
        width = (2 * np.pi / self.n_dirs) * 1.5 if n == 2 else 0.5
        for _ in range(levels):
            a, u, t = self.ray
            sub_scales = np.unique(np.concatenate([
                t * 2.0 ** np.linspace(-4, 2, 25),
                scale_ladder(density / 1024.0, max(t, density / 512.0)),
            ]))
            sub_scales = sub_scales[sub_scales <= max(radius, t)]
            rays = cast(self.anchors[a:a + 1], refine_directions(u, width, count), sub_scales)
            rays.anchor[:] = a
            self._run(rays)
            width /= 10.0

    def sample(self, label: str, radius: float, density: float) -> GraphSample:
        return GraphSample(np.vstack(self._Y), np.vstack(self._Ys),
                           f"{label}:multiscale", radius, density)


def multiscale_search(T: OperatorSpec, x: np.ndarray, anchors: np.ndarray, score,
                      radius: float, density: float, n_dirs: int | None = None):
    """One-shot search over the ladder [density/64, radius]; returns
    (best_value, GraphSample of every evaluated pair)."""
    rs = RaySearch(T, x, anchors, score, n_dirs)
    rs.add(scale_ladder(density / 64.0, radius), grid_radius=radius)
    rs.zoom(density, radius)
    return rs.best, rs.sample(T.label, radius, density)


def local_sample(T: OperatorSpec, x: np.ndarray, density: float, radius: float,
                 n_dirs: int | None = None) -> GraphSample:
    """Graph pairs concentrated around x: rays from x and from the fixed-point
    anchor over lengths [density/8, radius], plus a coarse grid."""
    if not 0 < density < radius:
        raise ValueError("need 0 < density < radius")
    x = np.asarray(x, dtype=float)
    rs = RaySearch(T, x, anchors_for(T, x), lambda Y, Ys: (-math.inf, -1),
                   n_dirs or {1: 2, 2: 512}.get(x.size, 1024))
    rs.add(scale_ladder(density / 8.0, radius), grid_radius=radius)
    return rs.sample(T.label, radius, density)
