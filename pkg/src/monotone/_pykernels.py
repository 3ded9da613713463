"""Reference (numpy) implementations of the hot kernels.

Every function here has a twin with the same signature in ``_ckernels.pyx``.
Arrays are float64, C-contiguous; ``Y`` and ``Ys`` have shape (N, n).
"""
import numpy as np

_CHUNK = 2048


def slope_sup(Y, Ys, x, xs, min_dist):
    """Max of <xs - ys, y - x> / |y - x| over rows with |y - x| >= min_dist.

    Returns (value, index); (-inf, -1) when no row qualifies.
    """
    D = Y - x
    nrm = np.sqrt(np.einsum("ij,ij->i", D, D))
    num = np.einsum("ij,ij->i", xs - Ys, D)
    ok = nrm >= min_dist
    if not ok.any():
        return -np.inf, -1
    q = np.full(len(Y), -np.inf)
    q[ok] = num[ok] / nrm[ok]
    i = int(np.argmax(q))
    return float(q[i]), i


def related_min(Y, Ys, x, xs):
    """Min of <ys - xs, y - x>; returns (value, index)."""
    v = np.einsum("ij,ij->i", Ys - xs, Y - x)
    i = int(np.argmin(v))
    return float(v[i]), i


def enlargement_min(Y, Ys, x, xs, eps, weighted):
    """Min of <xs - ys, x - y> + eps * w, w = |x - y| (weighted) or 1.

    Rows with |x - y| < 1e-12 are skipped.  Returns (inf, -1) if none remain.
    """
    D = x - Y
    nrm = np.sqrt(np.einsum("ij,ij->i", D, D))
    v = np.einsum("ij,ij->i", xs - Ys, D) + eps * (nrm if weighted else 1.0)
    v[nrm < 1e-12] = np.inf
    i = int(np.argmin(v))
    if not np.isfinite(v[i]):
        return np.inf, -1
    return float(v[i]), i


def pairwise_min(Y, Ys):
    """Min over i < j of <ys_i - ys_j, y_i - y_j>; returns (value, i, j)."""
    N = len(Y)
    best, bi, bj = np.inf, -1, -1
    for s in range(0, N, _CHUNK):
        blk = slice(s, min(s + _CHUNK, N))
        G = (Ys[blk, None, :] - Ys[None, :, :]) * (Y[blk, None, :] - Y[None, :, :])
        G = G.sum(axis=2)
        rows = np.arange(blk.start, blk.stop)
        G[np.arange(N)[None, :] <= rows[:, None]] = np.inf
        k = np.unravel_index(np.argmin(G), G.shape)
        if G[k] < best:
            best, bi, bj = float(G[k]), int(rows[k[0]]), int(k[1])
    return best, bi, bj


def dykstra_halfspaces(A, b, p, tol, max_sweeps):
    """Dykstra's cyclic projections onto {w : A w >= b} starting at p.

    Returns (w, sweeps, converged).
    """
    m, n = A.shape
    w = p.astype(float).copy()
    corr = np.zeros((m, n))
    sq = np.einsum("ij,ij->i", A, A)
    for sweep in range(1, max_sweeps + 1):
        w_old = w.copy()
        for k in range(m):
            if sq[k] == 0.0:
                continue
            v = w + corr[k]
            slack = A[k] @ v - b[k]
            nv = v - (min(slack, 0.0) / sq[k]) * A[k]
            corr[k] = v - nv
            w = nv
        moved = np.abs(w - w_old).max()
        feas = (b - A @ w).max(initial=0.0)
        if moved < tol and feas < tol:
            return w, sweep, True
    return w, max_sweeps, False
