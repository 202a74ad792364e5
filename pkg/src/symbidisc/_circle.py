"""Supremum of a smooth function over the unit circle, vectorised over points."""

from __future__ import annotations

import numpy as np

N_GRID = 720
_CHUNK = 2048
_R = (np.sqrt(5.0) - 1.0) / 2.0


def circle_sup(f, params, n_grid: int = N_GRID, xtol: float = 1e-12):
    """Maximise ``f(theta, *params)`` over theta for every point.

    ``params`` is a sequence of 1-d arrays of equal length N; ``f`` receives
    each of them reshaped to (n, 1) together with a theta array of shape
    (n, k) and must return a real array of shape (n, k).  A uniform grid
    picks the best cell, then golden-section search refines over the two
    cells adjacent to it.  This is exact for functions with a single local
    maximum on the circle.
    """
    params = [np.asarray(q) for q in params]
    n = params[0].shape[0]
    out = np.empty(n)
    grid = 2.0 * np.pi * np.arange(n_grid) / n_grid
    h = 2.0 * np.pi / n_grid
    for start in range(0, n, _CHUNK):
        sl = slice(start, min(start + _CHUNK, n))
        cols = [q[sl, None] for q in params]
        vals = f(grid[None, :], *cols)
        k = np.argmax(vals, axis=1)
        best = vals[np.arange(vals.shape[0]), k]
        lo = grid[k] - h
        hi = grid[k] + h
        x1 = hi - _R * (hi - lo)
        x2 = lo + _R * (hi - lo)
        f1 = f(x1[:, None], *cols)[:, 0]
        f2 = f(x2[:, None], *cols)[:, 0]
        while np.max(hi - lo) > xtol:
            left = f1 >= f2
            lo, hi = np.where(left, lo, x1), np.where(left, x2, hi)
            nx1 = np.where(left, hi - _R * (hi - lo), x2)
            nx2 = np.where(left, x1, lo + _R * (hi - lo))
            fn = f(np.where(left, nx1, nx2)[:, None], *cols)[:, 0]
            f1, f2 = np.where(left, fn, f2), np.where(left, f1, fn)
            x1, x2 = nx1, nx2
        out[sl] = np.maximum(best, np.maximum(f1, f2))
    return out
