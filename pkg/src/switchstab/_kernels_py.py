"""Pure-Python/NumPy kernels: fallback used when the compiled extension is
unavailable. Semantics match switchstab._kernels_cy exactly; integer outputs
are bit-identical across backends, floating-point trajectories agree to
rounding order."""

from __future__ import annotations

import numpy as np


def sample_modes(cum_rows: np.ndarray, r0: int, uniforms: np.ndarray) -> np.ndarray:
    """Mode path of length len(uniforms) + 1 from per-row cumulative sums.

    Step k moves from state s to the first column j with cum_rows[s, j] > u,
    i.e. inverse-CDF sampling on row s.
    """
    n = len(uniforms)
    path = np.empty(n + 1, dtype=np.int64)
    path[0] = r0
    M = cum_rows.shape[1]
    for k in range(n):
        row = cum_rows[path[k]]
        u = uniforms[k]
        j = int(np.searchsorted(row, u, side="right"))
        if j >= M:
            j = M - 1
        path[k + 1] = j
    return path


def sample_gaps(cum: np.ndarray, taus: np.ndarray, uniforms: np.ndarray) -> np.ndarray:
    """Inverse-CDF draws from a finite gap distribution."""
    idx = np.searchsorted(cum, uniforms, side="right")
    np.minimum(idx, len(cum) - 1, out=idx)
    return taus[idx].astype(np.int64)


def fill_sigma(r: np.ndarray, times: np.ndarray, horizon: int) -> np.ndarray:
    """Sampled mode sigma(k) = r(t_{N(k)}) for k = 0..horizon."""
    sigma = np.empty(horizon + 1, dtype=np.int64)
    T = len(times)
    for i in range(T):
        start = int(times[i])
        if start > horizon:
            break
        end = horizon + 1 if i + 1 >= T else min(int(times[i + 1]), horizon + 1)
        sigma[start:end] = r[start]
    return sigma


def closed_loop(
    F: np.ndarray, r: np.ndarray, sigma: np.ndarray, x0: np.ndarray, clamp: float
) -> tuple[np.ndarray, int]:
    """Iterate x(k+1) = F[r(k), sigma(k)] x(k) for k = 0..H-1.

    Returns the (H+1, n) state history and the first step index at which
    ||x|| exceeded the clamp (-1 if none). A clamped state is rescaled to
    norm `clamp` so the iteration stays finite.
    """
    H = len(r) - 1
    n = len(x0)
    X = np.empty((H + 1, n), dtype=np.float64)
    X[0] = x0
    nonfinite = -1
    x = x0.astype(np.float64, copy=True)
    for k in range(H):
        x = F[r[k], sigma[k]] @ x
        s = float(np.sqrt(x @ x))
        if s > clamp:
            x *= clamp / s
            if nonfinite < 0:
                nonfinite = k + 1
        X[k + 1] = x
    return X, nonfinite
