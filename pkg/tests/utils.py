"""Test utilities: brute-force oracles and small sample builders."""

from collections.abc import Callable
from typing import Any

import numpy as np
from scipy.optimize import brentq

DataFrameFactory = Callable[[dict[str, Any]], Any]


def el_dual_oracle(x: np.ndarray, mu: float) -> float:
    """Root of sum z / (1 + lam z) = 0 for 1-d data, bracketed strictly inside the feasible interval."""
    z = np.asarray(x, dtype=float) - mu
    low, high = -1.0 / z.max(), -1.0 / z.min()
    pad = 1e-12 * (high - low)
    return brentq(lambda lam: np.sum(z / (1.0 + lam * z)), low + pad, high - pad, xtol=1e-14)


def el_partial_oracle(x: np.ndarray, mu: float) -> float:
    z = np.asarray(x, dtype=float) - mu
    lam = el_dual_oracle(x, mu)
    return 2.0 * float(np.sum(np.log1p(lam * z)))


def el_two_sample_oracle(x: np.ndarray, y: np.ndarray, grid_size: int = 2001) -> float:
    """Minimum over a dense grid of mu, refined once around the best grid point."""
    low = max(np.min(x), np.min(y))
    high = min(np.max(x), np.max(y))
    span = high - low
    grid = np.linspace(low + 1e-6 * span, high - 1e-6 * span, grid_size)
    values = np.array([el_partial_oracle(x, m) + el_partial_oracle(y, m) for m in grid])
    k = int(np.argmin(values))
    fine = np.linspace(grid[max(k - 1, 0)], grid[min(k + 1, grid_size - 1)], 2001)
    return float(min(el_partial_oracle(x, m) + el_partial_oracle(y, m) for m in fine))


def eel_residual_1d(x: np.ndarray, y: np.ndarray, lam: float) -> float:
    ratio = len(x) / len(y)
    a = np.exp(lam * x - np.max(lam * x))
    b = np.exp(-ratio * lam * y - np.max(-ratio * lam * y))
    return float(a @ x / a.sum() - b @ y / b.sum())


def eel_lambda_oracle(x: np.ndarray, y: np.ndarray, bracket: float = 50.0) -> float:
    return brentq(lambda lam: eel_residual_1d(x, y, lam), -bracket, bracket, xtol=1e-14)
