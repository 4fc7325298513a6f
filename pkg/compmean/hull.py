"""Convex hull feasibility checks by linear programming.

A point lies in the relative interior of the hull of the rows x_1..x_n exactly when it can be written as a convex
combination whose weights are all strictly positive. Both checks below maximise the smallest weight t; a positive
optimum certifies interior membership.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import TYPE_CHECKING

import numpy as np
from scipy.optimize import linprog

if TYPE_CHECKING:
    from numpy.typing import NDArray

logger = logging.getLogger(__name__)

_INTERIOR_MARGIN = 1e-12


@dataclass(frozen=True)
class HullCheck:
    interior: bool
    margin: float
    point: NDArray[np.float64] | None = None


def _max_min_weight(
    a_eq: NDArray[np.float64], b_eq: NDArray[np.float64], n_weights: int, n_free: int = 0
) -> tuple[float, NDArray[np.float64] | None]:
    """Maximise t subject to a_eq [w; free; t] = b_eq, w_i >= t, t <= 1.

    Returns the optimum t (or -inf if infeasible) and the solution vector.
    """
    n_vars = n_weights + n_free + 1
    cost = np.zeros(n_vars)
    cost[-1] = -1.0
    # t - w_i <= 0
    a_ub = np.zeros((n_weights, n_vars))
    a_ub[:, :n_weights] = -np.eye(n_weights)
    a_ub[:, -1] = 1.0
    bounds = [(0.0, None)] * n_weights + [(None, None)] * n_free + [(None, 1.0)]
    res = linprog(cost, A_ub=a_ub, b_ub=np.zeros(n_weights), A_eq=a_eq, b_eq=b_eq, bounds=bounds, method="highs")
    if res.status != 0:
        return -np.inf, None
    return float(res.x[-1]), res.x


def point_in_hull(rows: NDArray[np.float64], point: NDArray[np.float64]) -> HullCheck:
    """Is ``point`` strictly inside the convex hull of ``rows``?"""
    n, d = rows.shape
    a_eq = np.zeros((d + 1, n + 1))
    a_eq[:d, :n] = rows.T
    a_eq[d, :n] = 1.0
    b_eq = np.append(point, 1.0)
    margin, _ = _max_min_weight(a_eq, b_eq, n)
    return HullCheck(interior=margin > _INTERIOR_MARGIN, margin=margin, point=np.asarray(point, dtype=float))


def hulls_intersect(rows1: NDArray[np.float64], rows2: NDArray[np.float64]) -> HullCheck:
    """Find a point interior to both hulls, if there is one.

    Weights w (sample 1) and v (sample 2) must both be convex and give the same combination; the smallest weight
    across both sets is maximised.
    """
    n1, d = rows1.shape
    n2 = rows2.shape[0]
    n = n1 + n2
    a_eq = np.zeros((d + 2, n + 1))
    a_eq[:d, :n1] = rows1.T
    a_eq[:d, n1:n] = -rows2.T
    a_eq[d, :n1] = 1.0
    a_eq[d + 1, n1:n] = 1.0
    b_eq = np.zeros(d + 2)
    b_eq[d:] = 1.0
    margin, solution = _max_min_weight(a_eq, b_eq, n)
    point = None if solution is None else rows1.T @ solution[:n1]
    logger.debug("Hull intersection margin %.3g", margin)
    return HullCheck(interior=margin > _INTERIOR_MARGIN, margin=margin, point=point)
