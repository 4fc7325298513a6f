"""Two-sample empirical likelihood for a common mean.

For a candidate mean mu each sample j gets weights p_ji = 1 / (n_j (1 + lambda_j' (x_ji - mu))), where lambda_j
solves the dual equation sum_i (x_ji - mu) / (1 + lambda_j' (x_ji - mu)) = 0. Sample j then contributes

    2 sum_i log(1 + lambda_j' (x_ji - mu)) = -2 sum_i log(n_j p_ji)

and the statistic is the minimum over mu of the two contributions. With the factor 2 the statistic is
asymptotically chi2_d under the null.

The inner dual is solved by damped Newton ascent on the concave function sum_i log(1 + lambda' z_i) with a
backtracking line search that keeps every 1 + lambda' z_i above 1e-10 / n. If mu is outside the hull of a sample
the dual is unbounded; that failure is confirmed by a linear program before a ConvexHullError is raised. The outer
minimisation is a Nelder-Mead search started from the precision-weighted common mean.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, NamedTuple

import numpy as np
from scipy.optimize import minimize

from compmean.bootstrap import bootstrap_pvalue, common_mean_estimate
from compmean.calibration import CalibrationSpec, as_calibration_spec, likelihood_pvalue
from compmean.errors import ConvergenceError, ConvexHullError, InvalidDimensionError, SingularCovarianceError
from compmean.hull import hulls_intersect, point_in_hull
from compmean.quadratic_tests import moments

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

    from compmean.compositional import EuclideanSample

logger = logging.getLogger(__name__)

_POSITIVITY_EPS = 1e-10
_DUAL_TOLERANCE = 1e-9
_DUAL_MAX_ITER = 100
_OUTER_TOLERANCE = 1e-8
_PROBE_RESTARTS = 3


@dataclass(frozen=True)
class ElWeights:
    lambda_: NDArray[np.float64]
    weights: NDArray[np.float64]
    mu: NDArray[np.float64]


class ElOneSample(NamedTuple):
    weights: ElWeights
    statistic: float
    iterations: int


@dataclass(frozen=True)
class SolverReport:
    iterations: int
    converged: bool
    hull_status: str = "inside"
    details: dict[str, Any] = field(default_factory=dict)


@dataclass(frozen=True)
class ElResult:
    statistic: float
    mu_hat: NDArray[np.float64]
    lambdas: tuple[NDArray[np.float64], NDArray[np.float64]]
    p_value: float
    calibration: str
    solver_report: SolverReport
    aux: dict[str, Any] = field(default_factory=dict)


class _DualFailure(Exception):
    pass


def _solve_dual(z: NDArray[np.float64]) -> tuple[NDArray[np.float64], int]:
    """Maximise sum_i log(1 + lambda' z_i) over lambda; raises _DualFailure when no finite maximiser is found."""
    n, d = z.shape
    floor = _POSITIVITY_EPS / n
    lam = np.zeros(d)
    w = np.ones(n)
    value = 0.0
    for iteration in range(1, _DUAL_MAX_ITER + 1):
        grad = z.T @ (1.0 / w)
        if np.max(np.abs(grad)) / n <= _DUAL_TOLERANCE:
            return lam, iteration
        scaled = z / w[:, np.newaxis]
        hess = scaled.T @ scaled
        step = np.linalg.lstsq(hess, grad, rcond=None)[0]
        t = 1.0
        while True:
            candidate = lam + t * step
            w_new = 1.0 + z @ candidate
            if np.all(w_new > floor):
                value_new = float(np.sum(np.log(w_new)))
                if value_new >= value - 1e-14 * max(1.0, abs(value)):
                    break
            t /= 2.0
            if t < 1e-12:
                raise _DualFailure("line search stalled at the positivity floor")
        lam, w, value = candidate, w_new, value_new
        # A bounded dual never needs a weight below 1/n at its maximiser.
        if not np.isfinite(value) or np.sum(1.0 / w) < 1e-6 * n:
            raise _DualFailure("dual objective is unbounded")
    raise _DualFailure(f"no convergence in {_DUAL_MAX_ITER} Newton steps")


def el_one_sample(sample: EuclideanSample, mu: ArrayLike, sample_index: int | None = None) -> ElOneSample:
    """Solve the dual for one sample at the candidate mean ``mu``."""
    mu = np.asarray(mu, dtype=float).reshape(-1)
    if mu.size != sample.d:
        raise InvalidDimensionError(f"mu has {mu.size} entries, sample is {sample.d}-dimensional")
    z = sample.data - mu
    try:
        lam, iterations = _solve_dual(z)
    except _DualFailure as e:
        check = point_in_hull(sample.data, mu)
        if not check.interior:
            where = f"sample {sample_index}" if sample_index is not None else "the sample"
            raise ConvexHullError(
                f"Candidate mean lies outside the convex hull of {where}", sample_index=sample_index
            ) from e
        raise ConvergenceError(f"Empirical likelihood dual did not converge: {e}") from e
    w = 1.0 + z @ lam
    weights = 1.0 / (sample.n * w)
    weights /= weights.sum()
    statistic = max(2.0 * float(np.sum(np.log(w))), 0.0)
    return ElOneSample(ElWeights(lambda_=lam, weights=weights, mu=mu), statistic, iterations)


def _start_point(sample1: EuclideanSample, sample2: EuclideanSample) -> NDArray[np.float64]:
    m1, m2 = moments(sample1), moments(sample2)
    try:
        start = common_mean_estimate(m1, m2)
    except SingularCovarianceError:
        start = (m1.n * m1.mean + m2.n * m2.mean) / (m1.n + m2.n)
    inside = point_in_hull(sample1.data, start).interior and point_in_hull(sample2.data, start).interior
    if inside:
        return start
    check = hulls_intersect(sample1.data, sample2.data)
    if not check.interior or check.point is None:
        raise ConvexHullError(
            "The convex hulls of the two samples do not overlap; the empirical likelihood statistic is undefined"
        )
    return check.point


def _initial_simplex(start: NDArray[np.float64], sample1: EuclideanSample, sample2: EuclideanSample) -> NDArray:
    m1, m2 = moments(sample1), moments(sample2)
    scale = np.sqrt(np.diag(m1.cov) / m1.n + np.diag(m2.cov) / m2.n)
    scale = np.where(scale > 0, scale, 1e-3)
    return np.vstack([start, start + 0.5 * np.diag(scale)])


def el_statistic(sample1: EuclideanSample, sample2: EuclideanSample) -> float:
    """Lambda alone, for use as a bootstrap statistic."""
    return _minimise(sample1, sample2)[0]


def _minimise(
    sample1: EuclideanSample, sample2: EuclideanSample
) -> tuple[float, NDArray[np.float64], ElOneSample, ElOneSample, dict[str, Any]]:
    if sample1.d != sample2.d:
        raise InvalidDimensionError(f"Samples have different dimensions: {sample1.d} and {sample2.d}")
    d = sample1.d

    def objective(mu: NDArray[np.float64]) -> float:
        try:
            return el_one_sample(sample1, mu, 1).statistic + el_one_sample(sample2, mu, 2).statistic
        except (ConvexHullError, ConvergenceError):
            return np.inf

    start = _start_point(sample1, sample2)
    simplex = _initial_simplex(start, sample1, sample2)
    step = np.abs(simplex[1:] - start).max(axis=1)
    probe_scale = step * 1e-3
    total_iterations = 0
    restarts = 0
    while True:
        res = minimize(
            objective,
            start,
            method="Nelder-Mead",
            options={
                "initial_simplex": simplex,
                "xatol": 1e-6 * float(step.max()),
                "fatol": _OUTER_TOLERANCE,
                "maxiter": 500 * d,
            },
        )
        total_iterations += int(res.nit)
        if not np.isfinite(res.fun):
            raise ConvergenceError("Empirical likelihood search found no mean feasible for both samples")
        if not res.success:
            raise ConvergenceError(f"Empirical likelihood search did not converge: {res.message}", residual=res.fun)
        better = _probe(objective, res.x, float(res.fun), probe_scale)
        if better is None or restarts >= _PROBE_RESTARTS:
            break
        restarts += 1
        start = better
        simplex = np.vstack([start, start + np.diag(step * 0.1)])

    mu_hat = np.asarray(res.x, dtype=float)
    one = el_one_sample(sample1, mu_hat, 1)
    two = el_one_sample(sample2, mu_hat, 2)
    statistic = one.statistic + two.statistic
    details = {
        "outer_iterations": total_iterations,
        "probe_restarts": restarts,
        # The multipliers attached to the unnormalised constraints are n_j lambda_j; they cancel at the optimum.
        "lambda_balance": float(np.linalg.norm(sample1.n * one.weights.lambda_ + sample2.n * two.weights.lambda_)),
    }
    return statistic, mu_hat, one, two, details


def _probe(objective: Any, x: NDArray[np.float64], fx: float, scale: NDArray[np.float64]) -> NDArray | None:
    """Return a nearby point with a smaller objective, or None if x is a local minimum at this resolution."""
    for k in range(x.size):
        for sign in (1.0, -1.0):
            candidate = x.copy()
            candidate[k] += sign * scale[k]
            if objective(candidate) < fx - 1e-10:
                return candidate
    return None


def el_two_sample(
    sample1: EuclideanSample,
    sample2: EuclideanSample,
    calibration: CalibrationSpec | str = "chi2",
) -> ElResult:
    """Two-sample empirical likelihood test of equal means."""
    spec = as_calibration_spec(calibration)
    statistic, mu_hat, one, two, details = _minimise(sample1, sample2)
    logger.debug("EL statistic %.6g at mu %s", statistic, mu_hat)
    if spec.is_bootstrap:
        outcome = bootstrap_pvalue(el_statistic, sample1, sample2, spec.bootstrap_config(), t_obs=statistic)
        p_value, aux = outcome.p_value, {"B": outcome.B, "failures": outcome.failures}
    else:
        p_value, aux = likelihood_pvalue(statistic, sample1, sample2, spec.kind)
    report = SolverReport(
        iterations=one.iterations + two.iterations + details["outer_iterations"],
        converged=True,
        hull_status="inside",
        details=details,
    )
    return ElResult(
        statistic=statistic,
        mu_hat=mu_hat,
        lambdas=(one.weights.lambda_, two.weights.lambda_),
        p_value=p_value,
        calibration=spec.kind,
        solver_report=report,
        aux=aux,
    )
