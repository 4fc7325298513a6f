"""Two-sample exponential empirical likelihood.

Weights are exponential tilts, p_1i proportional to exp(lambda' x_1i) and p_2i proportional to
exp(-(n1/n2) lambda' x_2i). Tying the second multiplier to the first through n1 lambda_1 + n2 lambda_2 = 0 removes
the common mean from the problem: lambda is the root of

    r(lambda) = sum_i p_1i x_1i - sum_i p_2i x_2i,

the gradient of the convex function log sum_i exp(lambda' x_1i) + (n2/n1) log sum_i exp(-(n1/n2) lambda' x_2i).
Its Jacobian is Cov_p1(x1) + (n1/n2) Cov_p2(x2), so Newton steps with backtracking on that convex function
converge whenever a root exists.

The statistic is 2 [n1 sum_i p_1i log(n1 p_1i) + n2 sum_i p_2i log(n2 p_2i)], which is asymptotically chi2_d.
With unequal sample sizes the tied multipliers do not give second-order accurate inference; the bootstrap
calibration is the one to use there.
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any

import numpy as np
from scipy.special import log_softmax, logsumexp

from compmean.bootstrap import bootstrap_pvalue
from compmean.calibration import CalibrationSpec, as_calibration_spec, likelihood_pvalue
from compmean.distributions import RngStream
from compmean.el_solver import SolverReport
from compmean.errors import ConvergenceError, InvalidDimensionError, SingularCovarianceError
from compmean.quadratic_tests import moments, spd_inverse

if TYPE_CHECKING:
    from numpy.typing import NDArray

    from compmean.compositional import EuclideanSample

logger = logging.getLogger(__name__)

_RESIDUAL_TOLERANCE = 1e-9
_MAX_ITER = 200
_RESTARTS = 5
# Fixed so restarts are reproducible; they never touch simulation or bootstrap streams.
_RESTART_SEED = 0


@dataclass(frozen=True)
class EelWeights:
    lambda_: NDArray[np.float64]
    weights1: NDArray[np.float64]
    weights2: NDArray[np.float64]
    implied_mu: NDArray[np.float64]
    iterations: int = 0
    residual: float = 0.0

    @property
    def lambda2(self) -> NDArray[np.float64]:
        """Multiplier of the second sample, -(n1/n2) lambda."""
        n1, n2 = self.weights1.size, self.weights2.size
        return -(n1 / n2) * self.lambda_


@dataclass(frozen=True)
class EelResult:
    statistic: float
    implied_mu: NDArray[np.float64]
    lambda_: NDArray[np.float64]
    p_value: float
    calibration: str
    solver_report: SolverReport
    aux: dict[str, Any] = field(default_factory=dict)


class _Tilt:
    """Tilted weights, residual and objective at a given lambda, on data centred by a shared shift."""

    def __init__(self, x1: NDArray[np.float64], x2: NDArray[np.float64]) -> None:
        self.x1, self.x2 = x1, x2
        self.ratio = x1.shape[0] / x2.shape[0]

    def log_weights(self, lam: NDArray[np.float64]) -> tuple[NDArray[np.float64], NDArray[np.float64]]:
        return log_softmax(self.x1 @ lam), log_softmax(-self.ratio * (self.x2 @ lam))

    def objective(self, lam: NDArray[np.float64]) -> float:
        return float(logsumexp(self.x1 @ lam) + logsumexp(-self.ratio * (self.x2 @ lam)) / self.ratio)

    def residual_and_jacobian(
        self, lam: NDArray[np.float64]
    ) -> tuple[NDArray[np.float64], NDArray[np.float64], NDArray[np.float64], NDArray[np.float64]]:
        lw1, lw2 = self.log_weights(lam)
        p1, p2 = np.exp(lw1), np.exp(lw2)
        m1, m2 = p1 @ self.x1, p2 @ self.x2
        c1, c2 = self.x1 - m1, self.x2 - m2
        jac = (c1 * p1[:, np.newaxis]).T @ c1 + self.ratio * (c2 * p2[:, np.newaxis]).T @ c2
        return m1 - m2, (jac + jac.T) / 2.0, p1, p2


def _newton(tilt: _Tilt, lam: NDArray[np.float64]) -> tuple[NDArray[np.float64], int, float, bool]:
    value = tilt.objective(lam)
    residual = np.inf
    for iteration in range(1, _MAX_ITER + 1):
        r, jac, _, _ = tilt.residual_and_jacobian(lam)
        residual = float(np.max(np.abs(r)))
        if residual <= _RESIDUAL_TOLERANCE:
            return lam, iteration, residual, True
        step = np.linalg.lstsq(jac, r, rcond=None)[0]
        t = 1.0
        while t >= 1e-12:
            candidate = lam - t * step
            new_value = tilt.objective(candidate)
            if np.isfinite(new_value) and new_value <= value - 1e-4 * t * float(r @ step):
                break
            t /= 2.0
        else:
            # No descent along the Newton direction: the root is not reachable from here.
            return lam, iteration, residual, False
        lam, value = candidate, new_value
    return lam, _MAX_ITER, residual, False


def eel_solve_lambda(sample1: EuclideanSample, sample2: EuclideanSample) -> EelWeights:
    """Find lambda equating the two tilted means; raises ConvergenceError after the restarts are exhausted."""
    if sample1.d != sample2.d:
        raise InvalidDimensionError(f"Samples have different dimensions: {sample1.d} and {sample2.d}")
    # The constraint system is translation invariant; centring keeps the exponents small.
    shift = sample1.data.mean(axis=0)
    tilt = _Tilt(sample1.data - shift, sample2.data - shift)
    d = sample1.d

    lam, iterations, residual, converged = _newton(tilt, np.zeros(d))
    total = iterations
    if not converged:
        pooled = _pooled_precision(sample1, sample2)
        gen = RngStream(_RESTART_SEED).generator()
        for attempt in range(1, _RESTARTS + 1):
            logger.debug("EEL Newton restart %d, residual %.3g", attempt, residual)
            start = gen.multivariate_normal(np.zeros(d), pooled)
            lam, iterations, residual, converged = _newton(tilt, start)
            total += iterations
            if converged:
                break
    if not converged:
        raise ConvergenceError(
            f"Exponential empirical likelihood did not converge after {_RESTARTS} restarts "
            f"(residual {residual:.3g})",
            residual=residual,
        )

    _, _, p1, p2 = tilt.residual_and_jacobian(lam)
    p1, p2 = p1 / p1.sum(), p2 / p2.sum()
    implied_mu = p1 @ sample1.data
    return EelWeights(lam, p1, p2, implied_mu, iterations=total, residual=residual)


def _pooled_precision(sample1: EuclideanSample, sample2: EuclideanSample) -> NDArray[np.float64]:
    m1, m2 = moments(sample1), moments(sample2)
    pooled = ((m1.n - 1) * m1.cov + (m2.n - 1) * m2.cov) / (m1.n + m2.n - 2)
    try:
        return spd_inverse(pooled, "Pooled covariance")
    except SingularCovarianceError:
        return np.eye(m1.d)


def eel_statistic(weights: EelWeights, n1: int, n2: int) -> float:
    """2 [n1 sum p1 log(n1 p1) + n2 sum p2 log(n2 p2)]; zero for uniform weights."""
    total = 0.0
    for p, n in ((weights.weights1, n1), (weights.weights2, n2)):
        positive = p[p > 0]
        total += n * float(np.sum(positive * np.log(n * positive)))
    return max(2.0 * total, 0.0)


def eel_two_sample_statistic(sample1: EuclideanSample, sample2: EuclideanSample) -> float:
    return eel_statistic(eel_solve_lambda(sample1, sample2), sample1.n, sample2.n)


def eel_two_sample(
    sample1: EuclideanSample,
    sample2: EuclideanSample,
    calibration: CalibrationSpec | str = "chi2",
) -> EelResult:
    """Two-sample exponential empirical likelihood test of equal means."""
    spec = as_calibration_spec(calibration)
    weights = eel_solve_lambda(sample1, sample2)
    statistic = eel_statistic(weights, sample1.n, sample2.n)
    logger.debug("EEL statistic %.6g after %d Newton steps", statistic, weights.iterations)
    if spec.is_bootstrap:
        outcome = bootstrap_pvalue(
            eel_two_sample_statistic, sample1, sample2, spec.bootstrap_config(), t_obs=statistic
        )
        p_value, aux = outcome.p_value, {"B": outcome.B, "failures": outcome.failures}
    else:
        p_value, aux = likelihood_pvalue(statistic, sample1, sample2, spec.kind)
    report = SolverReport(
        iterations=weights.iterations,
        converged=True,
        hull_status="not-applicable",
        details={"residual": weights.residual},
    )
    return EelResult(
        statistic=statistic,
        implied_mu=weights.implied_mu,
        lambda_=weights.lambda_,
        p_value=p_value,
        calibration=spec.kind,
        solver_report=report,
        aux=aux,
    )
