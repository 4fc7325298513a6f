"""Nonparametric bootstrap calibration for any two-sample statistic.

Both samples are first moved onto the common mean estimated under the null, then resampled with replacement.
Replicate b always draws from the stream ``cfg.stream.substream(b)``, so p-values do not depend on the number of
workers or the order in which replicates finish.
"""

from __future__ import annotations

import logging
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Protocol

import numpy as np

from compmean.compositional import EuclideanSample
from compmean.config import get_bootstrap_replicates, get_max_failure_fraction, get_seed, get_threads
from compmean.distributions import RngStream
from compmean.errors import BootstrapError, CompmeanError, InvalidDimensionError
from compmean.quadratic_tests import SampleMoments, moments, spd_inverse, spd_solve

if TYPE_CHECKING:
    from numpy.typing import NDArray

logger = logging.getLogger(__name__)


class TwoSampleStatistic(Protocol):
    def __call__(self, sample1: EuclideanSample, sample2: EuclideanSample, /) -> float: ...


@dataclass(frozen=True)
class BootstrapConfig:
    """Replicate count, seeding and worker bound for one bootstrap calibration.

    ``stream_index`` is the path under ``master_seed`` that replicate streams branch from; simulation studies give
    each repetition its own path so sample draws and bootstrap draws never share a stream.
    """

    B: int
    master_seed: int
    max_parallelism: int | None = None
    max_failure_fraction: float = 0.10
    keep_replicates: bool = False
    stream_index: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        if self.B < 1:
            raise ValueError(f"Bootstrap needs B >= 1 replicates, got {self.B}")
        if self.max_parallelism is not None and self.max_parallelism < 1:
            raise ValueError(f"max_parallelism must be >= 1, got {self.max_parallelism}")
        if not 0.0 <= self.max_failure_fraction <= 1.0:
            raise ValueError(f"max_failure_fraction must lie in [0, 1], got {self.max_failure_fraction}")

    @classmethod
    def from_config(
        cls,
        B: int | None = None,
        seed: int | None = None,
        max_parallelism: int | None = None,
        max_failure_fraction: float | None = None,
        keep_replicates: bool = False,
    ) -> BootstrapConfig:
        """Fill anything not given explicitly from ``[tool.compmean]``."""
        return cls(
            B=get_bootstrap_replicates(B),
            master_seed=get_seed(seed),
            max_parallelism=get_threads(max_parallelism),
            max_failure_fraction=get_max_failure_fraction(max_failure_fraction),
            keep_replicates=keep_replicates,
        )

    @property
    def stream(self) -> RngStream:
        return RngStream(self.master_seed, self.stream_index)

    def with_stream(self, *indices: int, max_parallelism: int | None = None) -> BootstrapConfig:
        return BootstrapConfig(
            B=self.B,
            master_seed=self.master_seed,
            max_parallelism=self.max_parallelism if max_parallelism is None else max_parallelism,
            max_failure_fraction=self.max_failure_fraction,
            keep_replicates=self.keep_replicates,
            stream_index=indices,
        )


@dataclass(frozen=True)
class BootstrapOutcome:
    t_obs: float
    p_value: float
    B: int
    failures: int
    replicate_statistics: NDArray[np.float64] | None = None

    @property
    def successes(self) -> int:
        return self.B - self.failures


def common_mean_estimate(m1: SampleMoments, m2: SampleMoments) -> NDArray[np.float64]:
    """Precision-weighted common mean under the null.

    mu_c = [(n1-1) S1^{-1} + (n2-1) S2^{-1}]^{-1} [(n1-1) S1^{-1} x1 + (n2-1) S2^{-1} x2]
    """
    if m1.d != m2.d:
        raise InvalidDimensionError(f"Samples have different dimensions: {m1.d} and {m2.d}")
    w1 = (m1.n - 1) * spd_inverse(m1.cov, "Covariance S1")
    w2 = (m2.n - 1) * spd_inverse(m2.cov, "Covariance S2")
    return spd_solve(w1 + w2, w1 @ m1.mean + w2 @ m2.mean, "Combined precision")


def center_to_null(
    sample1: EuclideanSample, sample2: EuclideanSample
) -> tuple[EuclideanSample, EuclideanSample]:
    """Shift each sample so its mean is the common mean estimate: y_ji = x_ji - mean_j + mu_c."""
    m1, m2 = moments(sample1), moments(sample2)
    mu_c = common_mean_estimate(m1, m2)
    return EuclideanSample(sample1.data - m1.mean + mu_c), EuclideanSample(sample2.data - m2.mean + mu_c)


def _replicate(
    statistic_fn: TwoSampleStatistic,
    shifted1: NDArray[np.float64],
    shifted2: NDArray[np.float64],
    stream: RngStream,
) -> float | None:
    gen = stream.generator()
    idx1 = gen.integers(0, shifted1.shape[0], size=shifted1.shape[0])
    idx2 = gen.integers(0, shifted2.shape[0], size=shifted2.shape[0])
    try:
        return float(statistic_fn(EuclideanSample(shifted1[idx1]), EuclideanSample(shifted2[idx2])))
    except CompmeanError as e:
        logger.debug("Bootstrap replicate %s failed: %s", stream.stream_index, e)
        return None


def bootstrap_pvalue(
    statistic_fn: TwoSampleStatistic,
    sample1: EuclideanSample,
    sample2: EuclideanSample,
    cfg: BootstrapConfig,
    t_obs: float | None = None,
) -> BootstrapOutcome:
    """Bootstrap p-value (#{T_b > T_obs} + 1) / (B_eff + 1) over the replicates that could be evaluated.

    Pass ``t_obs`` when the caller has already solved the statistic on the observed samples; otherwise it is computed
    here, and errors doing so propagate. Replicates raising a compmean error are counted as failures and dropped;
    more than ``cfg.max_failure_fraction`` of them (or all of them) is a BootstrapError.
    """
    if t_obs is None:
        t_obs = float(statistic_fn(sample1, sample2))
    shifted1, shifted2 = center_to_null(sample1, sample2)
    streams = [cfg.stream.substream(b) for b in range(cfg.B)]

    def run(stream: RngStream) -> float | None:
        return _replicate(statistic_fn, shifted1.data, shifted2.data, stream)

    workers = min(cfg.max_parallelism or 1, cfg.B)
    if workers > 1:
        with ThreadPoolExecutor(max_workers=workers) as executor:
            results = list(executor.map(run, streams))
    else:
        results = [run(stream) for stream in streams]

    statistics = np.array([t for t in results if t is not None], dtype=float)
    failures = cfg.B - statistics.size
    if statistics.size == 0:
        raise BootstrapError(f"All {cfg.B} bootstrap replicates failed")
    if failures:
        fraction = failures / cfg.B
        logger.warning("%d of %d bootstrap replicates failed (%.1f%%)", failures, cfg.B, 100 * fraction)
        if fraction > cfg.max_failure_fraction:
            raise BootstrapError(
                f"{failures} of {cfg.B} bootstrap replicates failed, more than the allowed "
                f"{cfg.max_failure_fraction:.0%}"
            )

    exceed = int(np.count_nonzero(statistics > t_obs))
    p_value = (exceed + 1) / (statistics.size + 1)
    return BootstrapOutcome(
        t_obs=t_obs,
        p_value=p_value,
        B=cfg.B,
        failures=failures,
        replicate_statistics=statistics if cfg.keep_replicates else None,
    )
