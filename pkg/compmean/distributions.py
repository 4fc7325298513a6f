"""Reference distributions for the analytic calibrations and samplers for the simulation populations.

The chi-squared and F functions are thin, domain-checked wrappers over the regularized incomplete gamma and beta
functions in :mod:`scipy.special`. Survival functions are provided alongside the CDFs so p-values far in the tail
keep their relative precision.

Every sampler draws from an explicit :class:`RngStream`; there is no global random state.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

import numpy as np
from scipy import special

from compmean.compositional import CompositionalSample, alr_inverse_rows
from compmean.errors import InvalidDimensionError

if TYPE_CHECKING:
    from numpy.typing import ArrayLike, NDArray

_SYMMETRY_TOLERANCE = 1e-10
_WEIGHT_TOLERANCE = 1e-12


def _check_dof(**dofs: float) -> None:
    for name, value in dofs.items():
        if not (value > 0 and math.isfinite(value)):
            raise ValueError(f"Degrees of freedom {name} must be a positive finite number, got {value}")


def _check_x(x: float) -> None:
    if not x >= 0:
        raise ValueError(f"Argument must be >= 0, got {x}")


def _check_p(p: float) -> None:
    if not 0.0 < p < 1.0:
        raise ValueError(f"Probability must lie in (0, 1), got {p}")


def chi2_cdf(x: float, k: float) -> float:
    """P(chi2_k <= x) as the regularized lower incomplete gamma P(k/2, x/2)."""
    _check_x(x)
    _check_dof(k=k)
    return float(special.gammainc(k / 2.0, x / 2.0))


def chi2_sf(x: float, k: float) -> float:
    """P(chi2_k > x), computed directly rather than as 1 - cdf."""
    _check_x(x)
    _check_dof(k=k)
    return float(special.gammaincc(k / 2.0, x / 2.0))


def chi2_quantile(p: float, k: float) -> float:
    _check_p(p)
    _check_dof(k=k)
    return float(2.0 * special.gammaincinv(k / 2.0, p))


def f_cdf(x: float, d1: float, d2: float) -> float:
    """P(F_{d1,d2} <= x) through the regularized incomplete beta I_{d1 x/(d1 x + d2)}(d1/2, d2/2)."""
    _check_x(x)
    _check_dof(d1=d1, d2=d2)
    if math.isinf(x):
        return 1.0
    return float(special.betainc(d1 / 2.0, d2 / 2.0, d1 * x / (d1 * x + d2)))


def f_sf(x: float, d1: float, d2: float) -> float:
    """P(F_{d1,d2} > x) as I_{d2/(d2 + d1 x)}(d2/2, d1/2)."""
    _check_x(x)
    _check_dof(d1=d1, d2=d2)
    if math.isinf(x):
        return 0.0
    return float(special.betainc(d2 / 2.0, d1 / 2.0, d2 / (d2 + d1 * x)))


def f_quantile(p: float, d1: float, d2: float) -> float:
    _check_p(p)
    _check_dof(d1=d1, d2=d2)
    b = float(special.betaincinv(d1 / 2.0, d2 / 2.0, p))
    return d2 * b / (d1 * (1.0 - b))


@dataclass(frozen=True)
class RngStream:
    """An independent random stream identified by a master seed and an integer path.

    The path is used as a numpy ``SeedSequence`` spawn key, so (master_seed, stream_index) fully determines the
    draws and distinct paths give statistically independent streams. ``substream`` extends the path, which is how
    repetition r of a study or replicate b of a bootstrap gets its own stream regardless of scheduling.
    """

    master_seed: int
    stream_index: tuple[int, ...] = field(default=())

    def __post_init__(self) -> None:
        index = self.stream_index
        if isinstance(index, (int, np.integer)):
            index = (int(index),)
        index = tuple(int(i) for i in index)
        if self.master_seed < 0 or any(i < 0 for i in index):
            raise ValueError(f"Seeds and stream indices must be nonnegative, got {self.master_seed}, {index}")
        object.__setattr__(self, "stream_index", index)

    def substream(self, *indices: int) -> RngStream:
        return RngStream(self.master_seed, (*self.stream_index, *indices))

    def generator(self) -> np.random.Generator:
        seed_seq = np.random.SeedSequence(self.master_seed, spawn_key=self.stream_index)
        return np.random.Generator(np.random.PCG64(seed_seq))


@dataclass(frozen=True)
class DirichletParams:
    alpha: NDArray[np.float64]

    def __post_init__(self) -> None:
        alpha = np.array(self.alpha, dtype=float)
        if alpha.ndim != 1 or alpha.size < 2:
            raise InvalidDimensionError(f"Dirichlet parameters need at least 2 parts, got shape {alpha.shape}")
        if not np.all((alpha > 0) & np.isfinite(alpha)):
            raise ValueError(f"Dirichlet parameters must be positive and finite, got {alpha.tolist()}")
        alpha.setflags(write=False)
        object.__setattr__(self, "alpha", alpha)

    @property
    def D(self) -> int:
        return self.alpha.size

    @property
    def precision(self) -> float:
        return float(self.alpha.sum())

    def mean(self) -> NDArray[np.float64]:
        return self.alpha / self.alpha.sum()


@dataclass(frozen=True)
class DirichletMixture:
    weights: NDArray[np.float64]
    components: tuple[DirichletParams, ...]

    def __post_init__(self) -> None:
        weights = np.array(self.weights, dtype=float)
        components = tuple(self.components)
        if weights.ndim != 1 or weights.size != len(components) or not components:
            raise ValueError(f"Need one weight per component, got {weights.size} weights for {len(components)}")
        if np.any(weights < 0) or abs(weights.sum() - 1.0) > _WEIGHT_TOLERANCE:
            raise ValueError(f"Mixing weights must be nonnegative and sum to 1, got {weights.tolist()}")
        if len({c.D for c in components}) != 1:
            raise InvalidDimensionError("Mixture components must share the number of parts")
        weights.setflags(write=False)
        object.__setattr__(self, "weights", weights)
        object.__setattr__(self, "components", components)

    @property
    def D(self) -> int:
        return self.components[0].D

    def mean(self) -> NDArray[np.float64]:
        return sum((w * c.mean() for w, c in zip(self.weights, self.components)), start=np.zeros(self.D))


@dataclass(frozen=True)
class LogisticNormalParams:
    """Normal law on R^d pushed onto the simplex by the inverse additive log-ratio map.

    An all-zero ``sigma`` is accepted as the degenerate point mass at alr_inverse(mu).
    """

    mu: NDArray[np.float64]
    sigma: NDArray[np.float64]
    cholesky: NDArray[np.float64] = field(init=False, repr=False)

    def __post_init__(self) -> None:
        mu = np.array(self.mu, dtype=float)
        sigma = np.array(self.sigma, dtype=float)
        d = mu.size
        if mu.ndim != 1 or sigma.shape != (d, d):
            raise InvalidDimensionError(f"mu has {d} entries but sigma has shape {sigma.shape}")
        if not np.allclose(sigma, sigma.T, rtol=0.0, atol=_SYMMETRY_TOLERANCE):
            raise ValueError("sigma must be symmetric")
        if np.all(sigma == 0):
            chol = np.zeros((d, d))
        else:
            try:
                chol = np.linalg.cholesky(sigma)
            except np.linalg.LinAlgError as e:
                raise ValueError("sigma must be positive definite") from e
        for arr in (mu, sigma, chol):
            arr.setflags(write=False)
        object.__setattr__(self, "mu", mu)
        object.__setattr__(self, "sigma", sigma)
        object.__setattr__(self, "cholesky", chol)

    @property
    def D(self) -> int:
        return self.mu.size + 1


def _check_count(n: int) -> None:
    # A CompositionalSample holds at least two rows.
    if n < 2:
        raise ValueError(f"Sample size must be >= 2, got {n}")


def _dirichlet_rows(alpha: ArrayLike, n: int, gen: np.random.Generator) -> NDArray[np.float64]:
    """Gamma(alpha_i, 1) variates normalized by their row sum.

    numpy's gamma sampler handles shapes below 1 by rejection; rows whose variates all underflow are redrawn.
    """
    alpha = np.asarray(alpha, dtype=float)
    g = gen.standard_gamma(alpha, size=(n, alpha.size))
    sums = g.sum(axis=1)
    while np.any(sums == 0):
        empty = sums == 0
        g[empty] = gen.standard_gamma(alpha, size=(int(empty.sum()), alpha.size))
        sums = g.sum(axis=1)
    return g / sums[:, np.newaxis]


def sample_dirichlet(params: DirichletParams, n: int, rng: RngStream) -> CompositionalSample:
    _check_count(n)
    return CompositionalSample(_dirichlet_rows(params.alpha, n, rng.generator()))


def sample_dirichlet_mixture(mix: DirichletMixture, n: int, rng: RngStream) -> CompositionalSample:
    """Draw a component index per row by the mixing weights, then a Dirichlet row from that component."""
    _check_count(n)
    gen = rng.generator()
    labels = gen.choice(len(mix.components), size=n, p=mix.weights)
    rows = np.empty((n, mix.D))
    for k, component in enumerate(mix.components):
        picked = labels == k
        count = int(picked.sum())
        if count:
            rows[picked] = _dirichlet_rows(component.alpha, count, gen)
    return CompositionalSample(rows)


def sample_logistic_normal(params: LogisticNormalParams, n: int, rng: RngStream) -> CompositionalSample:
    _check_count(n)
    gen = rng.generator()
    z = gen.standard_normal((n, params.mu.size))
    return CompositionalSample(alr_inverse_rows(params.mu + z @ params.cholesky.T))
