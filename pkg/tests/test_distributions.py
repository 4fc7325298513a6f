"""Tests for the chi-squared and F functions, random streams and the samplers."""

import math

import numpy as np
import pytest
from scipy import stats

from compmean.distributions import (
    DirichletMixture,
    DirichletParams,
    LogisticNormalParams,
    RngStream,
    chi2_cdf,
    chi2_quantile,
    chi2_sf,
    f_cdf,
    f_quantile,
    f_sf,
    sample_dirichlet,
    sample_dirichlet_mixture,
    sample_logistic_normal,
)
from compmean.errors import InvalidDimensionError


class TestChiSquared:
    @pytest.mark.parametrize(("x", "k"), [(0.5, 1), (3.84, 1), (7.81, 3), (20.0, 9), (1e-3, 0.5)])
    def test_cdf_matches_scipy(self, x: float, k: float) -> None:
        assert chi2_cdf(x, k) == pytest.approx(stats.chi2.cdf(x, k), rel=1e-12)

    def test_known_quantile(self) -> None:
        assert chi2_quantile(0.95, 1) == pytest.approx(3.841458820694124, rel=1e-10)
        assert chi2_quantile(0.95, 3) == pytest.approx(7.814727903251178, rel=1e-10)

    def test_two_parts_of_one(self) -> None:
        x, k = 5.0, 4
        assert chi2_cdf(x, k) + chi2_sf(x, k) == pytest.approx(1.0, abs=1e-15)

    def test_far_tail_keeps_precision(self) -> None:
        sf = chi2_sf(400.0, 2)

        assert sf > 0
        assert sf == pytest.approx(math.exp(-200.0), rel=1e-10)

    def test_zero(self) -> None:
        assert chi2_cdf(0.0, 3) == 0.0
        assert chi2_sf(0.0, 3) == 1.0

    @pytest.mark.parametrize("p", [0.01, 0.5, 0.95, 0.999])
    def test_quantile_inverts_cdf(self, p: float) -> None:
        assert chi2_cdf(chi2_quantile(p, 5), 5) == pytest.approx(p, abs=1e-12)

    def test_rejects_negative_argument(self) -> None:
        with pytest.raises(ValueError, match=">= 0"):
            chi2_cdf(-1.0, 2)

    @pytest.mark.parametrize("k", [0, -1, math.inf, math.nan])
    def test_rejects_bad_dof(self, k: float) -> None:
        with pytest.raises(ValueError, match="Degrees of freedom"):
            chi2_sf(1.0, k)

    @pytest.mark.parametrize("p", [0.0, 1.0, -0.1])
    def test_quantile_rejects_bad_probability(self, p: float) -> None:
        with pytest.raises(ValueError, match="Probability"):
            chi2_quantile(p, 2)


class TestF:
    @pytest.mark.parametrize(("x", "d1", "d2"), [(1.0, 2, 10), (4.26, 2, 9), (0.3, 5, 3.5), (12.0, 1, 1)])
    def test_cdf_and_sf_match_scipy(self, x: float, d1: float, d2: float) -> None:
        assert f_cdf(x, d1, d2) == pytest.approx(stats.f.cdf(x, d1, d2), rel=1e-12)
        assert f_sf(x, d1, d2) == pytest.approx(stats.f.sf(x, d1, d2), rel=1e-10)

    def test_known_quantile(self) -> None:
        assert f_quantile(0.95, 2, 10) == pytest.approx(4.102821015130399, rel=1e-10)

    def test_infinity(self) -> None:
        assert f_cdf(math.inf, 3, 4) == 1.0
        assert f_sf(math.inf, 3, 4) == 0.0

    @pytest.mark.parametrize("p", [0.05, 0.5, 0.99])
    def test_quantile_inverts_cdf(self, p: float) -> None:
        assert f_cdf(f_quantile(p, 3, 17.5), 3, 17.5) == pytest.approx(p, abs=1e-12)

    def test_fractional_denominator(self) -> None:
        assert f_sf(2.0, 3, 7.25) == pytest.approx(stats.f.sf(2.0, 3, 7.25), rel=1e-10)

    def test_rejects_bad_dof(self) -> None:
        with pytest.raises(ValueError, match="d2"):
            f_cdf(1.0, 2, 0)


class TestRngStream:
    def test_same_path_same_draws(self) -> None:
        a = RngStream(42, (1, 2)).generator().random(5)
        b = RngStream(42, (1, 2)).generator().random(5)

        np.testing.assert_array_equal(a, b)

    def test_different_paths_differ(self) -> None:
        a = RngStream(42, (1, 2)).generator().random(5)
        b = RngStream(42, (2, 1)).generator().random(5)

        assert not np.array_equal(a, b)

    def test_substream_extends_path(self) -> None:
        assert RngStream(3, (1,)).substream(4, 5) == RngStream(3, (1, 4, 5))

    def test_integer_index_promoted(self) -> None:
        assert RngStream(3, 7).stream_index == (7,)  # type: ignore[arg-type]

    def test_negative_index_rejected(self) -> None:
        with pytest.raises(ValueError, match="nonnegative"):
            RngStream(3, (-1,))


class TestParameters:
    def test_dirichlet_mean_and_precision(self) -> None:
        params = DirichletParams([2.0, 3.0, 5.0])

        np.testing.assert_allclose(params.mean(), [0.2, 0.3, 0.5])
        assert params.precision == 10.0
        assert params.D == 3

    @pytest.mark.parametrize("alpha", [[1.0, 0.0], [1.0, -2.0], [1.0, math.inf]])
    def test_dirichlet_rejects_nonpositive(self, alpha: list[float]) -> None:
        with pytest.raises(ValueError, match="positive"):
            DirichletParams(alpha)

    def test_dirichlet_rejects_single_part(self) -> None:
        with pytest.raises(InvalidDimensionError):
            DirichletParams([1.0])

    def test_mixture_mean(self) -> None:
        mix = DirichletMixture([0.25, 0.75], (DirichletParams([1.0, 1.0]), DirichletParams([1.0, 3.0])))

        np.testing.assert_allclose(mix.mean(), [0.25 * 0.5 + 0.75 * 0.25, 0.25 * 0.5 + 0.75 * 0.75])

    def test_mixture_weights_must_sum_to_one(self) -> None:
        with pytest.raises(ValueError, match="sum to 1"):
            DirichletMixture([0.5, 0.6], (DirichletParams([1.0, 1.0]), DirichletParams([1.0, 3.0])))

    def test_mixture_weight_count(self) -> None:
        with pytest.raises(ValueError, match="one weight per component"):
            DirichletMixture([1.0], (DirichletParams([1.0, 1.0]), DirichletParams([1.0, 3.0])))

    def test_mixture_components_share_parts(self) -> None:
        with pytest.raises(InvalidDimensionError):
            DirichletMixture([0.5, 0.5], (DirichletParams([1.0, 1.0]), DirichletParams([1.0, 1.0, 1.0])))

    def test_logistic_normal_rejects_asymmetric(self) -> None:
        with pytest.raises(ValueError, match="symmetric"):
            LogisticNormalParams([0.0, 0.0], [[1.0, 0.5], [0.0, 1.0]])

    def test_logistic_normal_rejects_indefinite(self) -> None:
        with pytest.raises(ValueError, match="positive definite"):
            LogisticNormalParams([0.0, 0.0], [[1.0, 2.0], [2.0, 1.0]])

    def test_logistic_normal_shape_mismatch(self) -> None:
        with pytest.raises(InvalidDimensionError):
            LogisticNormalParams([0.0, 0.0, 0.0], np.eye(2))


class TestSamplers:
    def test_dirichlet_rows_are_compositions(self) -> None:
        sample = sample_dirichlet(DirichletParams([0.5, 1.0, 2.0]), 50, RngStream(1))

        assert (sample.n, sample.D) == (50, 3)
        np.testing.assert_allclose(sample.data.sum(axis=1), 1.0, atol=1e-12)

    def test_dirichlet_reproducible(self) -> None:
        params = DirichletParams([2.0, 2.0])

        a = sample_dirichlet(params, 10, RngStream(9, (3,)))
        b = sample_dirichlet(params, 10, RngStream(9, (3,)))

        np.testing.assert_array_equal(a.data, b.data)

    def test_dirichlet_mean_converges(self) -> None:
        params = DirichletParams([2.0, 3.0, 5.0])

        sample = sample_dirichlet(params, 20000, RngStream(5))

        np.testing.assert_allclose(sample.data.mean(axis=0), params.mean(), atol=0.01)

    def test_small_shapes_do_not_produce_empty_rows(self) -> None:
        sample = sample_dirichlet(DirichletParams([0.01, 0.01, 0.01]), 200, RngStream(2))

        assert np.all(np.isfinite(sample.data))
        np.testing.assert_allclose(sample.data.sum(axis=1), 1.0, atol=1e-12)

    def test_mixture_mean_converges(self) -> None:
        mix = DirichletMixture([0.3, 0.7], (DirichletParams([6.0, 2.0]), DirichletParams([1.0, 4.0])))

        sample = sample_dirichlet_mixture(mix, 20000, RngStream(8))

        np.testing.assert_allclose(sample.data.mean(axis=0), mix.mean(), atol=0.01)

    def test_mixture_with_unused_component(self) -> None:
        mix = DirichletMixture([1.0, 0.0], (DirichletParams([1.0, 1.0]), DirichletParams([5.0, 1.0])))

        assert sample_dirichlet_mixture(mix, 10, RngStream(1)).n == 10

    def test_logistic_normal_degenerate_is_point_mass(self) -> None:
        params = LogisticNormalParams([0.0, 0.0], np.zeros((2, 2)))

        sample = sample_logistic_normal(params, 5, RngStream(1))

        np.testing.assert_allclose(sample.data, 1 / 3)

    def test_logistic_normal_median_is_alr_inverse_of_mu(self) -> None:
        params = LogisticNormalParams([1.0, -0.5], [[0.5, 0.1], [0.1, 0.3]])

        sample = sample_logistic_normal(params, 20000, RngStream(4))
        log_ratios = np.log(sample.data[:, :2] / sample.data[:, 2:])

        np.testing.assert_allclose(np.median(log_ratios, axis=0), [1.0, -0.5], atol=0.03)

    def test_sample_size_at_least_two(self) -> None:
        with pytest.raises(ValueError, match=">= 2"):
            sample_dirichlet(DirichletParams([1.0, 1.0]), 1, RngStream(1))


class TestReferenceValues:
    def test_chi2_three_dof_upper_five_percent(self) -> None:
        assert chi2_cdf(7.8147, 3) == pytest.approx(0.95, abs=1e-5)
        assert chi2_quantile(0.95, 3) == pytest.approx(7.8147, abs=1e-4)

    def test_f_three_ten_upper_five_percent(self) -> None:
        assert f_cdf(3.7083, 3, 10) == pytest.approx(0.95, abs=1e-5)

    def test_uniform_dirichlet_mean(self) -> None:
        sample = sample_dirichlet(DirichletParams([1.0, 1.0, 1.0, 1.0]), 100_000, RngStream(12))

        np.testing.assert_allclose(sample.data.mean(axis=0), 0.25, atol=0.005)

    def test_mixture_with_shared_normalised_means(self) -> None:
        mix = DirichletMixture(
            [0.3, 0.7],
            (DirichletParams([0.889, 1.333, 1.778, 2.000]), DirichletParams([1.481, 2.222, 2.963, 3.333])),
        )

        sample = sample_dirichlet_mixture(mix, 100_000, RngStream(13))

        np.testing.assert_allclose(sample.data.mean(axis=0), [0.148, 0.222, 0.296, 0.333], atol=0.01)

    def test_logistic_normal_simplex_mean(self) -> None:
        params = LogisticNormalParams(
            [1.548, 0.747, -0.052],
            [[0.083, 0.185, -0.169], [0.185, 0.547, -0.671], [-0.169, -0.671, 1.110]],
        )

        sample = sample_logistic_normal(params, 1_000_000, RngStream(14))

        np.testing.assert_allclose(sample.data.mean(axis=0), [0.483, 0.249, 0.163, 0.105], atol=0.01)
