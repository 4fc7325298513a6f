"""One entry point for every (test, calibration) pair.

=========  =================================================
test       calibrations
=========  =================================================
hotelling  f, bootstrap
james      chi2, corrected-chi2, f, bootstrap
el         chi2, corrected-chi2, f, bootstrap
eel        chi2, corrected-chi2, f, bootstrap
=========  =================================================
"""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING, Any, Literal, get_args

import numpy as np

from compmean.bootstrap import BootstrapConfig, bootstrap_pvalue
from compmean.calibration import CALIBRATIONS, Calibration, CalibrationSpec
from compmean.compositional import helmert_transform, sample_from_frame
from compmean.decorators import compositions_in, result_log
from compmean.eel_solver import eel_two_sample, eel_two_sample_statistic
from compmean.el_solver import el_statistic, el_two_sample
from compmean.errors import CalibrationError, InvalidDimensionError
from compmean.quadratic_tests import hotelling, hotelling_statistic, james, james_t2

if TYPE_CHECKING:
    from collections.abc import Sequence

    from compmean.bootstrap import TwoSampleStatistic
    from compmean.compositional import EuclideanSample

logger = logging.getLogger(__name__)

TestName = Literal["hotelling", "james", "el", "eel"]
TESTS: tuple[str, ...] = get_args(TestName)

VALID_CALIBRATIONS: dict[str, tuple[str, ...]] = {
    "hotelling": ("f", "bootstrap"),
    "james": ("chi2", "corrected-chi2", "f", "bootstrap"),
    "el": ("chi2", "corrected-chi2", "f", "bootstrap"),
    "eel": ("chi2", "corrected-chi2", "f", "bootstrap"),
}

DEFAULT_CALIBRATION: dict[str, str] = {"hotelling": "f", "james": "corrected-chi2", "el": "chi2", "eel": "chi2"}

_TEST_LABELS = {"hotelling": "Hotelling", "james": "James", "el": "EL", "eel": "EEL"}

STATISTICS: dict[str, TwoSampleStatistic] = {
    "hotelling": hotelling_statistic,
    "james": james_t2,
    "el": el_statistic,
    "eel": eel_two_sample_statistic,
}


def check_pair(test: str, calibration: str) -> tuple[TestName, Calibration]:
    if test not in TESTS:
        raise CalibrationError(f"Unknown test {test!r}. Choose from {list(TESTS)}")
    if calibration not in CALIBRATIONS:
        raise CalibrationError(f"Unknown calibration {calibration!r}. Choose from {list(CALIBRATIONS)}")
    if calibration not in VALID_CALIBRATIONS[test]:
        raise CalibrationError(
            f"Calibration {calibration!r} is not available for {test}; use one of {list(VALID_CALIBRATIONS[test])}"
        )
    return test, calibration  # type: ignore[return-value]


def parse_test_spec(spec: str) -> tuple[TestName, Calibration]:
    """Parse ``test`` or ``test:calibration``; a bare test name gets its default calibration."""
    test, _, calibration = spec.strip().lower().partition(":")
    if test not in TESTS:
        raise CalibrationError(f"Unknown test {test!r}. Choose from {list(TESTS)}")
    return check_pair(test, calibration or DEFAULT_CALIBRATION[test])


def label(test: str, calibration: str) -> str:
    """Row label as in a table of results, e.g. ``James(χ²)`` for the corrected chi-squared."""
    if test == "james":
        suffix = {"corrected-chi2": "χ²", "chi2": "asymptotic χ²", "f": "F", "bootstrap": "bootstrap"}[calibration]
    else:
        suffix = {"corrected-chi2": "corrected χ²", "chi2": "χ²", "f": "F", "bootstrap": "bootstrap"}[calibration]
    return f"{_TEST_LABELS[test]}({suffix})"


@dataclass(frozen=True)
class TestResult:
    __test__ = False  # not a pytest class

    test: str
    calibration: str
    statistic: float
    p_value: float
    n1: int
    n2: int
    diagnostics: dict[str, Any] = field(default_factory=dict)

    @property
    def label(self) -> str:
        return label(self.test, self.calibration)

    def reject(self, alpha: float) -> bool:
        return self.p_value < alpha


def _quadratic(
    test: str, calibration: str, sample1: EuclideanSample, sample2: EuclideanSample, bootstrap: BootstrapConfig | None
) -> tuple[float, float, dict[str, Any]]:
    if calibration == "bootstrap":
        cfg = bootstrap if bootstrap is not None else BootstrapConfig.from_config()
        outcome = bootstrap_pvalue(STATISTICS[test], sample1, sample2, cfg)
        return outcome.t_obs, outcome.p_value, {"B": outcome.B, "failures": outcome.failures}
    result = hotelling(sample1, sample2) if test == "hotelling" else james(sample1, sample2, calibration)
    return result.statistic, result.p_value, dict(result.aux)


@result_log()
def run_test(
    test: str,
    sample1: EuclideanSample,
    sample2: EuclideanSample,
    calibration: str | None = None,
    bootstrap: BootstrapConfig | None = None,
) -> TestResult:
    """Run one test on two Euclidean (Helmert-transformed) samples."""
    test, calibration = check_pair(test, calibration or DEFAULT_CALIBRATION.get(test, ""))
    if sample1.d != sample2.d:
        raise InvalidDimensionError(f"Samples have different dimensions: {sample1.d} and {sample2.d}")

    if test in ("hotelling", "james"):
        statistic, p_value, diagnostics = _quadratic(test, calibration, sample1, sample2, bootstrap)
    elif test == "el":
        res = el_two_sample(sample1, sample2, CalibrationSpec(calibration, bootstrap))
        statistic, p_value = res.statistic, res.p_value
        diagnostics = {
            **res.aux,
            "mu_hat": res.mu_hat.tolist(),
            "iterations": res.solver_report.iterations,
            "lambda_balance": res.solver_report.details["lambda_balance"],
        }
    else:
        res = eel_two_sample(sample1, sample2, CalibrationSpec(calibration, bootstrap))
        statistic, p_value = res.statistic, res.p_value
        diagnostics = {
            **res.aux,
            "implied_mu": res.implied_mu.tolist(),
            "iterations": res.solver_report.iterations,
            "residual": res.solver_report.details["residual"],
        }
    return TestResult(
        test=test,
        calibration=calibration,
        statistic=float(statistic),
        p_value=float(np.clip(p_value, 0.0, 1.0)),
        n1=sample1.n,
        n2=sample2.n,
        diagnostics=diagnostics,
    )


@compositions_in(name="sample1")
@compositions_in(name="sample2")
def compare_compositions(
    sample1: Any,
    sample2: Any,
    tests: Sequence[str | tuple[str, str]] = ("hotelling", "james"),
    bootstrap: BootstrapConfig | None = None,
) -> list[TestResult]:
    """Compare the mean compositions of two DataFrames (one composition per row) with each requested test.

    Tests are given as ``"james"``, ``"james:bootstrap"`` or ``("james", "bootstrap")``.
    Both frames are checked against the configured composition tolerance by the decorators.
    """
    first, second = sample_from_frame(sample1), sample_from_frame(sample2)
    if first.D != second.D:
        raise InvalidDimensionError(f"Samples have different numbers of parts: {first.D} and {second.D}")
    y1, y2 = helmert_transform(first), helmert_transform(second)
    pairs = [check_pair(*t) if isinstance(t, tuple) else parse_test_spec(t) for t in tests]
    return [run_test(test, y1, y2, calibration, bootstrap) for test, calibration in pairs]
