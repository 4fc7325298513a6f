"""Reference distributions shared by the likelihood-type statistics.

The empirical likelihood and exponential empirical likelihood statistics are asymptotically chi2_d, and to the
leading term they behave like James' T_u^2. Beyond the plain chi2_d they can therefore borrow James' corrected
quantile (A, B) or the F law with estimated degrees of freedom nu, both computed from the samples' S~ matrices.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any, Literal, get_args

from compmean.bootstrap import BootstrapConfig
from compmean.distributions import chi2_sf
from compmean.errors import CalibrationError
from compmean.quadratic_tests import (
    james_coefficients,
    james_pvalue_corrected_chi2,
    james_pvalue_f,
    james_statistic,
    krishnamoorthy_nu,
)

if TYPE_CHECKING:
    from compmean.compositional import EuclideanSample

Calibration = Literal["f", "chi2", "corrected-chi2", "bootstrap"]
CALIBRATIONS: tuple[str, ...] = get_args(Calibration)


@dataclass(frozen=True)
class CalibrationSpec:
    kind: Calibration = "chi2"
    bootstrap: BootstrapConfig | None = None

    def __post_init__(self) -> None:
        if self.kind not in CALIBRATIONS:
            raise CalibrationError(f"Unknown calibration {self.kind!r}. Choose from {list(CALIBRATIONS)}")

    @property
    def is_bootstrap(self) -> bool:
        return self.kind == "bootstrap"

    def bootstrap_config(self) -> BootstrapConfig:
        return self.bootstrap if self.bootstrap is not None else BootstrapConfig.from_config()


def as_calibration_spec(
    calibration: CalibrationSpec | str, bootstrap: BootstrapConfig | None = None
) -> CalibrationSpec:
    if isinstance(calibration, CalibrationSpec):
        return calibration
    return CalibrationSpec(kind=calibration, bootstrap=bootstrap)  # type: ignore[arg-type]


def likelihood_pvalue(
    statistic: float, sample1: EuclideanSample, sample2: EuclideanSample, kind: str
) -> tuple[float, dict[str, Any]]:
    """Analytic p-value of a statistic that is asymptotically chi2_d."""
    d = sample1.d
    if kind == "chi2":
        return chi2_sf(statistic, d), {"df": d}
    components = james_statistic(sample1, sample2)
    args = (components.s1_tilde, components.s2_tilde, components.s_tilde, sample1.n, sample2.n, d)
    if kind == "corrected-chi2":
        A, B = james_coefficients(*args)
        return james_pvalue_corrected_chi2(statistic, A, B, d), {"A": A, "B": B, "df": d}
    if kind == "f":
        nu = krishnamoorthy_nu(*args)
        return james_pvalue_f(statistic, nu, d), {"nu": nu, "df1": d, "df2": nu - d + 1}
    raise CalibrationError(f"{kind!r} is not an analytic calibration")
