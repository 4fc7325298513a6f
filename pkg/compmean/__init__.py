"""compmean: two-sample mean tests for compositional data.

Compositions (rows of nonnegative parts summing to one) are mapped into Euclidean space by the Helmert
sub-matrix, where Hotelling's T^2, James' test, empirical likelihood and exponential empirical likelihood compare
the two means. Each statistic can be calibrated analytically or by a null-centred bootstrap.
"""

from .bootstrap import BootstrapConfig, bootstrap_pvalue
from .compositional import CompositionalSample, EuclideanSample, helmert_transform, load_sample, validate_sample
from .decorators import compositions_in, result_log
from .procedures import TestResult, compare_compositions, run_test

__all__ = [
    "BootstrapConfig",
    "CompositionalSample",
    "EuclideanSample",
    "TestResult",
    "bootstrap_pvalue",
    "compare_compositions",
    "compositions_in",
    "helmert_transform",
    "load_sample",
    "result_log",
    "run_test",
    "validate_sample",
]
