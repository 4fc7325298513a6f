from collections.abc import Callable, Iterator
from typing import Any

import numpy as np
import pandas as pd
import polars as pl
import pyarrow as pa
import pytest

from compmean.compositional import CompositionalSample, EuclideanSample
from compmean.config import SEED_ENV_VAR, clear_config_cache


def make_pandas_df(data: dict[str, Any]) -> pd.DataFrame:
    """Create a pandas DataFrame."""
    return pd.DataFrame(data)


def make_polars_df(data: dict[str, Any]) -> pl.DataFrame:
    """Create a polars DataFrame."""
    return pl.DataFrame(data)


def make_pyarrow_table(data: dict[str, Any]) -> pa.Table:
    """Create a PyArrow Table."""
    return pa.table(data)


@pytest.fixture(
    params=[
        pytest.param(make_pandas_df, id="pandas"),
        pytest.param(make_polars_df, id="polars"),
        pytest.param(make_pyarrow_table, id="pyarrow"),
    ]
)
def make_df(request: pytest.FixtureRequest) -> Callable[[dict[str, Any]], Any]:
    """Factory fixture for creating DataFrames across supported libraries."""
    return request.param


@pytest.fixture(autouse=True)
def default_config(monkeypatch: pytest.MonkeyPatch) -> Iterator[None]:
    """Run every test against built-in defaults, whatever pyproject.toml or the environment say."""
    monkeypatch.setattr("compmean.config.find_config_file", lambda: None)
    monkeypatch.delenv(SEED_ENV_VAR, raising=False)
    clear_config_cache()
    yield
    clear_config_cache()


soils = {
    "sand": [0.50, 0.40, 0.30, 0.60, 0.45],
    "silt": [0.30, 0.35, 0.40, 0.25, 0.30],
    "clay": [0.20, 0.25, 0.30, 0.15, 0.25],
}


@pytest.fixture
def soils_pandas_df() -> pd.DataFrame:
    return pd.DataFrame(soils)


@pytest.fixture
def normal_pair() -> tuple[EuclideanSample, EuclideanSample]:
    """Two moderately sized 3-d Gaussian samples with different covariances and a small mean difference."""
    gen = np.random.default_rng(7)
    x = gen.multivariate_normal([0.0, 0.0, 0.0], np.diag([1.0, 2.0, 0.5]), size=40)
    y = gen.multivariate_normal([0.2, -0.1, 0.0], [[1.5, 0.3, 0.0], [0.3, 1.0, 0.2], [0.0, 0.2, 0.8]], size=30)
    return EuclideanSample(x), EuclideanSample(y)


@pytest.fixture
def dirichlet_sample() -> CompositionalSample:
    gen = np.random.default_rng(11)
    return CompositionalSample(gen.dirichlet([2.0, 3.0, 4.0, 5.0], size=25))
