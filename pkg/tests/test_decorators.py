"""Tests for the compositions_in and result_log decorators."""

import logging
from dataclasses import dataclass
from unittest.mock import call

import numpy as np
import pandas as pd
import pytest
from pytest_mock import MockerFixture

from compmean.compositional import EuclideanSample
from compmean.decorators import compositions_in, result_log
from compmean.errors import CompositionError
from tests.conftest import soils


class TestCompositionsIn:
    def test_passes_valid_frame_through(self, make_df) -> None:
        @compositions_in()
        def count_rows(df: object) -> int:
            return len(df)  # type: ignore[arg-type]

        assert count_rows(make_df(soils)) == 5

    def test_wrong_row_sum_names_function_and_parameter(self, make_df) -> None:
        @compositions_in(name="samples")
        def fn(other: int, samples: object) -> None:
            pass

        df = make_df({"a": [0.5, 0.5], "b": [0.5, 0.6]})

        with pytest.raises(CompositionError, match="in function 'fn' parameter 'samples'"):
            fn(1, df)

    def test_keyword_argument(self) -> None:
        @compositions_in(name="samples")
        def fn(samples: object) -> str:
            return "ok"

        assert fn(samples=pd.DataFrame(soils)) == "ok"

    def test_explicit_tolerance(self) -> None:
        @compositions_in(tolerance=0.01)
        def fn(df: object) -> str:
            return "ok"

        assert fn(pd.DataFrame({"a": [0.333, 0.5], "b": [0.333, 0.5], "c": [0.333, 0.0]})) == "ok"

    def test_config_tolerance(self, mocker: MockerFixture) -> None:
        mocker.patch("compmean.decorators.get_composition_tolerance", return_value=0.01)

        @compositions_in()
        def fn(df: object) -> str:
            return "ok"

        assert fn(pd.DataFrame({"a": [0.333, 0.5], "b": [0.333, 0.5], "c": [0.333, 0.0]})) == "ok"

    def test_lazy_collects_errors(self) -> None:
        @compositions_in(lazy=True, parts=4)
        def fn(df: object) -> None:
            pass

        with pytest.raises(CompositionError) as exc_info:
            fn(pd.DataFrame({"a": [-0.5, 0.5], "b": [0.5, 0.5]}))

        message = str(exc_info.value)
        assert "but 4 expected" in message
        assert "failed check ge" in message
        assert "not summing to 1" in message

    def test_min_rows(self) -> None:
        @compositions_in(min_rows=10)
        def fn(df: object) -> None:
            pass

        with pytest.raises(CompositionError, match="at least 10 are required"):
            fn(pd.DataFrame(soils))

    def test_rejects_non_dataframe(self) -> None:
        @compositions_in()
        def fn(df: object) -> None:
            pass

        with pytest.raises(TypeError, match="Wrong parameter type"):
            fn(np.full((3, 2), 0.5))

    @pytest.mark.parametrize(("kwargs", "match"), [({"min_rows": 1}, "min_rows"), ({"parts": 1}, "parts")])
    def test_invalid_arguments(self, kwargs: dict, match: str) -> None:
        with pytest.raises(ValueError, match=match):
            compositions_in(**kwargs)

    def test_preserves_metadata(self) -> None:
        @compositions_in()
        def documented(df: object) -> None:
            """Docstring."""

        assert documented.__name__ == "documented"
        assert documented.__doc__ == "Docstring."


@dataclass
class FakeResult:
    statistic: float
    p_value: float


class TestResultLog:
    def test_logs_inputs_and_result(self, mocker: MockerFixture) -> None:
        mock_logger = mocker.patch("compmean.decorators.logger")
        mock_logger.isEnabledFor.return_value = True

        @result_log()
        def fake_test(sample1: EuclideanSample, sample2: EuclideanSample) -> FakeResult:
            return FakeResult(statistic=1.5, p_value=0.25)

        fake_test(EuclideanSample(np.zeros((4, 2))), EuclideanSample(np.zeros((3, 2))))

        mock_logger.log.assert_has_calls(
            [
                call(logging.DEBUG, "Function %s received samples: %s", "fake_test", "4x2, 3x2"),
                call(logging.DEBUG, "Function %s returned statistic %.6g, p-value %.6g", "fake_test", 1.5, 0.25),
            ]
        )

    def test_custom_level(self, mocker: MockerFixture) -> None:
        mock_logger = mocker.patch("compmean.decorators.logger")
        mock_logger.isEnabledFor.return_value = True

        @result_log(level=logging.INFO)
        def fake_test(sample1: EuclideanSample) -> FakeResult:
            return FakeResult(statistic=2.0, p_value=0.5)

        fake_test(sample1=EuclideanSample(np.zeros((2, 1))))

        assert all(c.args[0] == logging.INFO for c in mock_logger.log.call_args_list)
        assert mock_logger.log.call_args_list[0].args[3] == "2x1"

    def test_skips_input_description_when_disabled(self, mocker: MockerFixture) -> None:
        mock_logger = mocker.patch("compmean.decorators.logger")
        mock_logger.isEnabledFor.return_value = False
        describe = mocker.patch("compmean.decorators.describe_shape")

        @result_log()
        def fake_test(sample1: EuclideanSample) -> FakeResult:
            return FakeResult(statistic=2.0, p_value=0.5)

        fake_test(EuclideanSample(np.zeros((2, 1))))

        describe.assert_not_called()

    def test_result_without_statistic(self, mocker: MockerFixture) -> None:
        mock_logger = mocker.patch("compmean.decorators.logger")
        mock_logger.isEnabledFor.return_value = True

        @result_log()
        def plain(x: int) -> int:
            return x + 1

        assert plain(1) == 2
        assert mock_logger.log.call_count == 1

    def test_real_logger(self, caplog: pytest.LogCaptureFixture) -> None:
        @result_log()
        def fake_test(sample1: EuclideanSample) -> FakeResult:
            return FakeResult(statistic=3.25, p_value=0.125)

        with caplog.at_level(logging.DEBUG, logger="compmean.decorators"):
            fake_test(EuclideanSample(np.zeros((5, 3))))

        assert "Function fake_test received samples: 5x3" in caplog.text
        assert "returned statistic 3.25, p-value 0.125" in caplog.text
