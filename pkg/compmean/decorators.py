"""Decorators for validating composition tables and logging test results."""

from __future__ import annotations

import logging
from functools import wraps
from typing import TYPE_CHECKING, Any, TypeVar

if TYPE_CHECKING:
    from collections.abc import Callable

from compmean.config import get_composition_tolerance, get_lazy
from compmean.utils import assert_is_dataframe, describe_shape, find_argument
from compmean.validators.builder import build_composition_pipeline
from compmean.validators.context import ValidationContext

logger = logging.getLogger(__name__)

# Type variables for preserving return types
LogReturnT = TypeVar("LogReturnT")  # Return type for result_log
InReturnT = TypeVar("InReturnT")  # Return type for compositions_in


def compositions_in(
    name: str | None = None,
    tolerance: float | None = None,
    lazy: bool | None = None,
    min_rows: int = 2,
    parts: int | None = None,
) -> Callable[[Callable[..., InReturnT]], Callable[..., InReturnT]]:
    """Decorate a function parameter that is a DataFrame of compositions (pandas, Polars, PyArrow, ...).

    The parameter is validated before every call: at least ``min_rows`` rows, numeric columns without missing
    values, parts within [-tolerance, 1 + tolerance] and rows summing to 1 within ``tolerance``.

    Args:
        name (Optional[str], optional): Name of the parameter that contains the DataFrame. Defaults to the first
            argument.
        tolerance (float, optional): Unit-sum and nonnegativity tolerance.
            If None, uses the value from [tool.compmean] composition_tolerance in pyproject.toml.
        lazy (bool, optional): If True, collect all validation errors before raising.
            If None, uses the value from [tool.compmean] lazy setting in pyproject.toml.
        min_rows (int, optional): Minimum number of compositions. Defaults to 2.
        parts (int, optional): Required number of parts D. Defaults to None (any D >= 2).

    Returns:
        Callable: Decorated function with preserved return type

    """
    if min_rows < 2:
        raise ValueError(f"min_rows must be >= 2, got {min_rows}")
    if parts is not None and parts < 2:
        raise ValueError(f"parts must be >= 2, got {parts}")

    def wrapper_compositions_in(func: Callable[..., InReturnT]) -> Callable[..., InReturnT]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> InReturnT:
            param_name, df = find_argument(func, name, args, kwargs)
            assert_is_dataframe(df, "parameter type")
            ctx = ValidationContext(df=df, func_name=getattr(func, "__name__", "<unknown>"), param_name=param_name)
            pipeline = build_composition_pipeline(
                tolerance=get_composition_tolerance(tolerance),
                lazy=get_lazy(lazy),
                min_rows=min_rows,
                expected_parts=parts,
            )
            pipeline.run(ctx)
            return func(*args, **kwargs)

        return wrapper

    return wrapper_compositions_in


def result_log(level: int = logging.DEBUG) -> Callable[[Callable[..., LogReturnT]], Callable[..., LogReturnT]]:
    """Decorate a two-sample procedure to log the sample shapes it receives and the result it returns.

    Args:
        level (int, optional): Level of the logging messages produced. Defaults to logging.DEBUG.

    Returns:
        Callable: Decorated function with preserved return type.

    """

    def wrapper_result_log(func: Callable[..., LogReturnT]) -> Callable[..., LogReturnT]:
        @wraps(func)
        def wrapper(*args: Any, **kwargs: Any) -> LogReturnT:
            func_name = getattr(func, "__name__", "<unknown>")
            if logger.isEnabledFor(level):
                samples = [a for a in (*args, *kwargs.values()) if hasattr(a, "data") and hasattr(a, "n")]
                shapes = ", ".join(describe_shape(s) for s in samples)
                logger.log(level, "Function %s received samples: %s", func_name, shapes)
            result = func(*args, **kwargs)
            statistic = getattr(result, "statistic", None)
            p_value = getattr(result, "p_value", None)
            if statistic is not None and p_value is not None:
                logger.log(level, "Function %s returned statistic %.6g, p-value %.6g", func_name, statistic, p_value)
            return result

        return wrapper

    return wrapper_result_log
