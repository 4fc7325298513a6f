"""Helpers shared by the compmean decorators."""

from __future__ import annotations

import inspect
from typing import TYPE_CHECKING, Any

import narwhals as nw

if TYPE_CHECKING:
    from collections.abc import Callable, Mapping, Sequence


def assert_is_dataframe(obj: Any, context: str) -> None:
    """Raise TypeError unless narwhals can read ``obj`` as an eager DataFrame (pandas, Polars, PyArrow, ...)."""
    try:
        nw.from_native(obj, eager_only=True)
    except TypeError:
        raise TypeError(
            f"Wrong {context}. Expected a DataFrame of compositions, got {type(obj).__name__} instead."
        ) from None


def find_argument(
    func: Callable[..., Any], name: str | None, args: Sequence[Any], kwargs: Mapping[str, Any]
) -> tuple[str | None, Any]:
    """Name and value of the argument a decorator should inspect.

    With ``name=None`` this is the first argument of the call, positional or keyword.

    Raises:
        ValueError: If ``name`` is not a parameter of ``func`` or was not passed.

    """
    params = list(inspect.signature(func).parameters)
    if name is None:
        if args:
            return (params[0] if params else None), args[0]
        return next(iter(kwargs.items()), (None, None))

    if name in kwargs:
        return name, kwargs[name]
    if name not in params:
        raise ValueError(f"Parameter '{name}' not found in function signature. Available: {params}")
    position = params.index(name)
    if position >= len(args):
        raise ValueError(f"Parameter '{name}' was not passed: expected at position {position}, got {len(args)}")
    return name, args[position]


def describe_shape(obj: Any) -> str:
    """Short description of an array-like or sample for log lines."""
    shape = getattr(obj, "shape", None)
    if shape is None:
        data = getattr(obj, "data", None)
        shape = getattr(data, "shape", None)
    return "x".join(str(dim) for dim in shape) if shape is not None else type(obj).__name__
