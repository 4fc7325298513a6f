"""The table being validated, converted once with narwhals and shared by every validator."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Any

import narwhals as nw

ROW_SUM = "__row_sum__"


@dataclass(frozen=True)
class ValidationContext:
    """An n x D composition table plus where it came from, for error messages.

    Column labels are stringified, so headerless CSVs and integer-labelled frames read as parts '0', '1', ...
    """

    df: Any
    source: str = ""
    func_name: str = ""
    param_name: str | None = None

    nw_df: Any = field(init=False, repr=False)
    columns: tuple[str, ...] = field(init=False)
    row_count: int = field(init=False)
    schema: dict[str, Any] = field(init=False)
    all_numeric: bool = field(init=False)

    def __post_init__(self) -> None:
        nw_df = nw.from_native(self.df, eager_only=True)
        if not all(isinstance(col, str) for col in nw_df.columns):
            nw_df = nw_df.rename({col: str(col) for col in nw_df.columns})
        schema = dict(nw_df.schema)
        object.__setattr__(self, "nw_df", nw_df)
        object.__setattr__(self, "columns", tuple(nw_df.columns))
        object.__setattr__(self, "row_count", nw_df.shape[0])
        object.__setattr__(self, "schema", schema)
        object.__setattr__(self, "all_numeric", all(dtype.is_numeric() for dtype in schema.values()))

    @property
    def location(self) -> str:
        if self.source:
            return f" in {self.source}"
        if self.func_name and self.param_name:
            return f" in function '{self.func_name}' parameter '{self.param_name}'"
        return ""

    @property
    def column_count(self) -> int:
        return len(self.columns)

    def get_series(self, col: str) -> Any:
        return self.nw_df[col]

    def get_dtype(self, col: str) -> Any:
        return self.schema.get(col)

    def row_sums(self) -> Any:
        """Per-row totals as a narwhals Series; only meaningful when ``all_numeric``."""
        return self.nw_df.select(nw.sum_horizontal(*self.columns).alias(ROW_SUM))[ROW_SUM]
