"""Column validators - numeric dtypes and missing values."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext


@dataclass
class NumericValidator:
    def validate(self, ctx: ValidationContext) -> list[str]:
        bad = [col for col in ctx.columns if not ctx.get_dtype(col).is_numeric()]
        if bad:
            dtypes = [str(ctx.get_dtype(col)) for col in bad]
            return [f"Composition table{ctx.location} has non-numeric column(s) {bad} with dtypes {dtypes}"]
        return []


@dataclass
class NullableValidator:
    """Missing values; ragged CSV rows show up here once padded by the reader."""

    max_rows_reported: int = 5

    def validate(self, ctx: ValidationContext) -> list[str]:
        violations: list[tuple[str, int]] = []
        rows_with_nulls: set[int] = set()

        for col in ctx.columns:
            nulls = ctx.get_series(col).is_null()
            null_count = int(nulls.sum())
            if null_count > 0:
                violations.append((col, null_count))
                rows_with_nulls.update(int(i) for i in nulls.arg_true().to_list())

        if not violations:
            return []

        rows = sorted(rows_with_nulls)[: self.max_rows_reported]
        violation_desc = ", ".join(f"column '{col}' has {count} missing values" for col, count in violations)
        return [f"Missing values{ctx.location}: {violation_desc} (rows {rows})"]
