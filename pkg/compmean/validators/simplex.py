"""Unit-sum validator - every row must close to 1."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext


@dataclass
class UnitSumValidator:
    tolerance: float
    max_rows_reported: int = 5

    def should_skip(self, ctx: ValidationContext) -> bool:
        return ctx.column_count == 0 or not ctx.all_numeric

    def validate(self, ctx: ValidationContext) -> list[str]:
        sums = ctx.row_sums()
        failing = ((sums - 1.0).abs() > self.tolerance).fill_null(value=False)
        fail_count = int(failing.sum())
        if fail_count == 0:
            return []

        rows = failing.arg_true().head(self.max_rows_reported).to_list()
        bad_sums = sums.filter(failing).head(self.max_rows_reported).to_list()
        examples = ", ".join(f"row {row}: sum = {total:.12g}" for row, total in zip(rows, bad_sums))
        return [
            f"Composition table{ctx.location} has {fail_count} rows not summing to 1 "
            f"within tolerance {self.tolerance:g}. Examples: {examples}"
        ]
