"""Shape validators - row and column counts."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext


@dataclass
class ShapeValidator:
    min_rows: int = 2
    min_columns: int = 2
    expected_columns: int | None = None

    def validate(self, ctx: ValidationContext) -> list[str]:
        errors = []
        n, parts = ctx.row_count, ctx.column_count

        if n < self.min_rows:
            errors.append(f"Composition table{ctx.location} has {n} rows but at least {self.min_rows} are required")

        if parts < self.min_columns:
            errors.append(
                f"Composition table{ctx.location} has {parts} parts but at least {self.min_columns} are required"
            )

        if self.expected_columns is not None and parts != self.expected_columns:
            errors.append(f"Composition table{ctx.location} has {parts} parts but {self.expected_columns} expected")

        return errors
