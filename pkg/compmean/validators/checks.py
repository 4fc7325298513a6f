"""Checks validator - per-part value constraints."""

from __future__ import annotations

from dataclasses import dataclass
from typing import TYPE_CHECKING, Any

from compmean.checks import validate_checks as run_checks

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext


@dataclass
class ChecksValidator:
    checks: dict[str, Any]
    max_samples: int = 5

    def should_skip(self, ctx: ValidationContext) -> bool:
        return not ctx.all_numeric

    def validate(self, ctx: ValidationContext) -> list[str]:
        all_violations: list[tuple[str, str, int, list[Any]]] = []

        for col in ctx.columns:
            all_violations.extend(run_checks(ctx.get_series(col), col, self.checks, self.max_samples))

        if not all_violations:
            return []

        if len(all_violations) == 1:
            col, check, count, samples = all_violations[0]
            return [f"Part '{col}'{ctx.location} failed check {check}: {count} values failed. Examples: {samples}"]

        violation_lines = [
            f"Part '{col}' failed {check}: {count} values. Examples: {samples}"
            for col, check, count, samples in all_violations
        ]
        return [f"Check violations{ctx.location}:\n  " + "\n  ".join(violation_lines)]
