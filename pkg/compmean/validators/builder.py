"""Pipeline builder - assembles the validators a composition table must pass."""

from __future__ import annotations

from compmean.checks import part_checks
from compmean.validators.checks import ChecksValidator
from compmean.validators.columns import NullableValidator, NumericValidator
from compmean.validators.pipeline import ValidationPipeline
from compmean.validators.shape import ShapeValidator
from compmean.validators.simplex import UnitSumValidator


def build_composition_pipeline(
    tolerance: float,
    lazy: bool,
    min_rows: int = 2,
    expected_parts: int | None = None,
) -> ValidationPipeline:
    """Build the validation pipeline for an n x D table of compositions."""
    pipeline = ValidationPipeline(lazy=lazy)
    pipeline.add(ShapeValidator(min_rows=min_rows, expected_columns=expected_parts))
    pipeline.add(NumericValidator())
    pipeline.add(NullableValidator())
    pipeline.add(ChecksValidator(part_checks(tolerance)))
    pipeline.add(UnitSumValidator(tolerance))
    return pipeline
