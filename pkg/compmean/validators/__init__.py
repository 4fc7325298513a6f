"""Validation pipeline for composition tables."""

from compmean.validators.base import SkippableValidator, Validator
from compmean.validators.builder import build_composition_pipeline
from compmean.validators.checks import ChecksValidator
from compmean.validators.columns import NullableValidator, NumericValidator
from compmean.validators.context import ValidationContext
from compmean.validators.pipeline import ValidationPipeline
from compmean.validators.shape import ShapeValidator
from compmean.validators.simplex import UnitSumValidator

__all__ = [
    "ChecksValidator",
    "NullableValidator",
    "NumericValidator",
    "ShapeValidator",
    "SkippableValidator",
    "UnitSumValidator",
    "ValidationContext",
    "ValidationPipeline",
    "Validator",
    "build_composition_pipeline",
]
