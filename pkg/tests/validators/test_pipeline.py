"""Tests for ValidationPipeline."""

from dataclasses import dataclass

import pandas as pd
import pytest

from compmean.errors import CompositionError
from compmean.validators.context import ValidationContext
from compmean.validators.pipeline import ValidationPipeline


@dataclass
class AlwaysPassValidator:
    def validate(self, ctx: ValidationContext) -> list[str]:  # noqa: ARG002
        return []


@dataclass
class AlwaysFailValidator:
    message: str = "Validation failed"

    def validate(self, ctx: ValidationContext) -> list[str]:  # noqa: ARG002
        return [self.message]


@dataclass
class SkippedValidator:
    def should_skip(self, ctx: ValidationContext) -> bool:  # noqa: ARG002
        return True

    def validate(self, ctx: ValidationContext) -> list[str]:  # noqa: ARG002
        return ["should never run"]


@pytest.fixture
def ctx() -> ValidationContext:
    return ValidationContext(df=pd.DataFrame({"a": [0.5], "b": [0.5]}))


class TestValidationPipeline:
    def test_empty_pipeline_passes(self, ctx: ValidationContext) -> None:
        ValidationPipeline().run(ctx)

    def test_passing_validators(self, ctx: ValidationContext) -> None:
        pipeline = ValidationPipeline().add(AlwaysPassValidator()).add(AlwaysPassValidator())

        pipeline.run(ctx)
        assert len(pipeline) == 2

    def test_eager_mode_fails_on_first_error(self, ctx: ValidationContext) -> None:
        pipeline = ValidationPipeline(lazy=False)
        pipeline.add(AlwaysFailValidator(message="First error"))
        pipeline.add(AlwaysFailValidator(message="Second error"))

        with pytest.raises(CompositionError, match="First error") as exc_info:
            pipeline.run(ctx)

        assert "Second error" not in str(exc_info.value)

    def test_lazy_mode_collects_all_errors(self, ctx: ValidationContext) -> None:
        pipeline = ValidationPipeline(lazy=True)
        pipeline.add(AlwaysFailValidator(message="First error"))
        pipeline.add(AlwaysPassValidator())
        pipeline.add(AlwaysFailValidator(message="Second error"))

        with pytest.raises(CompositionError) as exc_info:
            pipeline.run(ctx)

        assert exc_info.value.problems == ("First error", "Second error")
        assert str(exc_info.value) == "2 problems with the composition table:\n\nFirst error\n\nSecond error"

    def test_single_problem_has_no_header(self, ctx: ValidationContext) -> None:
        pipeline = ValidationPipeline(lazy=True).add(AlwaysFailValidator(message="Only error"))

        with pytest.raises(CompositionError) as exc_info:
            pipeline.run(ctx)

        assert str(exc_info.value) == "Only error"

    def test_collect_returns_problems_without_raising(self, ctx: ValidationContext) -> None:
        pipeline = ValidationPipeline(lazy=True).add(AlwaysFailValidator(message="x")).add(AlwaysPassValidator())

        assert pipeline.collect(ctx) == ["x"]

    def test_skippable_validator_skipped(self, ctx: ValidationContext) -> None:
        ValidationPipeline().add(SkippedValidator()).run(ctx)

    def test_composition_error_is_value_error(self, ctx: ValidationContext) -> None:
        with pytest.raises(ValueError):
            ValidationPipeline().add(AlwaysFailValidator()).run(ctx)
