"""Runs composition validators in order and turns their findings into one CompositionError."""

from __future__ import annotations

import logging
from dataclasses import dataclass, field
from typing import TYPE_CHECKING

from compmean.errors import CompositionError
from compmean.validators.base import SkippableValidator, Validator

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext

logger = logging.getLogger(__name__)


@dataclass
class ValidationPipeline:
    """Eager pipelines stop at the first failing validator; lazy ones report every problem together."""

    lazy: bool = False
    validators: list[Validator] = field(default_factory=list)

    def add(self, validator: Validator) -> ValidationPipeline:
        self.validators.append(validator)
        return self

    def collect(self, ctx: ValidationContext) -> list[str]:
        problems: list[str] = []
        for validator in self.validators:
            name = type(validator).__name__
            if isinstance(validator, SkippableValidator) and validator.should_skip(ctx):
                logger.debug("%s skipped%s", name, ctx.location)
                continue
            found = validator.validate(ctx)
            if found:
                logger.debug("%s found %d problem(s)%s", name, len(found), ctx.location)
                problems.extend(found)
                if not self.lazy:
                    break
        return problems

    def run(self, ctx: ValidationContext) -> None:
        problems = self.collect(ctx)
        if not problems:
            return
        if len(problems) == 1:
            raise CompositionError(problems[0], problems=problems)
        header = f"{len(problems)} problems with the composition table{ctx.location}:"
        raise CompositionError("\n\n".join([header, *problems]), problems=problems)

    def __len__(self) -> int:
        return len(self.validators)
