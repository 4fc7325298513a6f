"""Validator protocols for composition tables."""

from __future__ import annotations

from typing import TYPE_CHECKING, Protocol, runtime_checkable

if TYPE_CHECKING:
    from compmean.validators.context import ValidationContext


@runtime_checkable
class Validator(Protocol):
    """One check of a composition table; returns its error messages, empty when the table passes."""

    def validate(self, ctx: ValidationContext) -> list[str]: ...


@runtime_checkable
class SkippableValidator(Protocol):
    """A validator whose check is meaningless on some tables, e.g. value checks on non-numeric columns."""

    def should_skip(self, ctx: ValidationContext) -> bool: ...

    def validate(self, ctx: ValidationContext) -> list[str]: ...
