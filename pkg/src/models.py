"""Value-or-abort container shared by the protocol layers."""

from dataclasses import dataclass
from typing import TYPE_CHECKING, Generic, TypeVar, cast

if TYPE_CHECKING:
    from collections.abc import Callable

T = TypeVar("T")
E = TypeVar("E")
U = TypeVar("U")
F = TypeVar("F")


@dataclass(frozen=True, slots=True)
class Result(Generic[T, E]):
    """Outcome of a step that can end in an expected failure.

    A protocol execution ends with the anonymous EPR pair or with an abort
    reason. Neither is exceptional, so both travel as values. A success may
    carry None as its payload: branch on `is_success`, never on `value`.
    """

    is_success: bool
    value: T | None = None
    error: E | None = None

    @classmethod
    def success(cls, value: T) -> "Result[T, E]":
        return cls(True, value, None)

    @classmethod
    def failure(cls, error: E) -> "Result[T, E]":
        return cls(False, None, error)

    @property
    def is_failure(self) -> bool:
        return not self.is_success

    def unwrap(self) -> T:
        """The success payload; ValueError naming the abort otherwise."""
        if self.is_failure:
            raise ValueError(f"unwrap() on an aborted result: {self.error}")
        return cast(T, self.value)

    def unwrap_error(self) -> E:
        if self.is_success:
            raise ValueError("unwrap_error() on a successful result")
        return cast(E, self.error)

    def map(self, fn: "Callable[[T], U]") -> "Result[U, E]":
        if self.is_failure:
            return Result.failure(cast(E, self.error))
        return Result.success(fn(cast(T, self.value)))

    def map_error(self, fn: "Callable[[E], F]") -> "Result[T, F]":
        if self.is_success:
            return Result.success(cast(T, self.value))
        return Result.failure(fn(cast(E, self.error)))

    def chain(self, fn: "Callable[[T], Result[U, E]]") -> "Result[U, E]":
        """Run the next step only if this one succeeded."""
        if self.is_failure:
            return Result.failure(cast(E, self.error))
        return fn(cast(T, self.value))
