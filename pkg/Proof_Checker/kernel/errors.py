"""
Exception hierarchy shared by the kernel, the parser and the sharer.

Every error renders a one-line message; errors that point at source text carry a
byte-offset ``Span``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Any, Optional


@dataclass(frozen=True, slots=True)
class Span:
    """Half-open byte range ``[start, end)`` into an input buffer."""
    start: int
    end: int

    def __post_init__(self) -> None:
        if self.start < 0 or self.end < self.start:
            raise ValueError(f"invalid span [{self.start}, {self.end})")


class KernelError(Exception):
    """Base class of all checker errors."""

    def __init__(self, message: str, span: Optional[Span] = None):
        super().__init__(message)
        self.message = message
        self.span = span

    def __reduce__(self) -> tuple[Any, ...]:
        # keep subclasses with extra fields picklable across worker processes
        return (_rebuild_error, (type(self), self.__dict__.copy()))


def _rebuild_error(cls: type, state: dict[str, Any]) -> KernelError:
    err = cls.__new__(cls)
    Exception.__init__(err, state.get("message", ""))
    err.__dict__.update(state)
    return err


# --- rules ---------------------------------------------------------------

class RuleViolation(KernelError):
    """A rewrite rule failed a structural validity condition."""

    def __init__(self, message: str, rule: Any = None, variable: Optional[str] = None):
        super().__init__(message)
        self.rule = rule
        self.variable = variable


class NonLinearPattern(RuleViolation):
    pass


class UnboundRhsVariable(RuleViolation):
    pass


class HeadlessLhs(RuleViolation):
    pass


class PatternIndexError(RuleViolation):
    pass


class PatternShapeError(RuleViolation):
    """A term cannot be read as a first-order pattern."""


# --- global context ------------------------------------------------------

class ContextError(KernelError):
    def __init__(self, message: str, symbol: Any = None):
        super().__init__(message, getattr(symbol, "span", None))
        self.symbol = symbol


class Redeclaration(ContextError):
    pass


class UndeclaredHead(ContextError):
    pass


class UnknownSymbol(ContextError):
    pass


# --- reduction -----------------------------------------------------------

class ReductionLimitExceeded(KernelError):
    def __init__(self, limit: int):
        super().__init__(f"reduction step limit of {limit} exceeded")
        self.limit = limit


# --- parsing -------------------------------------------------------------

class ParseError(KernelError):
    pass


class UnexpectedChar(ParseError):
    def __init__(self, offset: int, char: str):
        super().__init__(f"unexpected character {char!r}", Span(offset, offset + 1))
        self.offset = offset


class InvalidEncoding(ParseError):
    def __init__(self, offset: int):
        super().__init__("input is not valid UTF-8", Span(offset, offset + 1))
        self.offset = offset


class UnterminatedComment(ParseError):
    def __init__(self, offset: int):
        super().__init__("unterminated comment", Span(offset, offset + 2))
        self.offset = offset


class ParseSyntaxError(ParseError):
    def __init__(self, message: str, span: Span, expected: frozenset[str] = frozenset()):
        if expected:
            message = f"{message} (expected {', '.join(sorted(expected))})"
        super().__init__(message, span)
        self.expected = expected


# --- sharing -------------------------------------------------------------

class UnknownConstant(KernelError):
    def __init__(self, text: str, span: Optional[Span] = None):
        super().__init__(f"unknown constant {text}", span)
        self.text = text


# --- pipeline ------------------------------------------------------------

class CheckCancelled(KernelError):
    """A check was abandoned because a command before it already failed."""

    def __init__(self) -> None:
        super().__init__("check superseded by an earlier failure")


class InternalError(KernelError):
    """An unexpected exception while checking, reported against its command."""
