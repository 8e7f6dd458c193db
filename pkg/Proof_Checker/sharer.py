"""
The sharer: maps the constants of parsed commands to canonical ``Symbol``
handles and re-wraps their terms under the kernel's sharing policy.

Only constants are canonicalised. Two equal compound subterms of a command
stay distinct objects after sharing.
"""
from __future__ import annotations

import logging
from dataclasses import dataclass
from typing import Iterator, Optional, Union

from Proof_Checker.kernel.context import Symbol
from Proof_Checker.kernel.errors import Span, UnknownConstant
from Proof_Checker.kernel.rule import Binding, Rule, map_pattern_constants
from Proof_Checker.kernel.term import SharingPolicy, Term, convert_policy, map_constants
from Proof_Checker.parse.parser import Command, Declaration, Definition, RuleCommand

logger = logging.getLogger(__name__)


class SymbolTable:
    """Insertion-ordered registry from constant text to its canonical Symbol."""

    def __init__(self) -> None:
        self._symbols: dict[str, Symbol] = {}

    def intern(self, text: str, span: Optional[Span] = None) -> Symbol:
        """Return the Symbol registered for ``text``, registering a fresh one if needed."""
        symbol = self._symbols.get(text)
        if symbol is None:
            symbol = Symbol(text, span)
            self._symbols[text] = symbol
        return symbol

    def resolve(self, ref) -> Symbol:
        """
        Look up an already registered constant.

        Args:
            ref: Borrowed or owned constant reference, or plain text

        Raises:
            UnknownConstant: If no command has introduced the constant yet
        """
        text = str(ref)
        symbol = self._symbols.get(text)
        if symbol is None:
            raise UnknownConstant(text, getattr(ref, "span", None))
        return symbol

    def __contains__(self, text: object) -> bool:
        return text in self._symbols

    def __len__(self) -> int:
        return len(self._symbols)

    def names(self) -> Iterator[str]:
        return iter(self._symbols)


@dataclass(frozen=True, slots=True)
class SharedDeclaration:
    index: int
    span: Span
    symbol: Symbol
    type: Term


@dataclass(frozen=True, slots=True)
class SharedDefinition:
    index: int
    span: Span
    symbol: Symbol
    type: Term
    body: Term


@dataclass(frozen=True, slots=True)
class SharedRule:
    index: int
    span: Span
    rule: Rule


SharedCommand = Union[SharedDeclaration, SharedDefinition, SharedRule]


def _share_term(tbl: SymbolTable, t: Term, policy: SharingPolicy) -> Term:
    return convert_policy(map_constants(t, tbl.resolve), policy)


def share_command(tbl: SymbolTable, cmd: Command,
                  policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> SharedCommand:
    """
    Intern the constants of ``cmd`` and convert its terms to ``policy``.

    A declaration's type is resolved before its name is registered, so a
    constant cannot mention itself in its own type. A definition registers its
    name before the body is resolved.

    Raises:
        UnknownConstant: For a constant no earlier command introduced
    """
    if isinstance(cmd, Declaration):
        ty = _share_term(tbl, cmd.type, policy)
        symbol = tbl.intern(str(cmd.name), getattr(cmd.name, "span", None))
        return SharedDeclaration(cmd.index, cmd.span, symbol, ty)
    if isinstance(cmd, Definition):
        ty = _share_term(tbl, cmd.type, policy)
        symbol = tbl.intern(str(cmd.name), getattr(cmd.name, "span", None))
        body = _share_term(tbl, cmd.body, policy)
        return SharedDefinition(cmd.index, cmd.span, symbol, ty, body)
    assert isinstance(cmd, RuleCommand)
    ctx = tuple(Binding(str(name), _share_term(tbl, ty, policy)) for name, ty in cmd.ctx)
    lhs = map_pattern_constants(cmd.lhs, tbl.resolve)
    rhs = _share_term(tbl, cmd.rhs, policy)
    return SharedRule(cmd.index, cmd.span, Rule(ctx, lhs, rhs))
