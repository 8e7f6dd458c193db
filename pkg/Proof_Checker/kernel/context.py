"""
The global context: declared constant types and the rewrite rules headed by
each constant.

The store is a persistent hash map, so every value of ``GlobalContext`` is an
immutable snapshot and extending it never disturbs earlier values. Copying a
context for a deferred check task is therefore free.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Iterator, NamedTuple, Optional

from pyrsistent import PMap, PVector, pmap, pvector

from .errors import Redeclaration, Span, UndeclaredHead, UnknownSymbol
from .rule import Rule
from .term import Term


class Symbol:
    """
    Canonical handle for a declared constant.

    Equality and hashing are by identity, so comparing two symbols costs the
    same regardless of how many symbols exist.
    """

    __slots__ = ("name", "span")

    def __init__(self, name: str, span: Optional[Span] = None):
        self.name = name
        self.span = span

    def __str__(self) -> str:
        return self.name

    def __repr__(self) -> str:
        return f"Symbol({self.name!r})"


class Entry(NamedTuple):
    type: Term
    rules: PVector


@dataclass(frozen=True, slots=True)
class GlobalContext:
    entries: PMap = field(default_factory=pmap)

    def declare(self, c: Symbol, ty: Term) -> "GlobalContext":
        """
        Bind ``c`` to ``ty`` with no rules.

        Raises:
            Redeclaration: If ``c`` is already declared
        """
        if c in self.entries:
            raise Redeclaration(f"constant {c} is already declared", c)
        return GlobalContext(self.entries.set(c, Entry(ty, pvector())))

    def add_rule(self, r: Rule) -> "GlobalContext":
        """
        Append ``r`` to the rules of its head symbol, after the ones already there.

        Raises:
            UndeclaredHead: If the head symbol was never declared
        """
        head = r.head
        entry = self.entries.get(head)
        if entry is None:
            raise UndeclaredHead(f"rule head {head} is not declared", head)
        return GlobalContext(self.entries.set(head, Entry(entry.type, entry.rules.append(r))))

    def lookup_type(self, c: Symbol) -> Term:
        entry = self.entries.get(c)
        if entry is None:
            raise UnknownSymbol(f"unknown symbol {c}", c)
        return entry.type

    def lookup_rules(self, c: Symbol) -> PVector:
        entry = self.entries.get(c)
        if entry is None:
            raise UnknownSymbol(f"unknown symbol {c}", c)
        return entry.rules

    def snapshot(self) -> "GlobalContext":
        return self

    def __contains__(self, c: object) -> bool:
        return c in self.entries

    def __len__(self) -> int:
        return len(self.entries)

    def symbols(self) -> Iterator[Symbol]:
        return iter(self.entries.keys())

    def rule_count(self) -> int:
        return sum(len(e.rules) for e in self.entries.values())
