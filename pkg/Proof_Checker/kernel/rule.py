"""
First-order rewrite patterns and rules.

A rule ``c p1 ... pn --> t`` lives in a typed local context. Pattern
variables (``MVar``) are numbered by their context position (level 0 is the
first, outermost entry), while the right-hand side refers to the same entries
through ordinary de Bruijn indices, the innermost entry being ``Var(0)``.
"""
from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Generic, Iterator, Sequence, TypeVar, Union

from .errors import (
    HeadlessLhs,
    NonLinearPattern,
    PatternIndexError,
    PatternShapeError,
    UnboundRhsVariable,
)
from .term import (
    Const,
    SharingPolicy,
    Term,
    Var,
    app,
    free_vars,
    map_constants,
    spine,
)

C = TypeVar("C")
D = TypeVar("D")


@dataclass(frozen=True, slots=True)
class MVar:
    level: int


@dataclass(frozen=True, slots=True)
class Head(Generic[C]):
    c: C
    args: tuple["Pattern", ...] = ()

    def __str__(self) -> str:
        if not self.args:
            return str(self.c)
        inner = " ".join(str(a) if isinstance(a, MVar) or not a.args else f"({a})" for a in self.args)
        return f"{self.c} {inner}"


Pattern = Union[MVar, Head]


@dataclass(frozen=True, slots=True)
class Binding:
    """One local-context entry: display name and type."""
    name: str
    type: Term


LocalContext = tuple[Binding, ...]


@dataclass(frozen=True, slots=True)
class Rule(Generic[C]):
    ctx: LocalContext
    lhs: Pattern
    rhs: Term

    @property
    def head(self) -> C:
        if not isinstance(self.lhs, Head):
            raise HeadlessLhs("rule left-hand side has no head symbol", rule=self)
        return self.lhs.c

    @property
    def arity(self) -> int:
        return len(self.lhs.args) if isinstance(self.lhs, Head) else 0

    def __str__(self) -> str:
        names = ", ".join(b.name for b in self.ctx)
        return f"[{names}] {self.lhs} --> ..."


def pattern_mvars(p: Pattern) -> Iterator[int]:
    if isinstance(p, MVar):
        yield p.level
    else:
        for a in p.args:
            yield from pattern_mvars(a)


def map_pattern_constants(p: Pattern, f: Callable[[C], D]) -> Pattern:
    if isinstance(p, MVar):
        return p
    try:
        c = f(p.c)
    except Exception as exc:
        exc.add_note(f"while mapping constant {p.c}")
        raise
    return Head(c, tuple(map_pattern_constants(a, f) for a in p.args))


def validate_rule(r: Rule) -> None:
    """
    Check that ``r`` has a head symbol, is left-linear and that every context
    entry used on the right-hand side is bound by the left-hand side.

    Raises:
        HeadlessLhs, NonLinearPattern, UnboundRhsVariable, PatternIndexError
    """
    if not isinstance(r.lhs, Head):
        raise HeadlessLhs(f"rule {r} has a bare variable as left-hand side", rule=r)
    n = len(r.ctx)
    seen: set[int] = set()
    for level in pattern_mvars(r.lhs):
        if not 0 <= level < n:
            raise PatternIndexError(f"pattern variable #{level} outside a context of {n}", rule=r)
        if level in seen:
            name = r.ctx[level].name
            raise NonLinearPattern(f"pattern variable {name} occurs more than once", rule=r, variable=name)
        seen.add(level)
    for index in sorted(free_vars(r.rhs)):
        level = n - 1 - index
        if level < 0:
            raise UnboundRhsVariable(f"right-hand side refers to unbound variable #{index}",
                                     rule=r, variable=f"#{index}")
        if level not in seen:
            name = r.ctx[level].name
            raise UnboundRhsVariable(f"variable {name} of the right-hand side does not occur on the left",
                                     rule=r, variable=name)


def pattern_to_term(p: Pattern, ctx_len: int,
                    policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> Term:
    """Read a pattern as a term under a local context of ``ctx_len`` entries."""
    if isinstance(p, MVar):
        if not 0 <= p.level < ctx_len:
            raise PatternIndexError(f"pattern variable #{p.level} outside a context of {ctx_len}")
        return Var(ctx_len - 1 - p.level)
    return app(Const(p.c), [pattern_to_term(a, ctx_len, policy) for a in p.args], policy)


def term_to_pattern(t: Term, ctx_len: int) -> Pattern:
    """Inverse of ``pattern_to_term`` on the terms it produces."""
    if isinstance(t, Var):
        if t.index >= ctx_len:
            raise PatternShapeError(f"variable #{t.index} is not a pattern variable")
        return MVar(ctx_len - 1 - t.index)
    head, args = spine(t)
    if not isinstance(head, Const):
        raise PatternShapeError("patterns must be constants applied to patterns")
    return Head(head.c, tuple(term_to_pattern(a, ctx_len) for a in args))


def map_rule_constants(r: Rule, f: Callable[[C], D]) -> Rule:
    ctx = tuple(Binding(b.name, map_constants(b.type, f)) for b in r.ctx)
    return Rule(ctx, map_pattern_constants(r.lhs, f), map_constants(r.rhs, f))


def make_context(entries: Sequence[tuple[str, Term]]) -> LocalContext:
    return tuple(Binding(name, ty) for name, ty in entries)


