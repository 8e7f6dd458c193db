"""
Recursive-descent parser producing a lazy stream of commands.

Constants are not copied out of the input: each one is a ``BorrowedRef``
naming a byte range of the buffer. Before a command leaves the thread that
owns the buffer it must be passed through ``own_command``, which replaces
every borrowed reference by an ``OwnedRef`` holding its own text.

Grammar::

    command ::= IDENT ":" term "."
              | "def" IDENT ":" term ":=" term "."
              | "[" ctx "]" app "-->" term "."
    ctx     ::= (IDENT ":" term ("," IDENT ":" term)*)?
    term    ::= IDENT ":" app "->" term        dependent product
              | IDENT ":" app "=>" term        annotated abstraction
              | IDENT "=>" term                unannotated abstraction
              | app ("->" term)?               non-dependent product
    app     ::= atom atom*
    atom    ::= IDENT | "Type" | "(" term ")"
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Generic, Iterator, Optional, TypeVar, Union

from Proof_Checker.kernel.errors import ParseSyntaxError, PatternShapeError, Span
from Proof_Checker.kernel.rule import Pattern, map_pattern_constants, term_to_pattern
from Proof_Checker.kernel.term import (
    TYPE,
    Const,
    SharingPolicy,
    Term,
    Var,
    app,
    arrow,
    lam,
    map_constants,
    pi,
)

from .lexer import Token, TokenKind, _as_bytes, lex

C = TypeVar("C")

_POLICY = SharingPolicy.UNSHARED


class ConstantRef:
    """Text of a constant occurrence; equal when the texts are equal."""

    __slots__ = ()

    @property
    def text(self) -> str:
        raise NotImplementedError

    @property
    def span(self) -> Optional[Span]:
        raise NotImplementedError

    def to_owned(self) -> "OwnedRef":
        raise NotImplementedError

    def __eq__(self, other: object) -> bool:
        if isinstance(other, ConstantRef):
            return self.text == other.text
        return NotImplemented

    def __hash__(self) -> int:
        return hash(self.text)

    def __str__(self) -> str:
        return self.text


class BorrowedRef(ConstantRef):
    """Byte range ``[start, end)`` of the input buffer."""

    __slots__ = ("buffer", "start", "end")

    def __init__(self, buffer: bytes, start: int, end: int):
        if not 0 <= start < end <= len(buffer):
            raise ValueError(f"slice [{start}, {end}) outside a buffer of {len(buffer)} bytes")
        self.buffer = buffer
        self.start = start
        self.end = end

    @property
    def text(self) -> str:
        return self.buffer[self.start:self.end].decode("utf-8")

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)

    def to_owned(self) -> "OwnedRef":
        return OwnedRef(self.text, self.span)

    def __repr__(self) -> str:
        return f"BorrowedRef({self.text!r}@{self.start})"


class OwnedRef(ConstantRef):
    __slots__ = ("_text", "_span")

    def __init__(self, text: str, span: Optional[Span] = None):
        self._text = text
        self._span = span

    @property
    def text(self) -> str:
        return self._text

    @property
    def span(self) -> Optional[Span]:
        return self._span

    def to_owned(self) -> "OwnedRef":
        return self

    def __reduce__(self):
        return (OwnedRef, (self._text, self._span))

    def __repr__(self) -> str:
        return f"OwnedRef({self._text!r})"


# --- commands ------------------------------------------------------------

@dataclass(frozen=True, slots=True)
class Declaration(Generic[C]):
    index: int
    span: Span
    name: C
    type: Term


@dataclass(frozen=True, slots=True)
class Definition(Generic[C]):
    index: int
    span: Span
    name: C
    type: Term
    body: Term


@dataclass(frozen=True, slots=True)
class RuleCommand(Generic[C]):
    index: int
    span: Span
    ctx: tuple[tuple[C, Term], ...]
    lhs: Pattern
    rhs: Term
    lhs_span: Optional[Span] = field(default=None, compare=False)


Command = Union[Declaration, Definition, RuleCommand]


class Parser:
    """
    Single-use parser over one input buffer.

    Args:
        source: Theory text; ``str`` input is encoded as UTF-8 first
    """

    def __init__(self, source: Union[bytes, str]):
        self.buffer = _as_bytes(source)
        self._tokens = lex(self.buffer)
        self._lookahead: list[Token] = []
        self._binders: list[str] = []
        self._count = 0

    # --- token plumbing ------------------------------------------------

    def _peek(self, k: int = 0) -> Token:
        while len(self._lookahead) <= k:
            self._lookahead.append(next(self._tokens))
        return self._lookahead[k]

    def _next(self) -> Token:
        tok = self._peek()
        self._lookahead.pop(0)
        return tok

    def _expect(self, kind: TokenKind, context: str) -> Token:
        tok = self._peek()
        if tok.kind is not kind:
            raise ParseSyntaxError(
                f"unexpected {self._describe(tok)} {context}",
                tok.span,
                frozenset({kind.value}),
            )
        return self._next()

    def _describe(self, tok: Token) -> str:
        if tok.kind is TokenKind.IDENT:
            return f"identifier {self._text(tok)!r}"
        return tok.kind.value

    def _text(self, tok: Token) -> str:
        return self.buffer[tok.start:tok.end].decode("utf-8")

    # --- commands ------------------------------------------------------

    def commands(self) -> Iterator[Command]:
        while self._peek().kind is not TokenKind.EOF:
            self._count += 1
            yield self._command()

    def _command(self) -> Command:
        first = self._peek()
        self._binders.clear()
        if first.kind is TokenKind.IDENT:
            name = self._next()
            self._expect(TokenKind.COLON, "after the declared name")
            ty = self._term()
            end = self._expect(TokenKind.DOT, "at the end of a declaration")
            return Declaration(self._count, Span(first.start, end.end), self._ref(name), ty)
        if first.kind is TokenKind.KW_DEF:
            self._next()
            name = self._expect(TokenKind.IDENT, "after 'def'")
            self._expect(TokenKind.COLON, "after the defined name")
            ty = self._term()
            self._expect(TokenKind.DEFINE, "after the type of a definition")
            body = self._term()
            end = self._expect(TokenKind.DOT, "at the end of a definition")
            return Definition(self._count, Span(first.start, end.end), self._ref(name), ty, body)
        if first.kind is TokenKind.LBRACK:
            return self._rule()
        raise ParseSyntaxError(
            f"unexpected {self._describe(first)} at the start of a command",
            first.span,
            frozenset({TokenKind.IDENT.value, TokenKind.KW_DEF.value, TokenKind.LBRACK.value}),
        )

    def _rule(self) -> RuleCommand:
        start = self._next()
        ctx: list[tuple[BorrowedRef, Term]] = []
        if self._peek().kind is not TokenKind.RBRACK:
            while True:
                name = self._expect(TokenKind.IDENT, "in a rule context")
                if self._peek().kind is not TokenKind.COLON:
                    raise ParseSyntaxError(
                        f"rule variable {self._text(name)} needs a type annotation",
                        self._peek().span,
                        frozenset({TokenKind.COLON.value}),
                    )
                self._next()
                ctx.append((self._ref(name), self._term()))
                self._binders.append(self._text(name))
                if self._peek().kind is TokenKind.COMMA:
                    self._next()
                    continue
                break
        self._expect(TokenKind.RBRACK, "after a rule context")
        lhs_start = self._peek().start
        lhs_term = self._app()
        lhs_span = Span(lhs_start, self._peek().start)
        try:
            lhs = term_to_pattern(lhs_term, len(ctx))
        except PatternShapeError as exc:
            raise ParseSyntaxError(f"invalid rule left-hand side: {exc.message}", lhs_span) from exc
        self._expect(TokenKind.LONG_ARROW, "after a rule left-hand side")
        rhs = self._term()
        end = self._expect(TokenKind.DOT, "at the end of a rule")
        return RuleCommand(self._count, Span(start.start, end.end), tuple(ctx), lhs, rhs, lhs_span)

    # --- terms ---------------------------------------------------------

    def _term(self) -> Term:
        tok = self._peek()
        if tok.kind is TokenKind.IDENT:
            after = self._peek(1).kind
            if after is TokenKind.COLON:
                return self._binder()
            if after is TokenKind.FAT_ARROW:
                self._next()
                self._next()
                body = self._under(self._text(tok), self._term)
                return lam(None, body, self._text(tok), _POLICY)
        dom = self._app()
        if self._peek().kind is TokenKind.ARROW:
            self._next()
            return arrow(dom, self._term(), _POLICY)
        return dom

    def _binder(self) -> Term:
        name = self._text(self._next())
        self._next()
        dom = self._app()
        tok = self._next()
        if tok.kind is TokenKind.ARROW:
            return pi(dom, self._under(name, self._term), name, _POLICY)
        if tok.kind is TokenKind.FAT_ARROW:
            return lam(dom, self._under(name, self._term), name, _POLICY)
        raise ParseSyntaxError(
            f"unexpected {self._describe(tok)} after the type of {name}",
            tok.span,
            frozenset({TokenKind.ARROW.value, TokenKind.FAT_ARROW.value}),
        )

    def _under(self, name: str, parse) -> Term:
        self._binders.append(name)
        try:
            return parse()
        finally:
            self._binders.pop()

    def _app(self) -> Term:
        head = self._atom()
        args = []
        while self._peek().kind in (TokenKind.IDENT, TokenKind.KW_TYPE, TokenKind.LPAR, TokenKind.KW_KIND):
            args.append(self._atom())
        return app(head, args, _POLICY)

    def _atom(self) -> Term:
        tok = self._next()
        if tok.kind is TokenKind.IDENT:
            return self._resolve(tok)
        if tok.kind is TokenKind.KW_TYPE:
            return TYPE
        if tok.kind is TokenKind.LPAR:
            inner = self._term()
            self._expect(TokenKind.RPAR, "to close a parenthesis")
            return inner
        if tok.kind is TokenKind.KW_KIND:
            raise ParseSyntaxError("Kind cannot be written in a term", tok.span)
        raise ParseSyntaxError(
            f"unexpected {self._describe(tok)} where a term was expected",
            tok.span,
            frozenset({TokenKind.IDENT.value, TokenKind.KW_TYPE.value, TokenKind.LPAR.value}),
        )

    def _resolve(self, tok: Token) -> Term:
        name = self._text(tok)
        for depth, bound in enumerate(reversed(self._binders)):
            if bound == name:
                return Var(depth)
        return Const(self._ref(tok))

    def _ref(self, tok: Token) -> BorrowedRef:
        return BorrowedRef(self.buffer, tok.start, tok.end)


def parse_commands(source: Union[bytes, str]) -> Iterator[Command]:
    """
    Lazily parse ``source`` into commands with borrowed constants.

    Each command is produced as soon as its closing ``.`` has been read, so a
    syntax error is only raised when the stream reaches it.
    """
    return Parser(source).commands()


def _own(ref: ConstantRef) -> OwnedRef:
    return ref.to_owned()


def own_command(cmd: Command) -> Command:
    """Replace every constant reference of ``cmd`` by an owned copy of its text."""
    if isinstance(cmd, Declaration):
        return Declaration(cmd.index, cmd.span, _own(cmd.name), map_constants(cmd.type, _own))
    if isinstance(cmd, Definition):
        return Definition(cmd.index, cmd.span, _own(cmd.name),
                          map_constants(cmd.type, _own), map_constants(cmd.body, _own))
    ctx = tuple((_own(name), map_constants(ty, _own)) for name, ty in cmd.ctx)
    return RuleCommand(cmd.index, cmd.span, ctx, map_pattern_constants(cmd.lhs, _own),
                       map_constants(cmd.rhs, _own), cmd.lhs_span)
