"""
Tokenizer for the surface syntax.

The lexer works on the raw bytes of a theory file and never copies them: a
token is a kind plus a byte range, and identifier text is recovered by slicing
the buffer on demand.
"""
from __future__ import annotations

import enum
import re
from typing import Iterator, NamedTuple, Optional, Union

from Proof_Checker.kernel.errors import InvalidEncoding, Span, UnexpectedChar, UnterminatedComment


class TokenKind(enum.Enum):
    IDENT = "identifier"
    COLON = "':'"
    DEFINE = "':='"
    DOT = "'.'"
    ARROW = "'->'"
    FAT_ARROW = "'=>'"
    LONG_ARROW = "'-->'"
    LBRACK = "'['"
    RBRACK = "']'"
    COMMA = "','"
    LPAR = "'('"
    RPAR = "')'"
    KW_DEF = "'def'"
    KW_TYPE = "'Type'"
    KW_KIND = "'Kind'"
    EOF = "end of input"


class Token(NamedTuple):
    kind: TokenKind
    start: int
    end: int

    @property
    def span(self) -> Span:
        return Span(self.start, self.end)


# longest first, so "-->" wins over "->" and ":=" over ":"
_PUNCTUATION: tuple[tuple[bytes, TokenKind], ...] = (
    (b"-->", TokenKind.LONG_ARROW),
    (b"->", TokenKind.ARROW),
    (b"=>", TokenKind.FAT_ARROW),
    (b":=", TokenKind.DEFINE),
    (b":", TokenKind.COLON),
    (b".", TokenKind.DOT),
    (b"[", TokenKind.LBRACK),
    (b"]", TokenKind.RBRACK),
    (b",", TokenKind.COMMA),
    (b"(", TokenKind.LPAR),
    (b")", TokenKind.RPAR),
)

_KEYWORDS = {
    b"def": TokenKind.KW_DEF,
    b"Type": TokenKind.KW_TYPE,
    b"Kind": TokenKind.KW_KIND,
}

_IDENT = re.compile(rb"[A-Za-z0-9_'!?\x80-\xff]+")
_SPACE = re.compile(rb"[ \t\r\n\f\v]+")


def _as_bytes(source: Union[bytes, bytearray, memoryview, str]) -> bytes:
    if isinstance(source, str):
        return source.encode("utf-8")
    return bytes(source) if not isinstance(source, bytes) else source


def _first_invalid(buf: bytes) -> Optional[int]:
    """Offset of the first byte that is not part of valid UTF-8, if any."""
    try:
        buf.decode("utf-8")
    except UnicodeDecodeError as err:
        return err.start
    return None


def _skip_comment(buf: bytes, pos: int) -> int:
    """Return the offset just past the comment opening at ``pos``; comments nest."""
    depth = 0
    i = pos
    n = len(buf)
    while i < n:
        if buf.startswith(b"(;", i):
            depth += 1
            i += 2
        elif buf.startswith(b";)", i):
            depth -= 1
            i += 2
            if depth == 0:
                return i
        else:
            i += 1
    raise UnterminatedComment(pos)


def lex(source: Union[bytes, bytearray, memoryview, str]) -> Iterator[Token]:
    """
    Lazily tokenize ``source``.

    Whitespace and ``(; ... ;)`` comments are skipped. The stream ends with a
    single ``EOF`` token.

    Raises:
        UnexpectedChar: On a byte that starts no token
        InvalidEncoding: When the stream reaches a byte that is not valid UTF-8
        UnterminatedComment: If a comment is still open at end of input
    """
    buf = _as_bytes(source)
    pos, n = 0, len(buf)
    bad = _first_invalid(buf)
    while True:
        m = _SPACE.match(buf, pos)
        if m:
            pos = m.end()
        if bad is not None and pos >= bad:
            raise InvalidEncoding(bad)
        if pos >= n:
            yield Token(TokenKind.EOF, n, n)
            return
        if buf.startswith(b"(;", pos):
            pos = _skip_comment(buf, pos)
            continue
        m = _IDENT.match(buf, pos)
        if m:
            end = m.end()
            if bad is not None and end > bad:
                raise InvalidEncoding(bad)
            yield Token(_KEYWORDS.get(buf[pos:end], TokenKind.IDENT), pos, end)
            pos = end
            continue
        for text, kind in _PUNCTUATION:
            if buf.startswith(text, pos):
                yield Token(kind, pos, pos + len(text))
                pos += len(text)
                break
        else:
            raise UnexpectedChar(pos, chr(buf[pos]))
