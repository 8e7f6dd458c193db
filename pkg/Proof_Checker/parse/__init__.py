from .lexer import Token, TokenKind, lex
from .parser import (
    BorrowedRef,
    Command,
    ConstantRef,
    Declaration,
    Definition,
    OwnedRef,
    RuleCommand,
    own_command,
    parse_commands,
)
from .printer import render_command, render_theory

__all__ = [
    "Token",
    "TokenKind",
    "lex",
    "BorrowedRef",
    "Command",
    "ConstantRef",
    "Declaration",
    "Definition",
    "OwnedRef",
    "RuleCommand",
    "own_command",
    "parse_commands",
    "render_command",
    "render_theory",
]
