"""
Rendering of parsed commands back to the surface syntax.
"""
from __future__ import annotations

from Proof_Checker.kernel.pretty import render
from Proof_Checker.kernel.rule import pattern_to_term
from Proof_Checker.kernel.term import SharingPolicy

from .parser import Command, Declaration, Definition, RuleCommand


def render_command(cmd: Command) -> str:
    """Surface text of ``cmd``; parsing it again yields an equal command."""
    if isinstance(cmd, Declaration):
        return f"{cmd.name} : {render(cmd.type)}."
    if isinstance(cmd, Definition):
        return f"def {cmd.name} : {render(cmd.type)} := {render(cmd.body)}."
    assert isinstance(cmd, RuleCommand)
    names: list[str] = []
    entries = []
    for name, ty in cmd.ctx:
        entries.append(f"{name} : {render(ty, names)}")
        names.append(str(name))
    lhs = pattern_to_term(cmd.lhs, len(cmd.ctx), SharingPolicy.UNSHARED)
    return f"[{', '.join(entries)}] {render(lhs, names)} --> {render(cmd.rhs, names)}."


def render_theory(commands) -> str:
    return "\n".join(render_command(c) for c in commands) + "\n"
