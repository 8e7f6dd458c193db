"""
Rendering of kernel terms in the surface syntax, for diagnostics.
"""
from __future__ import annotations

from typing import AbstractSet, Sequence

from .term import App, Comb, Const, Lam, Pi, SortTerm, Term, Var, iter_constants, occurs


def render(t: Term, names: Sequence[str] = (), avoid: AbstractSet[str] = frozenset()) -> str:
    """
    Render ``t`` with ``names`` naming its free variables (last name = ``Var(0)``).

    Binders are renamed away from the constants of ``t`` and from ``avoid``.

    Args:
        t: Term to render
        names: Display names of the enclosing binders, outermost first
        avoid: Further names a binder must not take, such as declared constants

    Returns:
        Surface-syntax text that parses back to ``t`` in the same scope
    """
    taken = set(avoid)
    taken.update(str(c) for c in iter_constants(t))
    return _render(t, list(names), _TOP, taken)


_TOP, _APP, _ARG = 0, 1, 2


def _fresh(name: str, names: list[str], taken: set[str]) -> str:
    if name == "_":
        name = "x"
    candidate = name
    while candidate in names or candidate in taken:
        candidate += "'"
    return candidate


def _paren(text: str, needed: bool) -> str:
    return f"({text})" if needed else text


def _render(t: Term, names: list[str], level: int, taken: set[str]) -> str:
    if isinstance(t, SortTerm):
        return t.sort.value
    if isinstance(t, Const):
        return str(t.c)
    if isinstance(t, Var):
        if t.index < len(names):
            return names[-1 - t.index]
        return f"#{t.index - len(names)}"
    assert isinstance(t, Comb)
    node = t.node
    if isinstance(node, App):
        parts = [_render(node.head, names, _ARG, taken)]
        parts.extend(_render(a, names, _ARG, taken) for a in node.args)
        return _paren(" ".join(parts), level == _ARG)
    if isinstance(node, Lam):
        name = _fresh(node.name, names, taken)
        body = _render(node.body, names + [name], _TOP, taken)
        if node.ann is None:
            text = f"{name} => {body}"
        else:
            text = f"{name} : {_render(node.ann, names, _APP, taken)} => {body}"
        return _paren(text, level != _TOP)
    assert isinstance(node, Pi)
    if occurs(node.cod, 0):
        name = _fresh(node.name, names, taken)
        cod = _render(node.cod, names + [name], _TOP, taken)
        text = f"{name} : {_render(node.dom, names, _APP, taken)} -> {cod}"
    else:
        cod = _render(node.cod, names + ["_"], _TOP, taken)
        text = f"{_render(node.dom, names, _APP, taken)} -> {cod}"
    return _paren(text, level != _TOP)
