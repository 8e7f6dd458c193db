"""
Kernel terms.

Terms use a two-layer layout: the atomic constructors (sorts, constants and
de Bruijn variables) are plain immutable values, while the compound
constructors (application, abstraction, product) live in a ``TermC`` payload
that is reached through a single ``Comb`` box. The box records the sharing
policy it was created under:

- ``UNSHARED``: every occurrence owns its payload; converting to this policy
  deep-copies, so no two positions alias each other.
- ``LOCAL_SHARED``: payloads may be aliased and compared by identity; the term
  must stay on the thread that built it.
- ``GLOBAL_SHARED``: payloads may be aliased, compared by identity and handed
  to check workers.

Structural equality ignores both the policy and the binder display names.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Callable, Generic, Iterator, NamedTuple, Optional, Sequence, TypeVar, Union

C = TypeVar("C")
D = TypeVar("D")


class Sort(enum.Enum):
    TYPE = "Type"
    KIND = "Kind"


class SharingPolicy(enum.Enum):
    UNSHARED = "unshared"
    LOCAL_SHARED = "local"
    GLOBAL_SHARED = "global"

    @property
    def identity_comparable(self) -> bool:
        return self is not SharingPolicy.UNSHARED


# --- atomic layer --------------------------------------------------------

@dataclass(frozen=True, slots=True)
class SortTerm:
    sort: Sort

    def __repr__(self) -> str:
        return self.sort.value


KIND = SortTerm(Sort.KIND)
TYPE = SortTerm(Sort.TYPE)


@dataclass(frozen=True, slots=True)
class Const(Generic[C]):
    c: C

    def __repr__(self) -> str:
        return f"Const({self.c})"


@dataclass(frozen=True, slots=True)
class Var:
    index: int

    def __post_init__(self) -> None:
        if self.index < 0:
            raise ValueError(f"negative de Bruijn index {self.index}")


# --- compound layer ------------------------------------------------------

@dataclass(frozen=True, slots=True)
class App:
    head: "Term"
    args: tuple["Term", ...]

    def __post_init__(self) -> None:
        if not self.args:
            raise ValueError("application without arguments")
        if isinstance(self.head, Comb) and isinstance(self.head.node, App):
            raise ValueError("application head must not be an application")


@dataclass(frozen=True, slots=True)
class Lam:
    ann: Optional["Term"]
    body: "Term"
    name: str = field(default="x", compare=False)


@dataclass(frozen=True, slots=True)
class Pi:
    dom: "Term"
    cod: "Term"
    name: str = field(default="_", compare=False)


TermC = Union[App, Lam, Pi]


@dataclass(frozen=True, slots=True, eq=False)
class Comb:
    """The single indirection in front of a compound payload."""
    node: TermC
    policy: SharingPolicy = SharingPolicy.LOCAL_SHARED

    def __eq__(self, other: object) -> bool:
        if self is other:
            return True
        if not isinstance(other, Comb):
            return NotImplemented
        return self.node == other.node

    def __hash__(self) -> int:
        return hash(self.node)

    def __repr__(self) -> str:
        return f"Comb({self.node!r})"


Term = Union[SortTerm, Const, Var, Comb]

# --- smart constructors --------------------------------------------------

def app(head: Term, args: Sequence[Term], policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> Term:
    """Apply ``head`` to ``args``, flattening nested spines."""
    if not args:
        return head
    if isinstance(head, Comb) and isinstance(head.node, App):
        return Comb(App(head.node.head, head.node.args + tuple(args)), policy)
    return Comb(App(head, tuple(args)), policy)


def lam(ann: Optional[Term], body: Term, name: str = "x",
        policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> Term:
    return Comb(Lam(ann, body, name), policy)


def pi(dom: Term, cod: Term, name: str = "_",
       policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> Term:
    return Comb(Pi(dom, cod, name), policy)


def arrow(dom: Term, cod: Term, policy: SharingPolicy = SharingPolicy.LOCAL_SHARED) -> Term:
    """Non-dependent product ``dom -> cod``; ``cod`` is lifted past the new binder."""
    return Comb(Pi(dom, shift(cod, 1), "_"), policy)


def spine(t: Term) -> tuple[Term, tuple[Term, ...]]:
    if isinstance(t, Comb) and isinstance(t.node, App):
        return t.node.head, t.node.args
    return t, ()


# --- de Bruijn plumbing --------------------------------------------------

def shift(t: Term, by: int, cutoff: int = 0) -> Term:
    """Add ``by`` to every variable index ``>= cutoff``; returns ``t`` itself when nothing moves."""
    if by == 0:
        return t
    if isinstance(t, Var):
        return Var(t.index + by) if t.index >= cutoff else t
    if not isinstance(t, Comb):
        return t
    node = t.node
    if isinstance(node, App):
        head = shift(node.head, by, cutoff)
        args = tuple(shift(a, by, cutoff) for a in node.args)
        if head is node.head and all(x is y for x, y in zip(args, node.args)):
            return t
        return app(head, args, t.policy)
    if isinstance(node, Lam):
        ann = None if node.ann is None else shift(node.ann, by, cutoff)
        body = shift(node.body, by, cutoff + 1)
        if ann is node.ann and body is node.body:
            return t
        return Comb(Lam(ann, body, node.name), t.policy)
    dom = shift(node.dom, by, cutoff)
    cod = shift(node.cod, by, cutoff + 1)
    if dom is node.dom and cod is node.cod:
        return t
    return Comb(Pi(dom, cod, node.name), t.policy)


def occurs(t: Term, index: int) -> bool:
    """Whether ``Var(index)`` occurs free in ``t``."""
    if isinstance(t, Var):
        return t.index == index
    if not isinstance(t, Comb):
        return False
    node = t.node
    if isinstance(node, App):
        return occurs(node.head, index) or any(occurs(a, index) for a in node.args)
    if isinstance(node, Lam):
        return (node.ann is not None and occurs(node.ann, index)) or occurs(node.body, index + 1)
    return occurs(node.dom, index) or occurs(node.cod, index + 1)


def free_vars(t: Term, depth: int = 0) -> set[int]:
    """Free de Bruijn indices of ``t``, relative to its own scope."""
    if isinstance(t, Var):
        return {t.index - depth} if t.index >= depth else set()
    if not isinstance(t, Comb):
        return set()
    node = t.node
    if isinstance(node, App):
        out = free_vars(node.head, depth)
        for a in node.args:
            out |= free_vars(a, depth)
        return out
    if isinstance(node, Lam):
        out = free_vars(node.body, depth + 1)
        if node.ann is not None:
            out |= free_vars(node.ann, depth)
        return out
    return free_vars(node.dom, depth) | free_vars(node.cod, depth + 1)


# --- policy and constant conversion ---------------------------------------

def convert_policy(t: Term, policy: SharingPolicy) -> Term:
    """
    Re-wrap every ``Comb`` of ``t`` under ``policy``.

    Atomic subterms are returned as they are. When converting to a shared
    policy, aliased payloads of the input stay aliased in the output; when
    converting to ``UNSHARED`` each occurrence gets its own copy.
    """
    memo: Optional[dict[int, Comb]] = {} if policy.identity_comparable else None
    return _convert(t, policy, memo)


def _convert(t: Term, policy: SharingPolicy, memo: Optional[dict[int, Comb]]) -> Term:
    if not isinstance(t, Comb):
        return t
    if memo is not None:
        hit = memo.get(id(t))
        if hit is not None:
            return hit
    node = t.node
    if isinstance(node, App):
        new: TermC = App(_convert(node.head, policy, memo),
                         tuple(_convert(a, policy, memo) for a in node.args))
    elif isinstance(node, Lam):
        ann = None if node.ann is None else _convert(node.ann, policy, memo)
        new = Lam(ann, _convert(node.body, policy, memo), node.name)
    else:
        new = Pi(_convert(node.dom, policy, memo), _convert(node.cod, policy, memo), node.name)
    out = Comb(new, policy)
    if memo is not None:
        memo[id(t)] = out
    return out


def map_constants(t: Term, f: Callable[[C], D]) -> Term:
    """
    Replace every ``Const(c)`` by ``Const(f(c))``.

    Args:
        t: Term to rewrite
        f: Constant mapping; exceptions it raises propagate with the offending
           constant recorded in the exception notes

    Returns:
        A term with the same structure and sharing policy
    """
    if isinstance(t, Const):
        try:
            return Const(f(t.c))
        except Exception as exc:
            exc.add_note(f"while mapping constant {t.c}")
            raise
    if not isinstance(t, Comb):
        return t
    node = t.node
    if isinstance(node, App):
        return app(map_constants(node.head, f), tuple(map_constants(a, f) for a in node.args), t.policy)
    if isinstance(node, Lam):
        ann = None if node.ann is None else map_constants(node.ann, f)
        return Comb(Lam(ann, map_constants(node.body, f), node.name), t.policy)
    return Comb(Pi(map_constants(node.dom, f), map_constants(node.cod, f), node.name), t.policy)


def iter_constants(t: Term) -> Iterator:
    """Yield every constant payload of ``t`` in left-to-right order."""
    if isinstance(t, Const):
        yield t.c
    elif isinstance(t, Comb):
        node = t.node
        if isinstance(node, App):
            yield from iter_constants(node.head)
            for a in node.args:
                yield from iter_constants(a)
        elif isinstance(node, Lam):
            if node.ann is not None:
                yield from iter_constants(node.ann)
            yield from iter_constants(node.body)
        else:
            yield from iter_constants(node.dom)
            yield from iter_constants(node.cod)


def iter_combs(t: Term) -> Iterator[Comb]:
    if isinstance(t, Comb):
        yield t
        node = t.node
        children = ((node.head, *node.args) if isinstance(node, App)
                    else (node.ann, node.body) if isinstance(node, Lam)
                    else (node.dom, node.cod))
        for child in children:
            if child is not None:
                yield from iter_combs(child)


class NodeCount(NamedTuple):
    constructors: int
    indirections: int


def count_nodes(t: Term) -> NodeCount:
    """Count constructor nodes (both layers) and ``Comb`` boxes of ``t``."""
    if not isinstance(t, Comb):
        return NodeCount(1, 0)
    node = t.node
    children = ((node.head, *node.args) if isinstance(node, App)
                else (node.ann, node.body) if isinstance(node, Lam)
                else (node.dom, node.cod))
    constructors, indirections = 2, 1
    for child in children:
        if child is not None:
            sub = count_nodes(child)
            constructors += sub.constructors
            indirections += sub.indirections
    return NodeCount(constructors, indirections)
