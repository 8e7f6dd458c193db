"""
Bidirectional type inference and checking for the lambda-Pi calculus modulo
rewriting, plus the per-command checks of a theory.

Rule right-hand sides are not checked when the rule is added: ``check_rule``
returns a ``CheckTask`` that the caller runs immediately or hands to a worker.
"""
from __future__ import annotations

import enum
from dataclasses import dataclass
from typing import Callable, Optional

from .context import GlobalContext, Symbol
from .errors import KernelError, Span
from .pretty import render
from .reduce import Reducer, subst1
from .rule import Binding, LocalContext, Rule, pattern_to_term, validate_rule
from .term import (
    KIND,
    TYPE,
    App,
    Comb,
    Const,
    Lam,
    Pi,
    SharingPolicy,
    SortTerm,
    Term,
    Var,
    shift,
)


class TypeErrorKind(str, enum.Enum):
    MISMATCH = "mismatch"
    NOT_A_FUNCTION = "not-a-function"
    UNSORTED_BINDER = "unsorted-binder"
    UNBOUND = "unbound"
    KIND_MISUSE = "kind-misuse"
    UNANNOTATED = "unannotated"


@dataclass(frozen=True, slots=True)
class Origin:
    """Where a check comes from: 1-based command index and its source span."""
    command_index: int
    span: Optional[Span] = None


class TypeCheckError(KernelError):
    def __init__(
        self,
        kind: TypeErrorKind,
        message: str,
        actual: Optional[Term] = None,
        expected: Optional[Term] = None,
        origin: Optional[Origin] = None,
    ):
        super().__init__(f"{kind.value}: {message}", origin.span if origin else None)
        self.kind = kind
        self.actual = actual
        self.expected = expected
        self.origin = origin

    def with_origin(self, origin: Origin) -> "TypeCheckError":
        if self.origin is None:
            self.origin = origin
            self.span = origin.span
        return self


@dataclass(frozen=True, slots=True)
class KernelOptions:
    eta: bool = False
    step_limit: Optional[int] = None
    policy: SharingPolicy = SharingPolicy.LOCAL_SHARED


@dataclass(frozen=True, slots=True)
class CheckTask:
    """Deferred judgement ``gamma, delta |- subject : expected``."""
    gamma: GlobalContext
    delta: LocalContext
    subject: Term
    expected: Term
    origin: Origin
    options: KernelOptions = KernelOptions()


Cancelled = Callable[[], bool]


def _names(delta: LocalContext) -> list[str]:
    return [b.name for b in delta]


class TypeChecker:
    """Kernel instance bound to one global context and one sharing policy."""

    def __init__(self, gamma: GlobalContext, options: KernelOptions = KernelOptions(),
                 cancelled: Optional[Cancelled] = None):
        self.gamma = gamma
        self.options = options
        self.reducer = Reducer(gamma, eta=options.eta, step_limit=options.step_limit,
                               policy=options.policy, cancelled=cancelled)
        self._constant_names: Optional[frozenset[str]] = None

    def whnf(self, t: Term) -> Term:
        return self.reducer.whnf_term(t)

    def convertible(self, t: Term, u: Term) -> bool:
        return self.reducer.convertible(t, u)

    def _show(self, t: Term, delta: LocalContext) -> str:
        """Render ``t`` for a diagnostic; binders never take a declared constant's name."""
        if self._constant_names is None:
            self._constant_names = frozenset(str(c) for c in self.gamma.symbols())
        return render(t, _names(delta), self._constant_names)

    def _sort_of(self, delta: LocalContext, t: Term) -> Optional[SortTerm]:
        s = self.whnf(self.infer(delta, t))
        return s if isinstance(s, SortTerm) else None

    def _expect_type(self, delta: LocalContext, t: Term, what: str) -> None:
        s = self.whnf(self.infer(delta, t))
        if s != TYPE:
            raise TypeCheckError(
                TypeErrorKind.UNSORTED_BINDER,
                f"{what} {self._show(t, delta)} has type {self._show(s, delta)}, not Type",
                actual=s, expected=TYPE,
            )

    def infer(self, delta: LocalContext, t: Term) -> Term:
        """Return the type of ``t`` under ``delta``."""
        if isinstance(t, SortTerm):
            if t == KIND:
                raise TypeCheckError(TypeErrorKind.KIND_MISUSE, "Kind has no type")
            return KIND
        if isinstance(t, Const):
            return self.gamma.lookup_type(t.c)
        if isinstance(t, Var):
            if t.index >= len(delta):
                raise TypeCheckError(TypeErrorKind.UNBOUND, f"unbound variable #{t.index}")
            return shift(delta[-1 - t.index].type, t.index + 1)
        node = t.node
        if isinstance(node, App):
            ty = self.infer(delta, node.head)
            for arg in node.args:
                product = self.whnf(ty)
                if not (isinstance(product, Comb) and isinstance(product.node, Pi)):
                    raise TypeCheckError(
                        TypeErrorKind.NOT_A_FUNCTION,
                        f"{self._show(node.head, delta)} is applied to too many arguments "
                        f"(type {self._show(product, delta)})",
                        actual=product,
                    )
                self.check(delta, arg, product.node.dom)
                ty = subst1(product.node.cod, arg)
            return ty
        if isinstance(node, Lam):
            if node.ann is None:
                raise TypeCheckError(
                    TypeErrorKind.UNANNOTATED,
                    f"cannot infer the type of unannotated abstraction over {node.name}",
                )
            self._expect_type(delta, node.ann, "domain")
            inner = delta + (Binding(node.name, node.ann),)
            body_ty = self.infer(inner, node.body)
            if self.whnf(body_ty) == KIND:
                raise TypeCheckError(TypeErrorKind.KIND_MISUSE, "abstraction body is a kind")
            return Comb(Pi(node.ann, body_ty, node.name), self.options.policy)
        assert isinstance(node, Pi)
        self._expect_type(delta, node.dom, "domain")
        inner = delta + (Binding(node.name, node.dom),)
        s = self._sort_of(inner, node.cod)
        if s is None:
            raise TypeCheckError(
                TypeErrorKind.UNSORTED_BINDER,
                f"codomain {self._show(node.cod, inner)} is not a type",
                actual=node.cod,
            )
        return s

    def check(self, delta: LocalContext, t: Term, a: Term) -> None:
        """
        Verify ``delta |- t : a``.

        Raises:
            TypeCheckError: Carrying the inferred and expected types in weak-head normal form
        """
        if isinstance(t, Comb) and isinstance(t.node, Lam):
            node = t.node
            product = self.whnf(a)
            if not (isinstance(product, Comb) and isinstance(product.node, Pi)):
                raise TypeCheckError(
                    TypeErrorKind.MISMATCH,
                    f"abstraction checked against non-product {self._show(product, delta)}",
                    expected=product,
                )
            dom = product.node.dom
            if node.ann is not None:
                self._expect_type(delta, node.ann, "domain")
                if not self.convertible(node.ann, dom):
                    raise TypeCheckError(
                        TypeErrorKind.MISMATCH,
                        f"domain {self._show(node.ann, delta)} does not match "
                        f"{self._show(dom, delta)}",
                        actual=node.ann, expected=dom,
                    )
            self.check(delta + (Binding(node.name, dom),), node.body, product.node.cod)
            return
        actual = self.infer(delta, t)
        if not self.convertible(actual, a):
            actual_n, expected_n = self.whnf(actual), self.whnf(a)
            raise TypeCheckError(
                TypeErrorKind.MISMATCH,
                f"{self._show(t, delta)} has type {self._show(actual_n, delta)} "
                f"but {self._show(expected_n, delta)} was expected",
                actual=actual_n, expected=expected_n,
            )


# --- theory-level checks -----------------------------------------------------

def infer(g: GlobalContext, d: LocalContext, t: Term, options: KernelOptions = KernelOptions()) -> Term:
    return TypeChecker(g, options).infer(d, t)


def check(g: GlobalContext, d: LocalContext, t: Term, a: Term,
          options: KernelOptions = KernelOptions()) -> None:
    TypeChecker(g, options).check(d, t, a)


def check_declaration(g: GlobalContext, c: Symbol, a: Term,
                      options: KernelOptions = KernelOptions(),
                      cancelled: Optional[Cancelled] = None) -> GlobalContext:
    """
    Check that ``a`` is a type or a kind, then declare ``c : a``.

    Raises:
        Redeclaration: If ``c`` is already declared
        TypeCheckError: If ``a`` is not sorted
    """
    if c in g:
        return g.declare(c, a)
    checker = TypeChecker(g, options, cancelled)
    if checker._sort_of((), a) is None:
        raise TypeCheckError(
            TypeErrorKind.UNSORTED_BINDER,
            f"type of {c} is neither a type nor a kind",
            actual=a,
        )
    return g.declare(c, a)


def check_rule(g: GlobalContext, r: Rule, origin: Origin,
               options: KernelOptions = KernelOptions(),
               cancelled: Optional[Cancelled] = None) -> tuple[GlobalContext, CheckTask]:
    """
    Validate ``r``, check its context, infer the type of its left-hand side and
    add it to ``g``.

    Returns:
        The extended context and the task that checks the right-hand side
        against the inferred type in the context the rule was added to
    """
    validate_rule(r)
    checker = TypeChecker(g, options, cancelled)
    for i, binding in enumerate(r.ctx):
        prefix = r.ctx[:i]
        if checker._sort_of(prefix, binding.type) is None:
            raise TypeCheckError(
                TypeErrorKind.UNSORTED_BINDER,
                f"type of rule variable {binding.name} is not sorted",
                actual=binding.type,
            ).with_origin(origin)
    try:
        lhs_type = checker.infer(r.ctx, pattern_to_term(r.lhs, len(r.ctx), options.policy))
    except TypeCheckError as err:
        raise err.with_origin(origin)
    task = CheckTask(g.snapshot(), r.ctx, r.rhs, lhs_type, origin, options)
    return g.add_rule(r), task


def run_task(task: CheckTask, cancelled: Optional[Cancelled] = None) -> None:
    """
    Execute a deferred check.

    Raises:
        TypeCheckError: Tagged with the task's origin
        CheckCancelled: Once ``cancelled`` reports that the check is no longer needed
    """
    try:
        TypeChecker(task.gamma, task.options, cancelled).check(task.delta, task.subject, task.expected)
    except TypeCheckError as err:
        raise err.with_origin(task.origin)
