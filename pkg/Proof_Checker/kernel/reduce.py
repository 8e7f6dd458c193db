"""
Weak-head reduction with a lazy abstract machine.

A ``MachineState`` ``(ctx, term, stack)`` stands for ``(term ctx) a1 ... an``
where ``ctx`` substitutes the innermost de Bruijn indices of ``term`` and the
``ai`` are the states held by the stack slots (``a1`` on top). Slots are
mutable cells: when matching evaluates an argument, the evaluated state is
written back into the slot, so every machine holding the same slot sees the
work. Context entries are ``LazyTerm`` thunks over slots and are evaluated at
most once.

Machines, slots and thunks are confined to the thread that created them.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Optional, Sequence, Union

from .context import GlobalContext
from .errors import CheckCancelled, ReductionLimitExceeded
from .rule import Head, MVar, Pattern, Rule
from .term import (
    App,
    Comb,
    Const,
    Lam,
    Pi,
    SharingPolicy,
    SortTerm,
    Term,
    Var,
    app,
    shift,
)


@dataclass(slots=True)
class MachineState:
    ctx: tuple["LazyTerm", ...]
    term: Term
    stack: list["StateSlot"] = field(default_factory=list)

    @classmethod
    def of(cls, t: Term) -> "MachineState":
        return cls((), t, [])

    def copy(self) -> "MachineState":
        """Shallow copy: a fresh stack list aliasing the same slots."""
        return MachineState(self.ctx, self.term, list(self.stack))


class StateSlot:
    """Shared mutable cell holding a machine state."""

    __slots__ = ("state",)

    def __init__(self, state: MachineState):
        self.state = state


class LazyTerm:
    """One-shot, memoized evaluation of a slot to the term its WHNF denotes."""

    __slots__ = ("slot", "reducer", "_value")

    def __init__(self, slot: StateSlot, reducer: "Reducer"):
        self.slot = slot
        self.reducer = reducer
        self._value: Optional[Term] = None

    @property
    def forced(self) -> bool:
        return self._value is not None

    def force(self) -> Term:
        if self._value is None:
            reducer = self.reducer
            state = reducer.whnf(self.slot.state)
            if reducer.memoize:
                self.slot.state = state
            self._value = reducer.readback(state)
        return self._value

    def current(self) -> Term:
        """The denoted term as evaluated so far, without evaluating further."""
        if self._value is not None:
            return self._value
        return self.reducer.readback(self.slot.state)


class _Unbound(LazyTerm):
    """Placeholder for context entries that neither side of a rule mentions."""

    def __init__(self) -> None:
        pass

    def force(self) -> Term:
        raise AssertionError("forced a rule variable that the rule does not bind")

    current = force


_UNBOUND = _Unbound.__new__(_Unbound)

Bindings = dict[int, StateSlot]
Substitution = Sequence[Union[Term, LazyTerm]]


def substitute(t: Term, sigma: Substitution, depth: int = 0) -> Term:
    """
    Replace the free indices ``depth .. depth+len(sigma)-1`` of ``t`` by ``sigma``.

    ``sigma[0]`` replaces the innermost index. Replacements are lifted past the
    ``depth`` binders they are moved under, and indices above the window drop
    by ``len(sigma)``. Subterms that come out unchanged are returned as the
    very same objects.
    """
    n = len(sigma)
    if n == 0:
        return t
    return _subst(t, sigma, n, depth)


def _subst(t: Term, sigma: Substitution, n: int, depth: int) -> Term:
    if isinstance(t, Var):
        i = t.index
        if i < depth:
            return t
        if i - depth < n:
            value = sigma[i - depth]
            if isinstance(value, LazyTerm):
                value = value.current()
            out = shift(value, depth)
            return t if out == t else out
        return Var(i - n)
    if not isinstance(t, Comb):
        return t
    node = t.node
    if isinstance(node, App):
        head = _subst(node.head, sigma, n, depth)
        args = tuple(_subst(a, sigma, n, depth) for a in node.args)
        if head is node.head and all(x is y for x, y in zip(args, node.args)):
            return t
        return app(head, args, t.policy)
    if isinstance(node, Lam):
        ann = None if node.ann is None else _subst(node.ann, sigma, n, depth)
        body = _subst(node.body, sigma, n, depth + 1)
        if ann is node.ann and body is node.body:
            return t
        return Comb(Lam(ann, body, node.name), t.policy)
    dom = _subst(node.dom, sigma, n, depth)
    cod = _subst(node.cod, sigma, n, depth + 1)
    if dom is node.dom and cod is node.cod:
        return t
    return Comb(Pi(dom, cod, node.name), t.policy)


def subst1(t: Term, u: Term) -> Term:
    """Instantiate the outermost binder's body ``t`` with ``u``."""
    return substitute(t, (u,), 0)


CANCEL_POLL = 256


class Reducer:
    """
    Weak-head reduction engine bound to one global context.

    Args:
        gamma: Global context whose rules drive rewriting
        eta: Identify ``x => f x`` with ``f`` during conversion
        step_limit: Abort with ``ReductionLimitExceeded`` after this many machine steps,
            counted over the reducer's lifetime
        policy: Sharing policy of terms built during reduction
        memoize: Write evaluated argument states back into their slots
        cancelled: Polled every ``CANCEL_POLL`` steps; once it returns True the
            reduction aborts with ``CheckCancelled``
    """

    def __init__(
        self,
        gamma: GlobalContext,
        *,
        eta: bool = False,
        step_limit: Optional[int] = None,
        policy: SharingPolicy = SharingPolicy.LOCAL_SHARED,
        memoize: bool = True,
        cancelled: Optional[Callable[[], bool]] = None,
    ):
        self.gamma = gamma
        self.eta = eta
        self.step_limit = step_limit
        self.policy = policy
        self.memoize = memoize
        self.cancelled = cancelled
        self.steps = 0
        self.rule_applications = 0

    def _tick(self) -> None:
        self.steps += 1
        if self.step_limit is not None and self.steps > self.step_limit:
            raise ReductionLimitExceeded(self.step_limit)
        if self.cancelled is not None and self.steps % CANCEL_POLL == 0 and self.cancelled():
            raise CheckCancelled()

    # --- machine -----------------------------------------------------------

    def whnf(self, state: MachineState) -> MachineState:
        ctx, term, stack = state.ctx, state.term, list(state.stack)
        while True:
            self._tick()
            if isinstance(term, Var):
                if term.index < len(ctx):
                    term = ctx[term.index].force()
                    ctx = ()
                    continue
                return MachineState((), Var(term.index - len(ctx)), stack)
            if isinstance(term, Comb):
                node = term.node
                if isinstance(node, App):
                    stack.extend(StateSlot(MachineState(ctx, a, [])) for a in reversed(node.args))
                    term = node.head
                    continue
                if isinstance(node, Lam) and stack:
                    ctx = (LazyTerm(stack.pop(), self),) + ctx
                    term = node.body
                    continue
                return MachineState(ctx, term, stack)
            if isinstance(term, Const):
                current = MachineState(ctx, term, stack)
                for rule in self.gamma.lookup_rules(term.c):
                    bindings = self.match_rule(rule, current)
                    if bindings is not None:
                        break
                else:
                    return current
                if rule.arity:
                    del stack[-rule.arity:]
                k = len(rule.ctx)
                ctx = tuple(
                    LazyTerm(bindings[level], self) if level in bindings else _UNBOUND
                    for level in range(k - 1, -1, -1)
                )
                term = rule.rhs
                self.rule_applications += 1
                continue
            return MachineState(ctx, term, stack)

    def match_rule(self, r: Rule, state: MachineState) -> Optional[Bindings]:
        """
        Match the left-hand side of ``r`` against the spine of ``state``.

        Arguments are evaluated only where the pattern demands a head symbol;
        evaluated states are written back into their slots.

        Returns:
            Pattern-variable level to slot, or None when the rule does not apply
        """
        lhs = r.lhs
        if not isinstance(lhs, Head) or not isinstance(state.term, Const) or state.term.c != lhs.c:
            return None
        stack = state.stack
        if len(stack) < len(lhs.args):
            return None
        bindings: Bindings = {}
        for i, pattern in enumerate(lhs.args):
            if not self._match(pattern, stack[-1 - i], bindings):
                return None
        return bindings

    def _match(self, pattern: Pattern, slot: StateSlot, bindings: Bindings) -> bool:
        if isinstance(pattern, MVar):
            bindings[pattern.level] = slot
            return True
        evaluated = self.whnf(slot.state)
        if self.memoize:
            slot.state = evaluated
        term = evaluated.term
        if not isinstance(term, Const) or term.c != pattern.c:
            return False
        if len(evaluated.stack) != len(pattern.args):
            return False
        return all(
            self._match(sub, evaluated.stack[-1 - j], bindings)
            for j, sub in enumerate(pattern.args)
        )

    # --- terms -------------------------------------------------------------

    def readback(self, state: MachineState) -> Term:
        """The term a state stands for, arguments left unevaluated."""
        head = substitute(state.term, state.ctx, 0)
        if not state.stack:
            return head
        args = [self.readback(slot.state) for slot in reversed(state.stack)]
        return app(head, args, self.policy)

    def whnf_term(self, t: Term) -> Term:
        if isinstance(t, SortTerm):
            return t
        return self.readback(self.whnf(MachineState.of(t)))

    def convertible(self, t: Term, u: Term) -> bool:
        """
        Decide whether ``t`` and ``u`` have a common reduct, comparing weak-head
        normal forms and descending into their subterms.
        """
        pending: list[tuple[Term, Term]] = [(t, u)]
        while pending:
            a, b = pending.pop()
            if _same(a, b):
                continue
            a = self.whnf_term(a)
            b = self.whnf_term(b)
            if _same(a, b):
                continue
            if isinstance(a, Comb) and isinstance(b, Comb):
                na, nb = a.node, b.node
                if isinstance(na, App) and isinstance(nb, App):
                    if len(na.args) != len(nb.args):
                        return False
                    # heads of weak-head normal spines are atomic
                    if not _same(na.head, nb.head):
                        return False
                    pending.extend(zip(na.args, nb.args))
                    continue
                if isinstance(na, Lam) and isinstance(nb, Lam):
                    pending.append((na.body, nb.body))
                    continue
                if isinstance(na, Pi) and isinstance(nb, Pi):
                    pending.append((na.dom, nb.dom))
                    pending.append((na.cod, nb.cod))
                    continue
            if self.eta:
                if isinstance(a, Comb) and isinstance(a.node, Lam):
                    pending.append((a.node.body, self._eta_expand(b)))
                    continue
                if isinstance(b, Comb) and isinstance(b.node, Lam):
                    pending.append((self._eta_expand(a), b.node.body))
                    continue
            return False
        return True

    def _eta_expand(self, t: Term) -> Term:
        return app(shift(t, 1), [Var(0)], self.policy)


def _same(a: Term, b: Term) -> bool:
    if a is b:
        return not isinstance(a, Comb) or a.policy.identity_comparable
    if isinstance(a, Comb) or isinstance(b, Comb):
        return False
    return a == b


# --- functional entry points ----------------------------------------------

def whnf(g: GlobalContext, s: MachineState, **options) -> MachineState:
    return Reducer(g, **options).whnf(s)


def force(lt: LazyTerm) -> Term:
    return lt.force()


def match_rule(g: GlobalContext, r: Rule, s: MachineState, **options) -> Optional[Bindings]:
    return Reducer(g, **options).match_rule(r, s)


def convertible(g: GlobalContext, t: Term, u: Term, eta: bool = False, **options) -> bool:
    return Reducer(g, eta=eta, **options).convertible(t, u)
