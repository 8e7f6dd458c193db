import itertools
import random

import pytest

from Proof_Checker.kernel.context import GlobalContext, Symbol
from Proof_Checker.kernel.errors import CheckCancelled, ReductionLimitExceeded
from Proof_Checker.kernel.reduce import (
    LazyTerm,
    MachineState,
    CANCEL_POLL,
    Reducer,
    StateSlot,
    convertible,
    force,
    match_rule,
    substitute,
    subst1,
    whnf,
)
from Proof_Checker.kernel.rule import Head, MVar, Rule, make_context
from Proof_Checker.kernel.term import (
    TYPE,
    Comb,
    Const,
    Pi,
    SharingPolicy,
    Var,
    app,
    arrow,
    lam,
    spine,
)
from Proof_Checker.pipeline.corpus import PEANO_SIGNATURE

from .helpers import load, random_term

ARITH = PEANO_SIGNATURE + """\
case_nat : nat -> nat -> nat.
[n : nat] case_nat 0 n --> n.
[m : nat, n : nat] case_nat (succ m) n --> succ n.
omega : nat.
[] omega --> omega.
"""


@pytest.fixture(scope="module")
def arith():
    runner = load(ARITH)
    return runner.gamma, runner.symbols


def _c(symbols, name):
    return Const(symbols.resolve(name))


def _num(symbols, k):
    t = _c(symbols, "0")
    for _ in range(k):
        t = app(_c(symbols, "succ"), [t])
    return t


def _to_int(reducer, t, symbols):
    zero, succ = _c(symbols, "0"), _c(symbols, "succ")
    n = 0
    while True:
        t = reducer.whnf_term(t)
        if t == zero:
            return n
        head, args = spine(t)
        assert head == succ
        n += 1
        t = args[0]


def test_sorts_are_normal():
    assert Reducer(GlobalContext()).whnf_term(TYPE) == TYPE


def test_beta_step():
    a = Symbol("a")
    g = GlobalContext().declare(a, TYPE)
    t = app(lam(TYPE, Var(0)), [Const(a)])
    assert Reducer(g).whnf_term(t) == Const(a)


def test_beta_leaves_outer_indices_correct():
    # (x => y => x) z, under one free variable z = Var(0)
    t = app(lam(None, lam(None, Var(1))), [Var(0)])
    out = Reducer(GlobalContext()).whnf_term(t)
    assert out == lam(None, Var(1))


def test_implication_unfolds(logic):
    prf, impl = _c(logic.symbols, "prf"), _c(logic.symbols, "impl")
    a = Var(1)
    b = Var(0)
    out = Reducer(logic.gamma).whnf_term(app(prf, [app(impl, [a, b])]))
    assert out == arrow(app(prf, [a]), app(prf, [b]))


def test_add_unfolds_one_layer(arith):
    g, s = arith
    one = _num(s, 1)
    state = whnf(g, MachineState.of(app(_c(s, "add"), [one, one])))
    assert state.term == _c(s, "succ")
    assert len(state.stack) == 1
    inner = Reducer(g).readback(state.stack[0].state)
    assert inner == app(_c(s, "add"), [_num(s, 0), one])


@pytest.mark.parametrize("k,expected", [(0, 0), (1, 1), (2, 1), (7, 13), (10, 55)])
def test_fib_values(arith, k, expected):
    g, s = arith
    r = Reducer(g)
    assert _to_int(r, app(_c(s, "fib"), [_num(s, k)]), s) == expected


def test_whnf_is_idempotent(arith):
    g, s = arith
    r = Reducer(g)
    once = r.whnf(MachineState.of(app(_c(s, "mul"), [_num(s, 2), _num(s, 3)])))
    twice = r.whnf(once)
    assert twice.term == once.term
    assert len(twice.stack) == len(once.stack)


def test_match_binds_variables_without_forcing(arith):
    g, s = arith
    add = s.resolve("add")
    rule = list(g.lookup_rules(add))[0]  # add 0 n --> n
    fib5 = app(_c(s, "fib"), [_num(s, 5)])
    slots = [StateSlot(MachineState((), _num(s, 0), [])), StateSlot(MachineState((), fib5, []))]
    machine = MachineState((), Const(add), list(reversed(slots)))
    r = Reducer(g)
    bindings = r.match_rule(rule, machine)
    assert bindings == {0: slots[1]}
    assert slots[1].state.term == fib5
    assert r.rule_applications == 0


def test_match_forces_head_patterns_and_writes_back(arith):
    g, s = arith
    add = s.resolve("add")
    rule = list(g.lookup_rules(add))[0]  # add 0 n --> n
    fib5 = app(_c(s, "fib"), [_num(s, 5)])
    slots = [StateSlot(MachineState((), fib5, [])), StateSlot(MachineState((), fib5, []))]
    machine = MachineState((), Const(add), list(reversed(slots)))
    r = Reducer(g)
    assert r.match_rule(rule, machine) is None
    assert slots[0].state.term == _c(s, "succ")
    assert slots[1].state.term == fib5


def test_match_with_missing_arguments(arith):
    g, s = arith
    add = s.resolve("add")
    rule = list(g.lookup_rules(add))[0]
    assert match_rule(g, rule, MachineState.of(Const(add))) is None


def test_match_implication_rule(logic):
    g, s = logic.gamma, logic.symbols
    prf, impl = s.resolve("prf"), s.resolve("impl")
    rule = list(g.lookup_rules(prf))[0]
    a, b = Var(5), Var(6)
    machine = Reducer(g).whnf(MachineState.of(app(Const(impl), [a, b])))
    outer = MachineState((), Const(prf), [StateSlot(machine)])
    bindings = match_rule(g, rule, outer)
    r = Reducer(g)
    assert {level: r.readback(slot.state) for level, slot in bindings.items()} == {0: a, 1: b}


def test_forcing_twice_returns_the_same_object(arith):
    g, s = arith
    r = Reducer(g)
    lt = LazyTerm(StateSlot(MachineState.of(app(_c(s, "fib"), [_num(s, 4)]))), r)
    assert not lt.forced
    first = force(lt)
    assert force(lt) is first
    assert lt.forced


def test_forcing_a_normal_state_returns_its_readback():
    a = Symbol("a")
    g = GlobalContext().declare(a, TYPE)
    lt = LazyTerm(StateSlot(MachineState.of(Const(a))), Reducer(g))
    assert lt.force() == Const(a)


def test_shared_thunk_is_evaluated_once(arith):
    """Two machine copies holding one thunk pay for its evaluation once."""
    g, s = arith
    r = Reducer(g)
    lt = LazyTerm(StateSlot(MachineState.of(app(_c(s, "fib"), [_num(s, 6)]))), r)
    first = MachineState((lt,), Var(0), [])
    second = first.copy()
    r.whnf(first)
    after_first = r.rule_applications
    assert after_first > 0
    r.whnf(second)
    assert r.rule_applications == after_first


def test_slot_write_back_saves_rule_applications(arith):
    g, s = arith
    t = app(_c(s, "case_nat"), [app(_c(s, "fib"), [_num(s, 8)]), _num(s, 0)])
    memo, plain = Reducer(g), Reducer(g, memoize=False)
    assert memo.whnf_term(t) == plain.whnf_term(t)
    assert memo.rule_applications < plain.rule_applications


def test_step_limit_stops_divergence(arith):
    g, s = arith
    with pytest.raises(ReductionLimitExceeded) as info:
        Reducer(g, step_limit=500).whnf_term(_c(s, "omega"))
    assert info.value.limit == 500


def test_step_limit_counts_over_the_reducers_lifetime(arith):
    g, s = arith
    t = app(_c(s, "fib"), [_num(s, 5)])
    alone = Reducer(g)
    alone.whnf_term(t)
    cost = alone.steps
    r = Reducer(g, step_limit=cost + cost // 2)
    r.whnf_term(t)
    with pytest.raises(ReductionLimitExceeded):
        r.whnf_term(app(_c(s, "fib"), [_num(s, 5)]))


def test_cancellation_stops_divergence(arith):
    g, s = arith
    polls = []

    def cancelled():
        polls.append(None)
        return len(polls) == 3

    r = Reducer(g, cancelled=cancelled)
    with pytest.raises(CheckCancelled):
        r.whnf_term(_c(s, "omega"))
    assert r.steps == 3 * CANCEL_POLL


def test_cancellation_is_not_polled_by_short_reductions(arith):
    g, s = arith
    r = Reducer(g, cancelled=lambda: True)
    assert r.whnf_term(app(_c(s, "succ"), [_num(s, 2)])) == app(_c(s, "succ"), [_num(s, 2)])
    assert r.steps < CANCEL_POLL


def test_substitute_variable():
    c = Const("c")
    assert substitute(Var(0), (c,), 0) == c


def test_substitute_lowers_indices_above_window():
    t = app(Const("f"), [Var(0), Var(1), Var(2)])
    out = substitute(t, (Const("c"),))
    assert out == app(Const("f"), [Const("c"), Var(0), Var(1)])


def test_substitute_lifts_past_binders():
    t = lam(TYPE, Var(1))
    assert subst1(t, Var(3)) == lam(TYPE, Var(4))


def test_substitute_instantiates_implication_rhs(logic):
    s = logic.symbols
    rule = list(logic.gamma.lookup_rules(s.resolve("prf")))[0]
    a, b = _c(s, "prop"), _c(s, "impl")
    # sigma[0] is the innermost context entry, y
    out = substitute(rule.rhs, (b, a))
    prf = _c(s, "prf")
    assert out == arrow(app(prf, [a]), app(prf, [b]))


@pytest.mark.parametrize("policy", [SharingPolicy.LOCAL_SHARED, SharingPolicy.GLOBAL_SHARED])
def test_identity_substitution_preserves_identity(policy):
    rng = random.Random(11)
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 6), binders=2, policy=policy)
        assert substitute(t, (Var(0), Var(1)), 0) is t
        assert substitute(t, ()) is t
        assert substitute(arrow(TYPE, t).node.cod, (TYPE,)) == t


def test_closed_terms_survive_substitution_unchanged():
    rng = random.Random(5)
    for _ in range(200):
        t = random_term(rng, rng.randint(1, 6), policy=SharingPolicy.LOCAL_SHARED)
        assert substitute(t, (Const("z"),)) is t


def test_convertible_is_reflexive():
    rng = random.Random(2)
    a = Symbol("a")
    g = GlobalContext().declare(a, TYPE)
    for policy in SharingPolicy:
        for _ in range(50):
            t = random_term(rng, 4, binders=1, policy=policy, constants=(a,))
            t = lam(TYPE, t)
            assert Reducer(g).convertible(t, t)


def test_unfolded_implication_is_convertible(logic):
    s = logic.symbols
    prf, impl = _c(s, "prf"), _c(s, "impl")
    x = Var(0)
    lhs = app(prf, [app(impl, [x, x])])
    rhs = arrow(app(prf, [x]), app(prf, [x]))
    assert convertible(logic.gamma, lhs, rhs)
    assert not convertible(logic.gamma, lhs, app(prf, [x]))


def test_eta_is_a_flag():
    prop, f = Symbol("prop"), Symbol("f")
    g = GlobalContext().declare(prop, TYPE).declare(f, arrow(Const(prop), Const(prop)))
    expanded = lam(Const(prop), app(Const(f), [Var(0)]))
    assert not convertible(g, expanded, Const(f))
    assert convertible(g, expanded, Const(f), eta=True)
    assert convertible(g, Const(f), expanded, eta=True)


# --- agreement with an independent rewriter --------------------------------

_RULES = ("0", "succ", "add", "mul")


def _reference_normal_form(t):
    """Innermost normalization of tuple-encoded Peano terms."""
    if t[0] == "0":
        return t
    args = tuple(_reference_normal_form(a) for a in t[1:])
    return _contract((t[0],) + args)


def _contract(t):
    op = t[0]
    if op == "add":
        m, n = t[1], t[2]
        if m == ("0",):
            return n
        return ("succ", _contract(("add", m[1], n)))
    if op == "mul":
        m, n = t[1], t[2]
        if m == ("0",):
            return ("0",)
        return _contract(("add", n, _contract(("mul", m[1], n))))
    return t


def _all_terms(depth):
    if depth == 1:
        return [("0",)]
    smaller = _all_terms(depth - 1)
    out = [("0",)]
    out += [("succ", a) for a in smaller]
    out += [(op, a, b) for op in ("add", "mul") for a in smaller for b in smaller]
    return out


def _sample_term(rng, depth):
    if depth == 1 or rng.random() < 0.2:
        return ("0",)
    op = rng.choice(("succ", "add", "mul"))
    if op == "succ":
        return ("succ", _sample_term(rng, depth - 1))
    return (op, _sample_term(rng, depth - 1), _sample_term(rng, depth - 1))


def _to_kernel(t, symbols):
    if t[0] == "0":
        return _c(symbols, "0")
    return app(_c(symbols, t[0]), [_to_kernel(a, symbols) for a in t[1:]])


def test_convertibility_agrees_with_reference_rewriter(arith):
    """Every pair of small Peano terms, plus seeded deeper samples."""
    g, s = arith
    terms = _all_terms(3)
    pairs = list(itertools.product(terms, terms))
    rng = random.Random(42)
    pairs += [(_sample_term(rng, 4), _sample_term(rng, 4)) for _ in range(300)]
    assert len(pairs) >= 1000
    agreed = 0
    for left, right in pairs:
        expected = _reference_normal_form(left) == _reference_normal_form(right)
        actual = Reducer(g).convertible(_to_kernel(left, s), _to_kernel(right, s))
        assert actual == expected, (left, right)
        agreed += 1
    assert agreed == len(pairs)


def test_unshared_terms_are_compared_structurally(arith):
    g, s = arith
    t = app(_c(s, "add"), [_num(s, 2), _num(s, 2)], SharingPolicy.UNSHARED)
    assert isinstance(t, Comb)
    assert Reducer(g, policy=SharingPolicy.UNSHARED).convertible(t, t)
    assert Reducer(g).convertible(t, _num(s, 4))


def test_shared_argument_is_evaluated_once(arith):
    """case_nat tries two rules on the same fib 5 argument; only the first evaluates it."""
    g, s = arith
    fib5 = app(_c(s, "fib"), [_num(s, 5)])
    alone, alone_plain = Reducer(g), Reducer(g, memoize=False)
    alone.whnf(MachineState.of(fib5))
    alone_plain.whnf(MachineState.of(fib5))
    cost, plain_cost = alone.rule_applications, alone_plain.rule_applications
    assert cost > 0

    t = app(_c(s, "case_nat"), [fib5, _num(s, 0)])
    memo, plain = Reducer(g), Reducer(g, memoize=False)
    memo.whnf(MachineState.of(t))
    plain.whnf(MachineState.of(t))
    assert memo.rule_applications == cost + 1
    assert plain.rule_applications == 2 * plain_cost + 1
