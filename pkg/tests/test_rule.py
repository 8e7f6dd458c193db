import pytest

from Proof_Checker.kernel.errors import (
    HeadlessLhs,
    NonLinearPattern,
    PatternIndexError,
    PatternShapeError,
    UnboundRhsVariable,
)
from Proof_Checker.kernel.rule import (
    Head,
    MVar,
    Rule,
    make_context,
    map_rule_constants,
    pattern_mvars,
    pattern_to_term,
    term_to_pattern,
    validate_rule,
)
from Proof_Checker.kernel.term import TYPE, Const, Var, app, lam

A = Const("A")


def test_left_linear_rule_is_valid():
    ctx = make_context([("x", A)])
    rule = Rule(ctx, Head("f", (MVar(0),)), Var(0))
    assert validate_rule(rule) is None
    assert rule.head == "f"
    assert rule.arity == 1


def test_repeated_pattern_variable_rejected():
    ctx = make_context([("x", A)])
    rule = Rule(ctx, Head("f", (MVar(0), MVar(0))), Var(0))
    with pytest.raises(NonLinearPattern) as info:
        validate_rule(rule)
    assert info.value.variable == "x"


def test_rhs_variable_missing_from_lhs_rejected():
    ctx = make_context([("x", A), ("y", A)])
    # y is Var(0) on the right and level 1 in patterns
    rule = Rule(ctx, Head("f", (MVar(0),)), Var(0))
    with pytest.raises(UnboundRhsVariable) as info:
        validate_rule(rule)
    assert info.value.variable == "y"


def test_rhs_variable_outside_context_rejected():
    rule = Rule((), Head("f"), Var(0))
    with pytest.raises(UnboundRhsVariable):
        validate_rule(rule)


def test_bare_variable_lhs_rejected():
    ctx = make_context([("x", A)])
    rule = Rule(ctx, MVar(0), Var(0))
    with pytest.raises(HeadlessLhs):
        validate_rule(rule)
    with pytest.raises(HeadlessLhs):
        rule.head


def test_pattern_variable_outside_context_rejected():
    rule = Rule(make_context([("x", A)]), Head("f", (MVar(1),)), TYPE)
    with pytest.raises(PatternIndexError):
        validate_rule(rule)


def test_pattern_levels_map_to_indices():
    p = Head("f", (MVar(0), Head("g", (MVar(1),))))
    t = pattern_to_term(p, 2)
    assert t == app(Const("f"), [Var(1), app(Const("g"), [Var(0)])])
    assert term_to_pattern(t, 2) == p
    assert list(pattern_mvars(p)) == [0, 1]


def test_term_to_pattern_rejects_non_patterns():
    with pytest.raises(PatternShapeError):
        term_to_pattern(lam(TYPE, Var(0)), 0)
    with pytest.raises(PatternShapeError):
        term_to_pattern(app(Var(0), [Const("a")]), 1)
    with pytest.raises(PatternShapeError):
        term_to_pattern(Var(2), 1)


def test_map_rule_constants_covers_every_part():
    ctx = make_context([("x", Const("a"))])
    rule = Rule(ctx, Head("f", (MVar(0),)), app(Const("g"), [Var(0)]))
    out = map_rule_constants(rule, str.upper)
    assert out.ctx[0].type == Const("A")
    assert out.lhs == Head("F", (MVar(0),))
    assert out.rhs == app(Const("G"), [Var(0)])
