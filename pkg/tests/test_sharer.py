import pytest

from Proof_Checker.kernel.context import Symbol
from Proof_Checker.kernel.errors import Span, UnknownConstant
from Proof_Checker.kernel.rule import Head, MVar
from Proof_Checker.kernel.term import TYPE, SharingPolicy, arrow, iter_combs
from Proof_Checker.parse import parse_commands
from Proof_Checker.sharer import (
    SharedDeclaration,
    SharedDefinition,
    SharedRule,
    SymbolTable,
    share_command,
)


def _share_all(text, policy=SharingPolicy.LOCAL_SHARED):
    tbl = SymbolTable()
    return tbl, [share_command(tbl, cmd, policy) for cmd in parse_commands(text)]


def test_occurrences_share_one_symbol():
    tbl, (a, ident) = _share_all("A : Type.\nid : A -> A.")
    assert isinstance(ident, SharedDeclaration)
    dom, cod = ident.type.node.dom, ident.type.node.cod
    assert dom.c is cod.c
    assert dom.c is a.symbol
    assert tbl.resolve("A") is a.symbol


def test_sorts_only_declaration_is_a_policy_conversion():
    tbl = SymbolTable()
    (cmd,) = parse_commands("T : Type -> Type.")
    shared = share_command(tbl, cmd, SharingPolicy.GLOBAL_SHARED)
    assert shared.type == arrow(TYPE, TYPE)
    assert shared.type.policy is SharingPolicy.GLOBAL_SHARED
    assert len(tbl) == 1


def test_unknown_constant_carries_its_span():
    tbl = SymbolTable()
    commands = parse_commands("A : Type.\nb : B.")
    share_command(tbl, next(commands))
    with pytest.raises(UnknownConstant) as info:
        share_command(tbl, next(commands))
    assert info.value.text == "B"
    assert info.value.span == Span(14, 15)
    assert "b" not in tbl


def test_intern_is_idempotent():
    tbl = SymbolTable()
    first = tbl.intern("nat")
    assert tbl.intern("nat") is first
    assert isinstance(first, Symbol)
    assert list(tbl.names()) == ["nat"]


def test_name_span_points_at_the_declaration():
    tbl, (decl,) = _share_all("  nat : Type.")
    assert decl.symbol.span == Span(2, 5)


def test_only_constants_are_shared():
    _, shared = _share_all("A : Type.\nc : A.\nf : A -> A.\ng : A -> A -> Type.\nh : g (f c) (f c).")
    t = shared[-1].type
    left, right = t.node.args
    assert left == right
    assert left is not right
    assert left.node.head.c is right.node.head.c
    assert left.node.args[0].c is right.node.args[0].c


def test_declaration_cannot_mention_itself():
    with pytest.raises(UnknownConstant):
        _share_all("loop : loop.")


def test_definition_may_mention_itself():
    tbl, (_, _, d) = _share_all("A : Type.\na : A.\ndef k : A := k.")
    assert isinstance(d, SharedDefinition)
    assert d.body.c is d.symbol
    assert "k" in tbl


def test_rule_sharing():
    text = "nat : Type.\nf : nat -> nat.\n[x : nat] f x --> f (f x)."
    _, (nat, f, rule) = _share_all(text)
    assert isinstance(rule, SharedRule)
    r = rule.rule
    assert r.ctx[0].name == "x"
    assert r.ctx[0].type.c is nat.symbol
    assert r.lhs == Head(f.symbol, (MVar(0),))
    assert r.head is f.symbol
    assert rule.index == 3


@pytest.mark.parametrize("policy", list(SharingPolicy))
def test_output_policy(policy):
    _, shared = _share_all("A : Type.\nB : A -> A -> Type.\n[x : A, y : A] B x y --> A -> A.", policy)
    terms = [shared[1].type, shared[2].rule.rhs]
    for t in terms:
        assert all(c.policy is policy for c in iter_combs(t))
