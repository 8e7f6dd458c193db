"""
Shared theory texts and term generators for the test suite.
"""
import random
from typing import Sequence

from Proof_Checker.kernel.term import TYPE, Const, SharingPolicy, Term, Var, app, lam, pi
from Proof_Checker.pipeline import CheckConfig, TheoryRunner

EXAMPLE_ONE = """\
prop : Type.
impl : prop -> prop -> prop.
prf : prop -> Type.
[x : prop, y : prop] prf (impl x y) --> prf x -> prf y.
imprefl : x : prop -> prf (impl x x).
[] imprefl --> x : prop => p : prf x => p.
"""


def example_one_lines() -> list[str]:
    return EXAMPLE_ONE.splitlines()


def with_line(text: str, number: int, replacement: str) -> str:
    """Replace the 1-based line ``number`` of ``text``."""
    lines = text.splitlines()
    lines[number - 1] = replacement
    return "\n".join(lines) + "\n"


def load(text: str, **config) -> TheoryRunner:
    """Check ``text`` sequentially and return the runner holding the final context."""
    runner = TheoryRunner(CheckConfig(**config))
    verdict = runner.run([("<test>", text.encode("utf-8"))])
    assert verdict.ok, verdict.failure.diagnostic
    return runner


def random_term(rng: random.Random, depth: int, binders: int = 0,
                constants: Sequence[str] = ("a", "b", "c"),
                policy: SharingPolicy = SharingPolicy.UNSHARED) -> Term:
    """Random, not necessarily well-typed, term of at most ``depth`` levels."""
    leaves = ["type", "const"] + (["var"] if binders else [])
    if depth <= 1:
        kind = rng.choice(leaves)
    else:
        kind = rng.choice(leaves + ["app", "lam", "lam-bare", "pi"])
    if kind == "type":
        return TYPE
    if kind == "const":
        return Const(rng.choice(constants))
    if kind == "var":
        return Var(rng.randrange(binders))
    sub = lambda b: random_term(rng, depth - 1, b, constants, policy)
    if kind == "app":
        head = rng.choice([Const(rng.choice(constants))] + ([Var(0)] if binders else []))
        return app(head, [sub(binders) for _ in range(rng.randint(1, 3))], policy)
    if kind == "lam":
        return lam(sub(binders), sub(binders + 1), "x", policy)
    if kind == "lam-bare":
        return lam(None, sub(binders + 1), "y", policy)
    return pi(sub(binders), sub(binders + 1), "z", policy)
