"""
Seeded generator of synthetic theories.

- ``peano-heavy``: Peano arithmetic with ``add``/``mul``/``fib`` rules, then
  ``n`` theorems whose checking normalizes ``fib`` applications (few, heavy
  commands).
- ``wide``: ``n`` light declarations and identity rules over many sorts (many,
  cheap commands).
- ``planted``: a ``peano-heavy`` theory in which the command at
  ``planted_at`` is replaced by an ill-typed one.
"""
from __future__ import annotations

import logging
import random
from pathlib import Path
from typing import Iterable, Union

from .models import CorpusSpec

logger = logging.getLogger(__name__)

PEANO_SIGNATURE = """\
(; Peano arithmetic ;)
nat : Type.
0 : nat.
succ : nat -> nat.
add : nat -> nat -> nat.
[n : nat] add 0 n --> n.
[m : nat, n : nat] add (succ m) n --> succ (add m n).
mul : nat -> nat -> nat.
[n : nat] mul 0 n --> 0.
[m : nat, n : nat] mul (succ m) n --> add n (mul m n).
fib : nat -> nat.
[] fib 0 --> 0.
[] fib (succ 0) --> succ 0.
[n : nat] fib (succ (succ n)) --> add (fib (succ n)) (fib n).
eq : nat -> nat -> Type.
refl : n : nat -> eq n n.
"""

# commands in PEANO_SIGNATURE
BASE_COMMANDS = 15


def numeral(k: int) -> str:
    """Unary numeral ``succ (... (succ 0))``."""
    text = "0"
    for _ in range(k):
        text = f"succ ({text})" if text != "0" else "succ 0"
    return text


def _theorem(i: int, rng: random.Random, spec: CorpusSpec) -> str:
    if rng.random() < 0.8:
        k = rng.randint(spec.fib_min, spec.fib_max)
        fk = f"fib ({numeral(k)})"
        rhs = f"add (fib ({numeral(k - 1)})) (fib ({numeral(k - 2)}))"
        return f"def thm_{i} : eq ({fk}) ({rhs}) := refl ({fk})."
    a, b = rng.randint(0, 6), rng.randint(0, 6)
    product = f"mul ({numeral(a)}) ({numeral(b)})"
    return f"def thm_{i} : eq ({product}) ({numeral(a * b)}) := refl ({product})."


def _bad_theorem(i: int, rng: random.Random, spec: CorpusSpec) -> str:
    k = rng.randint(spec.fib_min, spec.fib_max)
    fk = f"fib ({numeral(k)})"
    variant = rng.choice(("equation", "statement", "unknown"))
    if variant == "equation":
        # fib k against succ (fib k): rejected by the deferred check
        return f"def thm_{i} : eq ({fk}) (succ ({fk})) := refl ({fk})."
    if variant == "statement":
        return f"def thm_{i} : eq ({fk}) fib := refl ({fk})."
    return f"def thm_{i} : eq ({fk}) ({fk}) := refl (fob ({numeral(k)}))."


def _peano(spec: CorpusSpec, rng: random.Random) -> list[str]:
    lines = [PEANO_SIGNATURE.rstrip("\n")]
    planted = None
    if spec.family == "planted":
        planted = spec.planted_at if spec.planted_at is not None else BASE_COMMANDS + spec.n // 2 + 1
        if not BASE_COMMANDS < planted <= BASE_COMMANDS + spec.n:
            raise ValueError(
                f"planted_at must lie in ({BASE_COMMANDS}, {BASE_COMMANDS + spec.n}], got {planted}"
            )
    for i in range(1, spec.n + 1):
        if BASE_COMMANDS + i == planted:
            lines.append(_bad_theorem(i, rng, spec))
        else:
            lines.append(_theorem(i, rng, spec))
    return lines


def _wide(spec: CorpusSpec, rng: random.Random) -> list[str]:
    lines = ["(; wide theory ;)"]
    sorts: list[str] = []
    count = 0
    while count < spec.n:
        i = count + 1
        roll = rng.random()
        if not sorts or roll < 0.15:
            name = f"s_{i}"
            lines.append(f"{name} : Type.")
            sorts.append(name)
            count += 1
        elif roll < 0.5:
            lines.append(f"c_{i} : {rng.choice(sorts)}.")
            count += 1
        elif roll < 0.8 or count + 2 > spec.n:
            lines.append(f"f_{i} : {rng.choice(sorts)} -> {rng.choice(sorts)}.")
            count += 1
        else:
            s = rng.choice(sorts)
            lines.append(f"g_{i} : {s} -> {s}.")
            lines.append(f"[x : {s}] g_{i} x --> x.")
            count += 2
    return lines


def generate_theory(spec: CorpusSpec) -> str:
    """Theory text for ``spec``; equal specs give equal text."""
    rng = random.Random(f"{spec.family}:{spec.seed}")
    lines = _wide(spec, rng) if spec.family == "wide" else _peano(spec, rng)
    return "\n".join(lines) + "\n"


def corpus_path(out_dir: Union[str, Path], spec: CorpusSpec) -> Path:
    return Path(out_dir) / f"{spec.family}-{spec.seed}.dk"


def generate_corpus(out_dir: Union[str, Path], specs: Iterable[CorpusSpec]) -> list[Path]:
    """
    Write one theory file per spec into ``out_dir``.

    Returns:
        Written paths, in the order of ``specs``
    """
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    paths = []
    for spec in specs:
        path = corpus_path(out, spec)
        path.write_text(generate_theory(spec), encoding="utf-8")
        logger.info(f"Wrote {path} ({spec.family}, n={spec.n})")
        paths.append(path)
    return paths
