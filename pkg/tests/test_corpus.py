import pytest
from pydantic import ValidationError

from Proof_Checker.parse import Declaration, Definition, RuleCommand, parse_commands
from Proof_Checker.pipeline import CheckConfig, CorpusSpec, check_text, generate_corpus, generate_theory
from Proof_Checker.pipeline.corpus import BASE_COMMANDS, PEANO_SIGNATURE, numeral


def _commands(spec):
    return list(parse_commands(generate_theory(spec)))


def test_signature_command_count():
    assert len(list(parse_commands(PEANO_SIGNATURE))) == BASE_COMMANDS


def test_numerals():
    assert numeral(0) == "0"
    assert numeral(1) == "succ 0"
    assert numeral(3) == "succ (succ (succ 0))"


@pytest.mark.parametrize("family", ["peano-heavy", "wide", "planted"])
def test_generation_is_deterministic(family):
    spec = CorpusSpec(family=family, n=20, seed=9, fib_min=3, fib_max=6)
    assert generate_theory(spec) == generate_theory(spec)
    assert generate_theory(spec) != generate_theory(spec.model_copy(update={"seed": 10}))


def test_empty_peano_theory_is_the_signature():
    assert len(_commands(CorpusSpec(family="peano-heavy", n=0))) == BASE_COMMANDS


def test_peano_theorems_are_definitions():
    commands = _commands(CorpusSpec(family="peano-heavy", n=8, fib_min=3, fib_max=6))
    assert len(commands) == BASE_COMMANDS + 8
    assert all(isinstance(c, Definition) for c in commands[BASE_COMMANDS:])


def test_peano_theories_check():
    spec = CorpusSpec(family="peano-heavy", n=10, seed=2, fib_min=2, fib_max=8)
    assert check_text(generate_theory(spec)).ok


def test_wide_theory_has_exactly_n_commands():
    for n in (0, 1, 2, 17, 60):
        commands = _commands(CorpusSpec(family="wide", n=n, seed=n))
        assert len(commands) == n
    kinds = {type(c) for c in _commands(CorpusSpec(family="wide", n=200, seed=1))}
    assert kinds == {Declaration, RuleCommand}


def test_wide_theories_check():
    assert check_text(generate_theory(CorpusSpec(family="wide", n=150, seed=8))).ok


def test_planted_default_position():
    spec = CorpusSpec(family="planted", n=10, seed=1, fib_min=3, fib_max=5)
    verdict = check_text(generate_theory(spec), CheckConfig(jobs=2))
    assert verdict.failed_at == BASE_COMMANDS + 6


@pytest.mark.parametrize("at", [BASE_COMMANDS, BASE_COMMANDS + 11, 1])
def test_planted_position_out_of_range(at):
    with pytest.raises(ValueError):
        generate_theory(CorpusSpec(family="planted", n=10, planted_at=at))


def test_invalid_spec_rejected():
    with pytest.raises(ValidationError):
        CorpusSpec(family="peano-heavy", fib_min=9, fib_max=4)
    with pytest.raises(ValidationError):
        CorpusSpec(family="deep")


def test_corpus_files(tmp_path):
    specs = [CorpusSpec(family="wide", n=5, seed=s) for s in (1, 2)]
    paths = generate_corpus(tmp_path / "out", specs)
    assert [p.name for p in paths] == ["wide-1.dk", "wide-2.dk"]
    assert paths[0].read_text(encoding="utf-8") == generate_theory(specs[0])
