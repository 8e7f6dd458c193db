from .bench import bench
from .corpus import generate_corpus, generate_theory
from .models import BenchRow, CheckConfig, CommandOutcome, CorpusSpec, StageTimings, Verdict
from .runner import (
    TheoryRunner,
    check_text,
    run,
    run_parallel_check,
    run_parallel_parse,
    run_sequential,
)

__all__ = [
    "bench",
    "generate_corpus",
    "generate_theory",
    "BenchRow",
    "CheckConfig",
    "CommandOutcome",
    "CorpusSpec",
    "StageTimings",
    "Verdict",
    "TheoryRunner",
    "check_text",
    "run",
    "run_parallel_check",
    "run_parallel_parse",
    "run_sequential",
]
