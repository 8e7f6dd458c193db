"""
Repeated timing of the checker configurations over the same inputs.
"""
from __future__ import annotations

import logging
import statistics
from pathlib import Path
from typing import Sequence, Union

from .models import BenchRow, CheckConfig
from .runner import TheoryRunner

logger = logging.getLogger(__name__)


def configurations(base: CheckConfig, jobs: Sequence[int]) -> list[tuple[str, CheckConfig]]:
    """Labelled configurations: parse-only, no-check, sequential, parse thread, then one per job count."""
    def variant(**update) -> CheckConfig:
        return base.model_copy(update={"parse_only": False, "no_check": False, "parse_thread": False,
                                       "jobs": 1, "parallel": False, **update})

    labelled = [
        ("parse-only", variant(parse_only=True)),
        ("no-check", variant(no_check=True)),
        ("seq", variant()),
        ("parse-thread", variant(parse_thread=True)),
    ]
    labelled.extend((f"check-{n}", variant(jobs=n, parallel=True)) for n in jobs)
    return labelled


def bench(paths: Sequence[Union[str, Path]], base: CheckConfig, jobs: Sequence[int],
          runs: int = 3) -> list[BenchRow]:
    """
    Time every configuration ``runs`` times over ``paths``.

    The type-checking time of a configuration is its mean wall time minus the
    mean wall time of the no-check configuration.
    """
    sources = [(str(p), Path(p).read_bytes()) for p in paths]
    rows: list[BenchRow] = []
    baseline = None
    for label, cfg in configurations(base, jobs):
        samples = []
        ok = True
        for _ in range(runs):
            verdict = TheoryRunner(cfg).run(sources)
            samples.append(verdict.timings.total)
            ok = ok and verdict.ok
        mean = statistics.fmean(samples)
        std = statistics.stdev(samples) if len(samples) > 1 else 0.0
        if label == "no-check":
            baseline = mean
        typecheck = None
        if baseline is not None and label not in ("parse-only", "no-check"):
            typecheck = mean - baseline
        logger.info(f"{label}: {mean:.1f} ms +- {std:.1f} over {runs} runs")
        rows.append(BenchRow(configuration=label, runs=runs, mean_ms=mean, std_ms=std,
                             typecheck_ms=typecheck, ok=ok))
    return rows
