"""
Proof Checker command-line entry point

Subcommands:
    check   Verify theory files, sequentially or with parallel checking
    gen     Write a synthetic theory
    bench   Time the checker configurations over the same inputs
"""

import logging
import sys
import threading
from typing import Optional, Tuple

import click
from pydantic import ValidationError

from Proof_Checker.config import settings
from Proof_Checker.pipeline import CheckConfig, CorpusSpec, bench as run_bench, generate_corpus, run
from Proof_Checker.utils import format_stat

logger = logging.getLogger("Proof_Checker")

EXIT_ACCEPTED = 0
EXIT_REJECTED = 1
EXIT_USAGE = 2


def configure_runtime(verbose: int = 0) -> None:
    """Set up logging, the recursion limit and the stack size of new threads"""
    level = settings.LOG_LEVEL
    if verbose == 1:
        level = "INFO"
    elif verbose > 1:
        level = "DEBUG"
    logging.basicConfig(level=level, format=settings.LOG_FORMAT, stream=sys.stderr, force=True)
    sys.setrecursionlimit(max(sys.getrecursionlimit(), settings.RECURSION_LIMIT))
    try:
        threading.stack_size(settings.thread_stack_bytes())
    except (ValueError, RuntimeError) as e:
        logger.warning(f"Could not set thread stack size: {e}")


def _usage_error(message: str) -> None:
    click.echo(f"error: {message}", err=True)
    sys.exit(EXIT_USAGE)


@click.group()
@click.option("-v", "--verbose", count=True, help="Log progress (repeat for debug output)")
def cli(verbose: int) -> None:
    """Proof checker for the lambda-Pi calculus modulo rewriting"""
    configure_runtime(verbose)


@cli.command()
@click.argument("files", nargs=-1, type=click.Path(exists=True, dir_okay=False))
@click.option("-j", "--jobs", type=click.IntRange(min=1), default=settings.JOBS, show_default=True,
              help="Check tasks in flight at once")
@click.option("--parse-thread", is_flag=True, help="Parse in a dedicated thread")
@click.option("--parse-only", is_flag=True, help="Only parse the input")
@click.option("--no-check", is_flag=True, help="Skip the deferred checks of rewrite rules")
@click.option("--eta", is_flag=True, help="Enable eta-conversion")
@click.option("--step-limit", type=click.IntRange(min=1), default=settings.STEP_LIMIT,
              help="Reject a command when one of its checks takes more than this many machine steps")
@click.option("--stats", is_flag=True, help="Print per-stage timings")
@click.option("--seed", type=int, default=None, help="Seed for worker scheduling jitter")
@click.option("--backend", type=click.Choice(["thread", "process"]), default=settings.WORKER_BACKEND,
              show_default=True, help="Worker pool kind for parallel checking")
def check(files: Tuple[str, ...], jobs: int, parse_thread: bool, parse_only: bool, no_check: bool,
          eta: bool, step_limit: Optional[int], stats: bool, seed: Optional[int], backend: str) -> None:
    """Verify FILES in order against one growing context"""
    try:
        cfg = CheckConfig(
            files=list(files),
            parse_only=parse_only,
            no_check=no_check,
            parse_thread=parse_thread,
            jobs=jobs,
            eta=eta,
            step_limit=step_limit,
            stats=stats,
            seed=seed,
            backend=backend,
            queue_size=settings.PARSE_QUEUE,
        )
    except ValidationError as e:
        _usage_error(str(e.errors()[0]["msg"]))

    try:
        verdict = run(cfg)
    except OSError as e:
        _usage_error(str(e))

    if stats:
        timings = verdict.timings
        for stage in ("parse", "share", "infer", "check"):
            click.echo(f"stage={stage} {format_stat('wall_ms', round(getattr(timings, stage)))}")
        click.echo(format_stat("tasks_peak", verdict.tasks_peak))
        click.echo(format_stat("rss_peak_kb", verdict.rss_peak_kb))

    if not verdict.ok:
        click.echo(verdict.failure.diagnostic, err=True)
        sys.exit(EXIT_REJECTED)
    logger.info(f"Accepted {len(verdict.outcomes)} commands ({verdict.symbols} symbols, {verdict.rules} rules)")


@cli.command()
@click.option("--family", type=click.Choice(["peano-heavy", "wide", "planted"]), required=True)
@click.option("--n", "n", type=click.IntRange(min=0), default=10, show_default=True,
              help="Theorems (peano families) or commands (wide)")
@click.option("--seed", type=int, default=0, show_default=True)
@click.option("--fib-min", type=click.IntRange(min=2), default=8, show_default=True)
@click.option("--fib-max", type=click.IntRange(min=2), default=16, show_default=True)
@click.option("--at", "planted_at", type=click.IntRange(min=1), default=None,
              help="Command index of the planted error")
@click.option("-o", "--out", "out_dir", type=click.Path(file_okay=False), required=True)
def gen(family: str, n: int, seed: int, fib_min: int, fib_max: int, planted_at: Optional[int],
        out_dir: str) -> None:
    """Write a synthetic theory to OUT/<family>-<seed>.dk"""
    try:
        spec = CorpusSpec(family=family, n=n, seed=seed, fib_min=fib_min, fib_max=fib_max,
                          planted_at=planted_at)
        (path,) = generate_corpus(out_dir, [spec])
    except ValidationError as e:
        _usage_error(str(e.errors()[0]["msg"]))
    except (ValueError, OSError) as e:
        _usage_error(str(e))
    click.echo(str(path))


@cli.command()
@click.argument("files", nargs=-1, required=True, type=click.Path(exists=True, dir_okay=False))
@click.option("--runs", type=click.IntRange(min=1), default=3, show_default=True)
@click.option("--jobs", "jobs_list", default="1,2,4,8", show_default=True,
              help="Comma-separated worker counts")
@click.option("--backend", type=click.Choice(["thread", "process"]), default=settings.WORKER_BACKEND,
              show_default=True)
@click.option("--eta", is_flag=True)
def bench(files: Tuple[str, ...], runs: int, jobs_list: str, backend: str, eta: bool) -> None:
    """Time every configuration RUNS times over FILES"""
    try:
        jobs = [int(j) for j in jobs_list.split(",") if j.strip()]
        if not jobs or min(jobs) < 1:
            raise ValueError("worker counts must be positive")
        base = CheckConfig(files=list(files), backend=backend, eta=eta, queue_size=settings.PARSE_QUEUE)
        rows = run_bench(files, base, jobs, runs)
    except ValidationError as e:
        _usage_error(str(e.errors()[0]["msg"]))
    except (ValueError, OSError) as e:
        _usage_error(str(e))
    for row in rows:
        fields = [f"config={row.configuration}", format_stat("runs", row.runs),
                  f"mean_ms={row.mean_ms:.1f}", f"std_ms={row.std_ms:.1f}"]
        if row.typecheck_ms is not None:
            fields.append(f"typecheck_ms={row.typecheck_ms:.1f}")
        if not row.ok:
            fields.append("rejected")
        click.echo(" ".join(fields))


if __name__ == "__main__":
    cli()
