"""
Theory checking pipeline.

One coordinating thread pulls commands in order, shares them, performs the
eager part of checking (declaration sorts, rule validation, left-hand side
inference) and extends the global context. What remains of a rule is a
``CheckTask``. Sequential runs execute it on the spot; parallel runs submit it
to a worker pool with a bounded number of tasks in flight and join all of them
before the verdict is emitted. The reported failure is always the one with the
smallest command index, so every mode reaches the same verdict.

Optionally a dedicated parse stage runs in its own thread and hands owned
commands to the coordinator through a bounded queue.
"""
from __future__ import annotations

import logging
import multiprocessing
import queue
import random
import sys
import threading
import time
from concurrent.futures import Executor, Future, ProcessPoolExecutor, ThreadPoolExecutor
from contextlib import contextmanager
from pathlib import Path
from typing import Any, Callable, Iterator, Optional, Sequence, Union

from Proof_Checker.config import settings
from Proof_Checker.kernel.context import GlobalContext
from Proof_Checker.kernel.errors import (
    CheckCancelled,
    InternalError,
    KernelError,
    Redeclaration,
    Span,
)
from Proof_Checker.kernel.rule import Head, Rule
from Proof_Checker.kernel.term import SharingPolicy
from Proof_Checker.kernel.typecheck import (
    CheckTask,
    KernelOptions,
    Origin,
    check_declaration,
    check_rule,
    run_task,
)
from Proof_Checker.parse.parser import Command, own_command, parse_commands
from Proof_Checker.sharer import SharedDeclaration, SharedDefinition, SymbolTable, share_command
from Proof_Checker.utils.helpers import format_diagnostic, format_error_message

from .models import CheckConfig, CommandOutcome, StageTimings, Verdict

logger = logging.getLogger(__name__)

Source = tuple[str, bytes]
_Key = tuple[int, int]

_END = object()
_NO_FAILURE = (1 << 63) - 1


class RecursionLimitError(KernelError):
    """A term was too deeply nested for the interpreter's recursion limit."""


def _as_kernel_error(err: BaseException, span: Optional[Span] = None) -> KernelError:
    if isinstance(err, KernelError):
        return err
    if isinstance(err, RecursionError):
        return RecursionLimitError("term nesting exceeds the recursion limit", span)
    error = InternalError(f"internal error: {type(err).__name__}: {err}", span)
    error.__cause__ = err
    return error


def _key_code(key: _Key) -> int:
    return (key[0] << 32) | key[1]


class FailureMark:
    """
    Smallest failing command key of a run, shared with worker threads and processes.

    Checks of a command poll ``watcher`` and give up as soon as a command
    before theirs has failed.
    """

    def __init__(self) -> None:
        self._cell = multiprocessing.RawValue("q", _NO_FAILURE)
        self._lock = threading.Lock()

    def __getstate__(self) -> dict[str, Any]:
        return {"_cell": self._cell}

    def __setstate__(self, state: dict[str, Any]) -> None:
        self._cell = state["_cell"]
        self._lock = threading.Lock()

    def record(self, key: _Key) -> None:
        code = _key_code(key)
        with self._lock:
            if code < self._cell.value:
                self._cell.value = code

    def failed_before(self, key: _Key) -> bool:
        return self._cell.value < _key_code(key)

    def watcher(self, key: _Key) -> Callable[[], bool]:
        code = _key_code(key)
        cell = self._cell
        return lambda: cell.value < code


# set in each worker process by _init_worker
_worker_mark: Optional[FailureMark] = None


def _check_task(task: CheckTask, key: _Key, jitter: float = 0.0,
                mark: Optional[FailureMark] = None) -> Optional[KernelError]:
    """Worker entry point: run one deferred check, returning its error if any."""
    if mark is None:
        mark = _worker_mark
    if jitter:
        time.sleep(jitter)
    try:
        run_task(task, mark.watcher(key) if mark is not None else None)
    except Exception as err:
        return _as_kernel_error(err, task.origin.span)
    return None


def _task_error(future: Future) -> Optional[KernelError]:
    """The error a finished task reports, including failures outside the check itself."""
    if future.cancelled():
        return CheckCancelled()
    exc = future.exception()
    if exc is not None:
        return _as_kernel_error(exc)
    return future.result()


def _init_worker(recursion_limit: int, mark: FailureMark) -> None:
    global _worker_mark
    sys.setrecursionlimit(recursion_limit)
    _worker_mark = mark


class ParseStage(threading.Thread):
    """
    Parses one buffer in a dedicated thread.

    Commands are converted to owned form before they are queued, so nothing
    put on the queue refers to the buffer. A parse error is queued in place of
    the command that failed and ends the stage.
    """

    def __init__(self, source: bytes, maxsize: int):
        super().__init__(name="parse-stage", daemon=True)
        self.source = source
        self.handoff: "queue.Queue[object]" = queue.Queue(maxsize=maxsize)
        self.elapsed = 0.0
        self._cancelled = threading.Event()

    def run(self) -> None:
        start = time.perf_counter()
        try:
            for cmd in parse_commands(self.source):
                if not self._put(own_command(cmd)):
                    return
            self._put(_END)
        except Exception as err:
            self._put(_as_kernel_error(err))
        finally:
            self.elapsed = time.perf_counter() - start

    def _put(self, item: object) -> bool:
        while not self._cancelled.is_set():
            try:
                self.handoff.put(item, timeout=0.05)
                return True
            except queue.Full:
                continue
        return False

    def cancel(self) -> None:
        self._cancelled.set()

    def __iter__(self) -> Iterator[Command]:
        while True:
            try:
                item = self.handoff.get(timeout=0.05)
            except queue.Empty:
                if not self.is_alive() and self.handoff.empty():
                    raise InternalError("parse stage stopped before the end of input")
                continue
            if item is _END:
                return
            if isinstance(item, KernelError):
                raise item
            yield item


class TheoryRunner:
    """
    Checks a sequence of theory files against one growing global context.

    Args:
        cfg: Run configuration; ``cfg.parallel_check`` selects the worker pool
    """

    def __init__(self, cfg: CheckConfig):
        self.cfg = cfg
        self.parallel = cfg.parallel_check
        self.policy = SharingPolicy.GLOBAL_SHARED if self.parallel else SharingPolicy.LOCAL_SHARED
        self.options = KernelOptions(eta=cfg.eta, step_limit=cfg.step_limit, policy=self.policy)
        self.symbols = SymbolTable()
        self.gamma = GlobalContext()
        self.trace: list[str] = []
        self._elapsed = {"parse": 0.0, "share": 0.0, "infer": 0.0, "check": 0.0}
        self._outcomes: dict[_Key, CommandOutcome] = {}
        self._failures: dict[_Key, CommandOutcome] = {}
        self._pending: list[tuple[_Key, str, bytes, Optional[Span], Future]] = []
        self._executor: Optional[Executor] = None
        self._slots = threading.BoundedSemaphore(cfg.jobs)
        self._lock = threading.Lock()
        self._mark = FailureMark()
        self._in_flight = 0
        self._peak = 0
        self._first_submit: Optional[float] = None
        self._last_done: Optional[float] = None
        self._rng = random.Random(cfg.seed) if cfg.seed is not None else None

    # --- driving -------------------------------------------------------

    def run_files(self, paths: Sequence[Union[str, Path]]) -> Verdict:
        """
        Read and check ``paths`` in order.

        Raises:
            OSError: If a file cannot be read
        """
        return self.run([(str(p), Path(p).read_bytes()) for p in paths])

    def run(self, sources: Sequence[Source]) -> Verdict:
        start = time.perf_counter()
        if self.parallel:
            self._executor = self._make_executor()
        try:
            for pos, (name, source) in enumerate(sources):
                logger.info(f"Checking {name}")
                if not self._check_source(pos, name, source):
                    break
            self._drain()
        finally:
            if self._executor is not None:
                self._executor.shutdown(wait=True, cancel_futures=True)
        return self._verdict(time.perf_counter() - start)

    def _make_executor(self) -> Executor:
        if self.cfg.backend == "process":
            return ProcessPoolExecutor(
                max_workers=self.cfg.jobs,
                initializer=_init_worker,
                initargs=(settings.RECURSION_LIMIT, self._mark),
            )
        return ThreadPoolExecutor(max_workers=self.cfg.jobs, thread_name_prefix="check")

    @contextmanager
    def _timed(self, stage: str) -> Iterator[None]:
        start = time.perf_counter()
        try:
            yield
        finally:
            self._elapsed[stage] += time.perf_counter() - start

    def _commands(self, source: bytes) -> tuple[Iterator[Command], Optional[ParseStage]]:
        if not self.cfg.parse_thread:
            return parse_commands(source), None
        stage = ParseStage(source, self.cfg.queue_size)
        stage.start()
        return iter(stage), stage

    def _check_source(self, pos: int, name: str, source: bytes) -> bool:
        """Process one file; False when checking must not continue."""
        commands, stage = self._commands(source)
        try:
            index = 0
            while True:
                index += 1
                key = (pos, index)
                try:
                    with self._timed("parse"):
                        cmd = next(commands, None)
                except Exception as err:
                    self._fail(key, name, source, err, None)
                    return False
                if cmd is None:
                    return True
                if self._mark.failed_before(key):
                    # every later command has a larger index than the failure
                    return False
                if not self._process(key, name, source, cmd):
                    return False
        finally:
            if stage is not None:
                stage.cancel()
                stage.join()
                logger.debug(f"Parse stage for {name} ran {stage.elapsed * 1000:.1f} ms")

    def _process(self, key: _Key, name: str, source: bytes, cmd: Command) -> bool:
        self._outcomes[key] = CommandOutcome(file=name, index=cmd.index)
        if self.cfg.parse_only:
            return True
        origin = Origin(cmd.index, cmd.span)
        try:
            task = self._extend(key, cmd, origin)
        except CheckCancelled:
            return False
        except Exception as err:
            self._fail(key, name, source, err, cmd.span)
            return False
        if task is None or self.cfg.no_check:
            return True
        if self.parallel:
            self._submit(key, name, source, task)
            return True
        with self._timed("check"):
            error = _check_task(task, key)
        if error is not None:
            self._fail(key, name, source, error, cmd.span)
            return False
        return True

    def _extend(self, key: _Key, cmd: Command, origin: Origin) -> Optional[CheckTask]:
        """Share ``cmd`` and add it to the context; returns the deferred check, if any."""
        # a failed task leaves its rule in the context, so eager checks may diverge
        cancelled = self._mark.watcher(key) if self.parallel else None
        with self._timed("share"):
            shared = share_command(self.symbols, cmd, self.policy)
        with self._timed("infer"):
            if isinstance(shared, SharedDeclaration):
                self.gamma = check_declaration(self.gamma, shared.symbol, shared.type, self.options, cancelled)
                self._record(f"declare {shared.symbol}")
                return None
            if isinstance(shared, SharedDefinition):
                self.gamma = check_declaration(self.gamma, shared.symbol, shared.type, self.options, cancelled)
                self._record(f"declare {shared.symbol}")
                rule = Rule((), Head(shared.symbol), shared.body)
            else:
                rule = shared.rule
            self.gamma, task = check_rule(self.gamma, rule, origin, self.options, cancelled)
            self._record(f"rule {rule.head}")
            return task

    def _record(self, event: str) -> None:
        if self.cfg.trace:
            self.trace.append(event)

    # --- workers -------------------------------------------------------

    def _submit(self, key: _Key, name: str, source: bytes, task: CheckTask) -> None:
        self._slots.acquire()
        with self._lock:
            self._in_flight += 1
            self._peak = max(self._peak, self._in_flight)
            if self._first_submit is None:
                self._first_submit = time.perf_counter()
        jitter = self._rng.uniform(0.0, 0.001) if self._rng is not None else 0.0
        # process workers read the mark installed by _init_worker
        mark = self._mark if self.cfg.backend == "thread" else None
        try:
            future = self._executor.submit(_check_task, task, key, jitter, mark)
        except Exception as err:
            self._task_done(key, None)
            self._mark.record(key)
            self._fail(key, name, source, err, task.origin.span)
            return
        self._pending.append((key, name, source, task.origin.span, future))
        future.add_done_callback(lambda f, key=key: self._task_done(key, f))

    def _task_done(self, key: _Key, future: Optional[Future]) -> None:
        with self._lock:
            self._in_flight -= 1
            self._last_done = time.perf_counter()
        if future is not None:
            error = _task_error(future)
            if error is not None and not isinstance(error, CheckCancelled):
                self._mark.record(key)
        self._slots.release()

    def _drain(self) -> None:
        """Join every submitted task and record the failures."""
        for key, name, source, span, future in self._pending:
            error = _task_error(future)
            # cancelled tasks come after a recorded failure
            if error is not None and not isinstance(error, CheckCancelled):
                self._fail(key, name, source, error, span)
        self._pending.clear()
        if self._first_submit is not None and self._last_done is not None:
            self._elapsed["check"] = max(0.0, self._last_done - self._first_submit)

    # --- results -------------------------------------------------------

    def _fail(self, key: _Key, name: str, source: bytes, err: BaseException,
              fallback: Optional[Span]) -> None:
        error = _as_kernel_error(err, fallback)
        span = error.span or fallback
        if isinstance(error, Redeclaration) and fallback is not None:
            # the symbol span points at the earlier declaration
            span = fallback
        message = format_error_message(error)
        outcome = CommandOutcome(
            file=name,
            index=key[1],
            ok=False,
            error=type(error).__name__,
            diagnostic=format_diagnostic(name, source, span, key[1], message),
        )
        if isinstance(error, InternalError):
            logger.error(f"Command #{key[1]} of {name} failed unexpectedly: {message}", exc_info=error.__cause__)
        else:
            logger.info(f"Rejected command #{key[1]} of {name}: {message}")
        self._failures[key] = outcome
        self._outcomes[key] = outcome

    def _verdict(self, total: float) -> Verdict:
        failure_key = min(self._failures) if self._failures else None
        outcomes = [
            self._outcomes[k] for k in sorted(self._outcomes)
            if failure_key is None or k <= failure_key
        ]
        timings = StageTimings(**{k: v * 1000 for k, v in self._elapsed.items()}, total=total * 1000)
        return Verdict(
            ok=failure_key is None,
            outcomes=outcomes,
            failure=self._failures[failure_key] if failure_key is not None else None,
            symbols=len(self.gamma),
            rules=self.gamma.rule_count(),
            timings=timings,
            tasks_peak=self._peak,
            rss_peak_kb=_rss_peak_kb(),
            trace=list(self.trace),
        )


def _rss_peak_kb() -> int:
    try:
        import resource
    except ImportError:
        return 0
    return int(resource.getrusage(resource.RUSAGE_SELF).ru_maxrss)


# --- execution strategies ---------------------------------------------------

def run(cfg: CheckConfig) -> Verdict:
    """Check ``cfg.files`` with the strategy ``cfg`` selects."""
    return TheoryRunner(cfg).run_files(cfg.files)


def run_sequential(cfg: CheckConfig, path: Union[str, Path]) -> Verdict:
    """Check one file, running each deferred check before the next command."""
    cfg = cfg.model_copy(update={"jobs": 1, "parallel": False, "parse_thread": False})
    return TheoryRunner(cfg).run_files([path])


def run_parallel_check(cfg: CheckConfig, path: Union[str, Path]) -> Verdict:
    """Check one file, deferring rule checks to ``cfg.jobs`` workers."""
    cfg = cfg.model_copy(update={"parallel": True})
    return TheoryRunner(cfg).run_files([path])


def run_parallel_parse(cfg: CheckConfig, path: Union[str, Path]) -> Verdict:
    """Check one file with parsing moved to a dedicated thread."""
    cfg = cfg.model_copy(update={"parse_thread": True})
    return TheoryRunner(cfg).run_files([path])


def check_text(text: Union[str, bytes], cfg: Optional[CheckConfig] = None,
               name: str = "<input>") -> Verdict:
    """Check an in-memory theory."""
    source = text.encode("utf-8") if isinstance(text, str) else text
    return TheoryRunner(cfg or CheckConfig()).run([(name, source)])
