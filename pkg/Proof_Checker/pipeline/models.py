"""
Pydantic models for checker runs: configuration in, verdict out.
"""
from typing import List, Literal, Optional

from pydantic import BaseModel, Field, model_validator


class CheckConfig(BaseModel):
    """Configuration of one checker run"""
    files: List[str] = Field(default_factory=list, description="Theory files, checked in order against one context")
    parse_only: bool = Field(default=False, description="Stop after parsing")
    no_check: bool = Field(default=False, description="Parse, share and infer, but skip deferred checks")
    parse_thread: bool = Field(default=False, description="Parse in a dedicated thread feeding a bounded queue")
    jobs: int = Field(default=1, ge=1, description="Maximum number of check tasks in flight")
    parallel: bool = Field(default=False, description="Defer checks to a worker pool even when jobs is 1")
    eta: bool = Field(default=False, description="Identify eta-equivalent terms during conversion")
    step_limit: Optional[int] = Field(default=None, ge=1, description="Machine steps allowed for each check of a command")
    stats: bool = Field(default=False, description="Report per-stage timings")
    seed: Optional[int] = Field(default=None, description="Seed for worker scheduling jitter")
    backend: Literal["thread", "process"] = Field(default="thread", description="Worker pool kind")
    queue_size: int = Field(default=64, ge=1, description="Capacity of the parse handoff queue")
    trace: bool = Field(default=False, description="Record the order of context extensions")

    @model_validator(mode="after")
    def _exclusive_stops(self) -> "CheckConfig":
        if self.parse_only and self.no_check:
            raise ValueError("parse_only and no_check are mutually exclusive")
        return self

    @property
    def parallel_check(self) -> bool:
        return (self.jobs > 1 or self.parallel) and not (self.parse_only or self.no_check)


class CommandOutcome(BaseModel):
    """Result of one command"""
    file: str = Field(..., description="File the command comes from")
    index: int = Field(..., ge=1, description="1-based command index within its file")
    ok: bool = Field(default=True, description="Whether the command was accepted")
    error: Optional[str] = Field(default=None, description="Exception class of the failure")
    diagnostic: Optional[str] = Field(default=None, description="One-line FILE:LINE:COL diagnostic")


class StageTimings(BaseModel):
    """Wall time spent per pipeline stage, in milliseconds"""
    parse: float = 0.0
    share: float = 0.0
    infer: float = 0.0
    check: float = 0.0
    total: float = 0.0


class Verdict(BaseModel):
    """Outcome of a checker run"""
    ok: bool = Field(..., description="True when every command was accepted")
    outcomes: List[CommandOutcome] = Field(default_factory=list, description="Per-command outcomes up to the first failure")
    failure: Optional[CommandOutcome] = Field(default=None, description="Earliest failing command")
    symbols: int = Field(default=0, description="Declared constants in the final context")
    rules: int = Field(default=0, description="Rewrite rules in the final context")
    timings: StageTimings = Field(default_factory=StageTimings)
    tasks_peak: int = Field(default=0, description="Largest number of check tasks in flight")
    rss_peak_kb: int = Field(default=0, description="Peak resident set size of the process")
    trace: List[str] = Field(default_factory=list, description="Context extensions in order, when traced")

    @property
    def failed_at(self) -> Optional[int]:
        return self.failure.index if self.failure else None

    def summary(self) -> tuple:
        """Mode-independent part of the verdict"""
        if self.failure is None:
            return (True, None, None)
        return (False, self.failure.file, self.failure.index)


class CorpusSpec(BaseModel):
    """Parameters of one generated theory"""
    family: Literal["peano-heavy", "wide", "planted"] = Field(..., description="Theory profile")
    n: int = Field(default=10, ge=0, description="Theorems (peano families) or commands (wide)")
    seed: int = Field(default=0, description="Generator seed")
    fib_min: int = Field(default=8, ge=2, description="Smallest fib argument in a theorem")
    fib_max: int = Field(default=16, ge=2, description="Largest fib argument in a theorem")
    planted_at: Optional[int] = Field(default=None, ge=1, description="Command index of the planted error")

    @model_validator(mode="after")
    def _fib_range(self) -> "CorpusSpec":
        if self.fib_min > self.fib_max:
            raise ValueError("fib_min must not exceed fib_max")
        return self


class BenchRow(BaseModel):
    """Timing of one checker configuration over repeated runs"""
    configuration: str = Field(..., description="Configuration label, e.g. seq or check-4")
    runs: int = Field(..., ge=1)
    mean_ms: float = Field(..., description="Mean wall time")
    std_ms: float = Field(..., description="Standard deviation of wall time")
    typecheck_ms: Optional[float] = Field(default=None, description="Mean wall time minus the no-check mean")
    ok: bool = Field(default=True, description="Whether every run accepted the input")
