# models.py
# Boundary records: solver configuration in, run results out (JSON via pydantic)

from __future__ import annotations

from enum import Enum
from typing import List, Literal, Optional

from pydantic import BaseModel, ConfigDict, Field, model_validator


class Verdict(str, Enum):
    YES = "yes"
    NO = "no"
    NO_WITH_CONFIDENCE = "no-with-confidence"  # randomized search found nothing
    INCONCLUSIVE = "inconclusive"


class SolveMode(str, Enum):
    RANDOMIZED = "randomized"
    EXHAUSTIVE = "exhaustive"


SEED_MASK = (1 << 64) - 1


class SolverConfig(BaseModel):
    model_config = ConfigDict(frozen=True)

    mode: SolveMode = SolveMode.RANDOMIZED
    seed: int = 0
    epsilon: float = Field(default=0.01, gt=0.0, lt=1.0)
    max_trials: Optional[int] = Field(default=None, ge=1)
    workers: int = Field(default=1, ge=1)

    @model_validator(mode="after")
    def _seed_fits_64_bits(self) -> "SolverConfig":
        if not 0 <= self.seed <= SEED_MASK:
            raise ValueError(f"seed must fit in 64 unsigned bits, got {self.seed}")
        return self


class Certificate(BaseModel):
    kind: Literal["circuit", "vertex-set"]
    vertices: List[int]
    edges: Optional[List[List[int]]] = None  # circuit edges as endpoint pairs, in trail order


class RunStats(BaseModel):
    trials_used: Optional[int] = None
    nodes_explored: Optional[int] = None
    wall_time_ms: Optional[float] = None


class RunResult(BaseModel):
    command: List[str]
    verdict: Verdict
    parameter: Optional[int] = None
    certificate: Optional[Certificate] = None
    stats: RunStats = Field(default_factory=RunStats)
    seed: int = 0
    note: Optional[str] = None

    @model_validator(mode="after")
    def _yes_needs_certificate(self) -> "RunResult":
        if self.verdict is Verdict.YES and self.certificate is None:
            raise ValueError("a yes verdict must carry its certificate")
        return self

    def exit_code(self) -> int:
        return EXIT_CODES[self.verdict]


EXIT_CODES = {
    Verdict.YES: 0,
    Verdict.NO: 1,
    Verdict.NO_WITH_CONFIDENCE: 1,
    Verdict.INCONCLUSIVE: 2,
}
