import math
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.adapters.network.dto import State

OutcomeKind = Literal["absorbed", "censored", "explosion_suspected"]
TailModel = Literal["CMP-like", "geometric", "power-law"]


class SimLimits(BaseModel):
    model_config = ConfigDict(frozen=True)

    max_events: int = Field(default=10**6, gt=0)
    max_time: float = Field(default=10.0, gt=0)
    max_state_norm: int = Field(default=10**6, gt=0)


class TrajectoryOutcome(BaseModel):
    model_config = ConfigDict(frozen=True)

    kind: OutcomeKind
    time: float
    state: State
    event_count: int
    seed: int
    stream: int = 0
    reason: str | None = None
    path: tuple[tuple[float, State], ...] | None = None


class EmpiricalPMF(BaseModel):
    """Distribution of the first coordinate; keys are counts."""
    model_config = ConfigDict(frozen=True)

    probabilities: dict[int, float]
    sample_count: int = 0

    @field_validator("probabilities")
    @classmethod
    def normalized(cls, probabilities: dict[int, float]) -> dict[int, float]:
        if any(p < 0 for p in probabilities.values()):
            raise ValueError("probabilities must be non-negative")
        if probabilities and abs(math.fsum(probabilities.values()) - 1.0) > 1e-12:
            raise ValueError("probabilities must sum to one")
        return dict(sorted(probabilities.items()))

    @classmethod
    def from_weights(cls, weights: dict[int, float], sample_count: int = 0) -> "EmpiricalPMF":
        total = math.fsum(weights.values())
        if total <= 0:
            raise ValueError("weights must have positive mass")
        probabilities = {k: w / total for k, w in weights.items() if w > 0}
        # absorb the rounding residue in the largest atom
        residue = 1.0 - math.fsum(probabilities.values())
        if probabilities and residue:
            top = max(probabilities, key=probabilities.get)
            probabilities[top] += residue
        return cls(probabilities=probabilities, sample_count=sample_count)

    @property
    def support(self) -> list[int]:
        return list(self.probabilities)

    def survival(self) -> dict[int, float]:
        """T(x) = P(X >= x) on the support."""
        tail = {}
        running = 0.0
        # summed from the far end so small tails keep their precision
        for x, p in reversed(self.probabilities.items()):
            running += p
            tail[x] = running
        return dict(reversed(tail.items()))

    def mean(self) -> float:
        return math.fsum(x * p for x, p in self.probabilities.items())


class TailFit(BaseModel):
    model_config = ConfigDict(frozen=True)

    model: TailModel
    a: float
    b: float | None = None
    scores: dict[str, float]
    residuals: dict[str, float]
    support_size: int
