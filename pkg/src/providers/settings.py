import os
from typing import Literal

from pydantic import BaseModel, ConfigDict, Field

from src.adapters.simulation.dto import SimLimits

LogLevel = Literal["DEBUG", "INFO", "WARNING", "ERROR"]

_ENV = {
    "budget": "SRN_BUDGET",
    "window_bound": "SRN_WINDOW",
    "core_cap": "SRN_CORE_CAP",
    "log_level": "SRN_LOG_LEVEL",
}


class AnalysisSettings(BaseModel):
    model_config = ConfigDict(frozen=True)

    budget: int = Field(default=1_000_000, gt=0)
    window_bound: int = Field(default=1000, ge=0)
    core_cap: int = Field(default=16, gt=0)
    core_padding: int = Field(default=24, ge=0)
    sample_bound: int = Field(default=6, ge=0)
    max_events: int = Field(default=1_000_000, gt=0)
    max_time: float = Field(default=10.0, gt=0)
    max_state_norm: int = Field(default=1_000_000, gt=0)
    log_level: LogLevel = "WARNING"

    @classmethod
    def from_env(cls, environ: dict[str, str] | None = None, **overrides) -> "AnalysisSettings":
        """Defaults, then SRN_* variables, then explicit overrides that are not None."""
        environ = os.environ if environ is None else environ
        values = {field: environ[name] for field, name in _ENV.items() if environ.get(name)}
        if "log_level" in values:
            values["log_level"] = values["log_level"].upper()
        values.update({k: v for k, v in overrides.items() if v is not None})
        return cls(**values)

    @property
    def limits(self) -> SimLimits:
        return SimLimits(max_events=self.max_events, max_time=self.max_time, max_state_norm=self.max_state_norm)
