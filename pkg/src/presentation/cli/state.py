from dataclasses import dataclass, field
from typing import Any

from pydantic import BaseModel, Field

from src.adapters.network.dto import ReactionNetwork, Vector, format_rational

SCHEMA_VERSION = "1.0"
TOOL_VERSION = "0.3.0"


class NetworkDigest(BaseModel):
    species: list[str]
    reactions: list[str]
    omegas: list[Vector]

    @classmethod
    def of(cls, network: ReactionNetwork) -> "NetworkDigest":
        def side(vector):
            terms = [
                name if coeff == 1 else f"{coeff}{name}"
                for coeff, name in zip(vector, network.species) if coeff
            ]
            return " + ".join(terms) or "0"

        return cls(
            species=list(network.species),
            reactions=[
                f"{side(r.reactant)} -> {side(r.product)} @ {format_rational(r.rate)}"
                for r in network.reactions
            ],
            omegas=sorted(set(network.vectors))
        )


class Report(BaseModel):
    schema_version: str = SCHEMA_VERSION
    tool_version: str = TOOL_VERSION
    command: list[str]
    network: NetworkDigest | None = None
    payload: dict[str, Any] = Field(default_factory=dict)
    warnings: list[str] = Field(default_factory=list)
    exit_code: int = 0
    error: dict[str, Any] | None = None


@dataclass
class RunState:
    """Collects warnings and undecided verdicts while one command runs."""
    command: list[str]
    warnings: list[str] = field(default_factory=list)
    unknowns: int = 0

    def warn(self, message: str, unknown: bool = False):
        self.warnings.append(message)
        if unknown:
            self.unknowns += 1

    def report(self, network: ReactionNetwork | None, payload: dict[str, Any]) -> Report:
        return Report(
            command=self.command,
            network=NetworkDigest.of(network) if network is not None else None,
            payload=payload,
            warnings=self.warnings,
            exit_code=1 if self.unknowns else 0
        )
