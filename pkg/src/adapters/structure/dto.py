from pydantic import BaseModel, ConfigDict

from src.adapters.network.dto import Complex, Vector, State
from src.adapters.reach.dto import TriState


def _dominates(x, antichain) -> bool:
    return any(all(a >= b for a, b in zip(x, y)) for y in antichain)


class OmegaStatus(BaseModel):
    """Whether every state of the upward closure of I_omega returns after a jump by omega."""
    model_config = ConfigDict(frozen=True)

    omega: Vector
    reactants: tuple[Complex, ...]
    value: TriState
    returns: tuple[tuple[int, ...] | None, ...] = ()   # path from x + omega back to x per reactant


class MembershipReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    state: State
    neutral: bool
    trapping: bool
    escaping: TriState
    nonsingleton: TriState    # member of P union Q


class ClassificationReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    inputs_minimal: tuple[Complex, ...]
    outputs_minimal: tuple[Complex, ...]
    n_expression: str
    t_expression: str
    i_expression: str
    omega_o: tuple[OmegaStatus, ...]
    essential: TriState
    extinct_sufficient: TriState
    positively_independent: bool
    trap_set_empty: bool
    trap_set_finite: bool
    sample_bounds: tuple[int, ...]
    warnings: tuple[str, ...] = ()

    def in_neutral(self, x: State) -> bool:
        return not _dominates(x, self.outputs_minimal) and not _dominates(x, self.inputs_minimal)

    def in_trapping(self, x: State) -> bool:
        return _dominates(x, self.outputs_minimal) and not _dominates(x, self.inputs_minimal)

    def in_inputs(self, x: State) -> bool:
        return _dominates(x, self.inputs_minimal)

    @property
    def omega_o_set(self) -> list[Vector]:
        return [status.omega for status in self.omega_o if status.value == "yes"]


class CoreReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    sub: tuple[int, ...]
    is_core: TriState
    realizations: dict[int, tuple[int, ...]] = {}   # removed reaction -> realizing reactions, in order
    unresolved: tuple[int, ...] = ()


class MinimalCoresReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    cores: tuple[CoreReport, ...]
    incomplete: bool
    evaluated: int


class AgreementReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    agree: TriState
    mismatches: tuple[tuple[State, State], ...] = ()
    compared: int = 0
