from fractions import Fraction
import logging
import math

from src.adapters.common import error_handler
from src.adapters.lattice.service import LatticeService
from src.adapters.reach.dao import AbstractComponentFinder
from ..dto import Reaction, ReactionNetwork, ValidationReport, JumpStructure, State, Vector, format_rational
from src.exceptions import NetworkValidationError


def falling_factorial(x: int, k: int) -> int:
    return math.prod(x - i for i in range(k))


class NetworkService:
    def __init__(
            self,
            lattice_service: LatticeService,
            component_finder: AbstractComponentFinder,
            logger: logging.Logger | None = None
    ):
        self._lattice = lattice_service
        self._components = component_finder
        self._logger = logger or logging.getLogger(__name__)

    def validate(self, network: ReactionNetwork) -> ValidationReport:
        violations = []
        for index, reaction in enumerate(network.reactions, start=1):
            if reaction.reactant == reaction.product:
                violations.append(f"reaction {index}: reactant equals product")
            if reaction.rate <= 0:
                violations.append(f"reaction {index}: non-positive rate {format_rational(reaction.rate)}")
        for j, name in enumerate(network.species):
            if not any(r.reactant[j] or r.product[j] for r in network.reactions):
                violations.append(f"orphan species {name}")
        if violations:
            self._logger.warning("Network failed validation", extra={"violations": violations})
        return ValidationReport(ok=not violations, violations=violations)

    def require_valid(self, network: ReactionNetwork):
        report = self.validate(network)
        if not report.ok:
            raise NetworkValidationError("Invalid reaction network", violations=report.violations)

    @error_handler
    def jump_structure(self, network: ReactionNetwork) -> JumpStructure:
        self.require_valid(network)
        by_omega: dict[Vector, list] = {}
        for reaction in network.reactions:
            by_omega.setdefault(reaction.vector, []).append(reaction.reactant)

        reactant_minimal = {omega: self._lattice.minimal_set(ys) for omega, ys in by_omega.items()}
        product_minimal = {
            omega: tuple(tuple(a + b for a, b in zip(y, omega)) for y in ys)
            for omega, ys in reactant_minimal.items()
        }
        all_inputs = [y for ys in reactant_minimal.values() for y in ys]
        all_outputs = [y for ys in product_minimal.values() for y in ys]

        signed: dict[str, tuple] = {}
        direction = self._lattice.gcd_vector_set(by_omega) if by_omega else None
        if direction is not None:
            for label, sign in (("positive", 1), ("negative", -1)):
                omegas = [omega for omega in by_omega if direction.sign(omega) == sign]
                signed[f"inputs_{label}"] = self._lattice.minimal_set(
                    [y for omega in omegas for y in reactant_minimal[omega]])
                signed[f"outputs_{label}"] = self._lattice.minimal_set(
                    [y for omega in omegas for y in product_minimal[omega]])

        return JumpStructure(
            omegas=tuple(by_omega),
            reactant_minimal=reactant_minimal,
            product_minimal=product_minimal,
            inputs_minimal=self._lattice.minimal_set(all_inputs) if all_inputs else (),
            outputs_minimal=self._lattice.minimal_set(all_outputs) if all_outputs else (),
            **signed
        )

    @staticmethod
    def propensity(network: ReactionNetwork, reaction: Reaction, x: State) -> Fraction:
        if any(a < b for a, b in zip(x, reaction.reactant)):
            return Fraction(0)
        return reaction.rate * math.prod(falling_factorial(a, b) for a, b in zip(x, reaction.reactant))

    def total_propensity(self, network: ReactionNetwork, x: State) -> Fraction:
        return sum((self.propensity(network, r, x) for r in network.reactions), Fraction(0))

    @error_handler
    def is_weakly_reversible(self, network: ReactionNetwork) -> bool:
        complexes = network.complexes
        if not complexes:
            return True
        index = {c: i for i, c in enumerate(complexes)}
        edges = [(index[r.reactant], index[r.product]) for r in network.reactions]
        labels = self._components.strong_components(len(complexes), edges)
        return all(labels[a] == labels[b] for a, b in edges)
