import logging

from src.adapters.common import error_handler
from src.adapters.lattice.service import LatticeService
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from src.adapters.reach.dto import Window, TriState, tri_and, tri_or, tri_not
from src.adapters.reach.service import ReachService
from ..dao import AbstractSetExpressionCodec
from ..dto import OmegaStatus, MembershipReport, ClassificationReport


def _shift(x, omega) -> State:
    return tuple(a + b for a, b in zip(x, omega))


class ClassificationService:
    def __init__(
            self,
            network_service: NetworkService,
            lattice_service: LatticeService,
            reach_service: ReachService,
            expression_codec: AbstractSetExpressionCodec,
            budget: int = 1_000_000,
            padding: int = 24,
            sample_bound: int = 6,
            logger: logging.Logger | None = None
    ):
        self._network = network_service
        self._lattice = lattice_service
        self._reach = reach_service
        self._codec = expression_codec
        self._budget = budget
        self._padding = padding
        self._sample_bound = sample_bound
        self._logger = logger or logging.getLogger(__name__)

    @error_handler
    def trap_set_empty(self, network: ReactionNetwork) -> bool:
        jumps = self._network.jump_structure(network)
        return all(self._lattice.upward_contains(jumps.inputs_minimal, x) for x in jumps.outputs_minimal)

    @error_handler
    def trap_set_finite(self, network: ReactionNetwork) -> bool:
        jumps = self._network.jump_structure(network)
        for j in range(network.dimension):
            def drop(v):
                return v[:j] + v[j + 1:]
            reduced_inputs = [drop(y) for y in jumps.inputs_minimal]
            if not all(self._lattice.upward_contains(reduced_inputs, drop(x)) for x in jumps.outputs_minimal):
                return False
        return True

    def _returns(self, network: ReactionNetwork, x: State, omega, budget: int):
        start = _shift(x, omega)
        window = Window.around([x, start], self._padding)
        return self._reach.reachable(network, start, x, budget=budget, window=window)

    @error_handler
    def omega_o(self, network: ReactionNetwork, budget: int | None = None) -> tuple[OmegaStatus, ...]:
        budget = budget or self._budget
        jumps = self._network.jump_structure(network)
        if self._network.is_weakly_reversible(network):
            # every reaction lies on a cycle of the reaction graph
            return tuple(
                OmegaStatus(omega=omega, reactants=jumps.reactant_minimal[omega], value="yes")
                for omega in jumps.omegas
            )

        statuses = []
        for omega in jumps.omegas:
            reactants = jumps.reactant_minimal[omega]
            # x + omega -> x on the minimal set lifts to all of up(I_omega) by translating the path
            results = [self._returns(network, x, omega, budget) for x in reactants]
            statuses.append(OmegaStatus(
                omega=omega,
                reactants=reactants,
                value=tri_and(*(r.value for r in results)),
                returns=tuple(r.path for r in results)
            ))
        unknown = [s.omega for s in statuses if s.value == "unknown"]
        if unknown:
            self._logger.warning("Undecided return reachability", extra={"omegas": unknown})
        return tuple(statuses)

    def _nonsingleton(self, network, statuses, x: State, budget: int, memo: dict) -> TriState:
        """Membership of x in the union of up(I_omega)^o, the states of PICs and QICs."""
        if x in memo:
            return memo[x]
        values = []
        for status in statuses:
            if not self._lattice.upward_contains(status.reactants, x):
                continue
            if status.value == "yes":
                values = ["yes"]
                break
            values.append(self._returns(network, x, status.omega, budget).value)
        memo[x] = tri_or(*values) if values else "no"
        return memo[x]

    def membership(
            self,
            network: ReactionNetwork,
            report: ClassificationReport,
            x: State,
            budget: int | None = None
    ) -> MembershipReport:
        x = tuple(x)
        nonsingleton = self._nonsingleton(network, report.omega_o, x, budget or self._budget, {})
        return MembershipReport(
            state=x,
            neutral=report.in_neutral(x),
            trapping=report.in_trapping(x),
            escaping=tri_and("yes" if report.in_inputs(x) else "no", tri_not(nonsingleton)),
            nonsingleton=nonsingleton
        )

    def _extinct_sufficient(self, network, jumps, statuses, window: Window, budget: int) -> TriState:
        inputs = jumps.inputs_minimal
        memo: dict[State, TriState] = {}
        good: set[State] = set()
        verdicts: list[TriState] = []

        for x in window.states():
            if x in good or not self._lattice.upward_contains(inputs, x):
                continue
            if self._nonsingleton(network, statuses, x, budget, memo) == "no":
                continue

            undecided = []

            def leaves_union(s: State) -> bool:
                if s in good or not self._lattice.upward_contains(inputs, s):
                    return True
                member = self._nonsingleton(network, statuses, s, budget, memo)
                if member == "unknown":
                    undecided.append(s)
                return member == "no"

            result = self._reach.search(
                network, x, leaves_union, budget=budget, window=Window.around([x], self._padding)
            )
            if result.value == "yes":
                good.update(self._reach.replay(network, x, result.path))
            elif result.value == "no" and not undecided and memo.get(x) == "yes":
                self._logger.info("Extinction condition fails", extra={"state": x})
                return "no"
            else:
                verdicts.append("unknown")
        return tri_and(*verdicts) if verdicts else "yes"

    @error_handler
    def classify(
            self,
            network: ReactionNetwork,
            budget: int | None = None,
            sample_bound: int | None = None
    ) -> ClassificationReport:
        budget = budget or self._budget
        sample_bound = self._sample_bound if sample_bound is None else sample_bound
        jumps = self._network.jump_structure(network)
        inputs, outputs = jumps.inputs_minimal, jumps.outputs_minimal
        statuses = self.omega_o(network, budget)
        essential = tri_and(*(s.value for s in statuses)) if statuses else "yes"
        independent = (
            self._lattice.positively_linearly_independent(jumps.omegas).independent
            if jumps.omegas else True
        )
        window = Window.cube(network.dimension, sample_bound)

        warnings = []
        if independent:
            # no PIC or QIC, the condition holds vacuously
            extinct = "yes"
        elif essential == "yes":
            # P equals up(I), which is nonempty
            extinct = "no"
        else:
            extinct = self._extinct_sufficient(network, jumps, statuses, window, budget)
        if essential == "unknown":
            warnings.append("essential status undecided: some return paths were not found within the budget")
        if extinct == "unknown":
            warnings.append("extinction condition undecided on the sample window")

        report = ClassificationReport(
            inputs_minimal=inputs,
            outputs_minimal=outputs,
            n_expression=self._codec.render_complement(self._codec.render_union(outputs, inputs)),
            t_expression=self._codec.render_difference(outputs, inputs),
            i_expression=self._codec.render_up(inputs),
            omega_o=statuses,
            essential=essential,
            extinct_sufficient=extinct,
            positively_independent=independent,
            trap_set_empty=self.trap_set_empty(network),
            trap_set_finite=self.trap_set_finite(network),
            sample_bounds=window.bounds,
            warnings=tuple(warnings)
        )
        self._logger.info(
            "Network classified",
            extra={"essential": essential, "extinct_sufficient": extinct, "omegas": len(statuses)}
        )
        return report
