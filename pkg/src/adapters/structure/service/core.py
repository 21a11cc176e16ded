from typing import Iterable
import logging

from src.adapters.common import error_handler
from src.adapters.network.dto import ReactionNetwork
from src.adapters.reach.dto import Window, Reachability, tri_and
from src.adapters.reach.service import ReachService
from ..dto import CoreReport, MinimalCoresReport, AgreementReport
from src.exceptions import CoreSearchCapError, NetworkValidationError


class CoreService:
    def __init__(
            self,
            reach_service: ReachService,
            budget: int = 1_000_000,
            padding: int = 24,
            core_cap: int = 16,
            logger: logging.Logger | None = None
    ):
        self._reach = reach_service
        self._budget = budget
        self._padding = padding
        self._core_cap = core_cap
        self._logger = logger or logging.getLogger(__name__)

    @staticmethod
    def _checked_sub(network: ReactionNetwork, sub: Iterable[int]) -> tuple[int, ...]:
        sub = tuple(sorted(set(sub)))
        outside = [i for i in sub if not 0 <= i < len(network.reactions)]
        if outside:
            raise NetworkValidationError(
                "sub-network is not a subset of the network's reactions",
                violations=[f"unknown reaction index {i + 1}" for i in outside]
            )
        return sub

    def _realize(self, network: ReactionNetwork, sub: tuple[int, ...], removed: int, budget: int) -> Reachability:
        """Path of sub-network reactions from the reactant of `removed` to its product."""
        reaction = network.reactions[removed]
        window = Window.around([reaction.reactant, reaction.product], self._padding)
        result = self._reach.reachable(
            network.restrict(sub), reaction.reactant, reaction.product, budget=budget, window=window
        )
        if result.path is None:
            return result
        return result.model_copy(update={"path": tuple(sub[i] for i in result.path)})

    @error_handler
    def is_core_network(self, network: ReactionNetwork, sub: Iterable[int], budget: int | None = None) -> CoreReport:
        budget = budget or self._budget
        sub = self._checked_sub(network, sub)
        values = []
        realizations: dict[int, tuple[int, ...]] = {}
        unresolved = []
        for removed in range(len(network.reactions)):
            if removed in sub:
                continue
            result = self._realize(network, sub, removed, budget)
            if result.value == "yes":
                realizations[removed] = result.path
            else:
                unresolved.append(removed)
                values.append(result.value)
        return CoreReport(
            sub=sub,
            is_core=tri_and(*values) if values else "yes",
            realizations=realizations,
            unresolved=tuple(unresolved)
        )

    @error_handler
    def minimal_core_networks(
            self,
            network: ReactionNetwork,
            budget: int | None = None,
            cap: int | None = None
    ) -> MinimalCoresReport:
        budget = budget or self._budget
        cap = cap or self._core_cap
        n = len(network.reactions)
        if n > cap:
            raise CoreSearchCapError(
                f"core search is limited to {cap} reactions, network has {n}",
                context={"reactions": n, "cap": cap}
            )

        # reactions with the longest jumps are removed first
        priority = sorted(range(n), key=lambda i: (-sum(abs(v) for v in network.reactions[i].vector), i))
        full = frozenset(range(n))
        # a subset of a core is a core iff it realizes the one reaction removed from it
        memo = {full: "yes"}
        incomplete = False
        minimal: list[frozenset] = []
        stack = [full]
        visited = set()
        while stack:
            current = stack.pop()
            if current in visited:
                continue
            visited.add(current)
            has_core_child = False
            children = []
            for removed in (i for i in priority if i in current):
                child = current - {removed}
                if child not in memo:
                    memo[child] = self._realize(network, tuple(sorted(child)), removed, budget).value
                if memo[child] == "yes":
                    has_core_child = True
                    children.append(child)
                elif memo[child] == "unknown":
                    incomplete = True
            stack.extend(reversed(children))
            if not has_core_child:
                minimal.append(current)

        if incomplete:
            self._logger.warning("Minimal core search hit undecided subsets", extra={"evaluated": len(memo)})
        cores = sorted({tuple(sorted(m)) for m in minimal}, key=lambda s: (len(s), s))
        return MinimalCoresReport(
            cores=tuple(self.is_core_network(network, core, budget) for core in cores),
            incomplete=incomplete,
            evaluated=len(memo)
        )

    @error_handler
    def agree_on_window(
            self,
            network: ReactionNetwork,
            sub: Iterable[int],
            window: Window,
            budget: int | None = None
    ) -> AgreementReport:
        """Compares forward reachability of a sub-network and the network from every window state."""
        sub_network = network.restrict(self._checked_sub(network, sub))
        mismatches = []
        undecided = False
        compared = 0
        for x in window.states():
            full, _ = self._reach.forward_closure(network, x, window, budget)
            part, part_left = self._reach.forward_closure(sub_network, x, window, budget)
            compared += 1
            if full == part:
                continue
            # the sub-network closure is exact when it never left the window
            if not part_left:
                mismatches.append((x, min(full - part)))
            else:
                undecided = True
        agree = "no" if mismatches else ("unknown" if undecided else "yes")
        return AgreementReport(agree=agree, mismatches=tuple(mismatches), compared=compared)
