from collections import deque
from typing import Callable, Iterable
import logging

from src.adapters.common import error_handler
from src.adapters.lattice.service import LatticeService
from src.adapters.network.dto import ReactionNetwork, State
from src.adapters.network.service import NetworkService
from ..dao import AbstractComponentFinder
from ..dto import Window, Reachability, StateLabel, WindowClass, WindowDecomposition
from src.exceptions import WindowError, NotOneDimensionalError


def _add(x, v) -> State:
    return tuple(a + b for a, b in zip(x, v))


def _sub(x, v) -> State:
    return tuple(a - b for a, b in zip(x, v))


def _geq(x, y) -> bool:
    return all(a >= b for a, b in zip(x, y))


class ReachService:
    def __init__(
            self,
            network_service: NetworkService,
            lattice_service: LatticeService,
            component_finder: AbstractComponentFinder,
            budget: int = 1_000_000,
            window_bound: int = 1000,
            logger: logging.Logger | None = None
    ):
        self._network = network_service
        self._lattice = lattice_service
        self._components = component_finder
        self._budget = budget
        self._window_bound = window_bound
        self._logger = logger or logging.getLogger(__name__)

    def default_window(self, network: ReactionNetwork) -> Window:
        return Window.cube(network.dimension, self._window_bound)

    @staticmethod
    def successors(network: ReactionNetwork, x: State) -> list[tuple[State, int]]:
        return [
            (_add(x, reaction.vector), index)
            for index, reaction in enumerate(network.reactions)
            if _geq(x, reaction.reactant)
        ]

    @staticmethod
    def replay(network: ReactionNetwork, x: State, path: Iterable[int]) -> list[State]:
        """States visited by applying the reactions of path from x; raises if a step is not enabled."""
        states = [tuple(x)]
        for index in path:
            reaction = network.reactions[index]
            if not _geq(states[-1], reaction.reactant):
                raise ValueError(f"reaction {index + 1} is not enabled at {states[-1]}")
            states.append(_add(states[-1], reaction.vector))
        return states

    @error_handler
    def search(
            self,
            network: ReactionNetwork,
            x: State,
            goal: Callable[[State], bool],
            budget: int | None = None,
            window: Window | None = None
    ) -> Reachability:
        """Breadth-first search inside the window for the first state satisfying goal."""
        x = tuple(x)
        budget = budget or self._budget
        window = window or self.default_window(network)
        if not window.contains(x):
            raise WindowError("source state outside the search window", state=x, bounds=window.bounds)
        if goal(x):
            return Reachability(value="yes", path=(), target=x)

        parents: dict[State, tuple[State, int] | None] = {x: None}
        queue = deque([x])
        expansions = 0
        left_window = False
        while queue:
            if expansions >= budget:
                self._logger.warning("Reachability budget exhausted", extra={"source": x, "budget": budget})
                return Reachability(value="unknown", reason="budget exhausted", expansions=expansions)
            state = queue.popleft()
            expansions += 1
            for nxt, index in self.successors(network, state):
                if nxt in parents:
                    continue
                if not window.contains(nxt):
                    left_window = True
                    continue
                parents[nxt] = (state, index)
                if goal(nxt):
                    path = []
                    node = nxt
                    while parents[node] is not None:
                        node, step = parents[node]
                        path.append(step)
                    return Reachability(value="yes", path=tuple(reversed(path)), target=nxt, expansions=expansions)
                queue.append(nxt)

        if left_window:
            return Reachability(value="unknown", reason="forward closure leaves the window", expansions=expansions)
        return Reachability(value="no", reason="forward closure exhausted inside the window", expansions=expansions)

    def forward_closure(
            self,
            network: ReactionNetwork,
            x: State,
            window: Window,
            budget: int | None = None
    ) -> tuple[set[State], bool]:
        """States reachable from x without leaving the window, and whether some path left it."""
        budget = budget or self._budget
        seen = {tuple(x)}
        queue = deque(seen)
        left_window = False
        while queue:
            if len(seen) > budget:
                return seen, True
            state = queue.popleft()
            for nxt, _ in self.successors(network, state):
                if nxt in seen:
                    continue
                if not window.contains(nxt):
                    left_window = True
                    continue
                seen.add(nxt)
                queue.append(nxt)
        return seen, left_window

    @error_handler
    def reachable(
            self,
            network: ReactionNetwork,
            x: State,
            y: State,
            budget: int | None = None,
            window: Window | None = None
    ) -> Reachability:
        x, y = tuple(x), tuple(y)
        if x == y:
            return Reachability(value="yes", path=(), target=y)
        omegas = list(dict.fromkeys(network.vectors))
        if not omegas:
            return Reachability(value="no", reason="network has no reactions")
        delta = _sub(y, x)
        # every path adds a non-negative integer combination of reaction vectors
        if not self._lattice.cone_contains(omegas, delta).contained:
            return Reachability(value="no", reason="difference outside the cone of reaction vectors")
        if not self._lattice.integer_span_contains(omegas, delta):
            return Reachability(value="no", reason="difference outside the integer lattice of reaction vectors")
        # the last step of any path ends at or above its product complex
        if not self._lattice.upward_contains([r.product for r in network.reactions], y):
            return Reachability(value="no", reason="target dominates no product complex")

        window = window or self.default_window(network)
        if not window.contains(y):
            raise WindowError("target state outside the search window", state=y, bounds=window.bounds)
        return self.search(network, x, lambda s: s == y, budget=budget, window=window)

    def compatibility_class(self, network: ReactionNetwork, c: State, window: Window) -> list[State]:
        """States of (c + span of reaction vectors) inside the window."""
        normals = self._lattice.orthogonal_complement(network.vectors, network.dimension)
        return [
            x for x in window.states()
            if all(sum(n * (a - b) for n, a, b in zip(normal, x, c)) == 0 for normal in normals)
        ]

    @error_handler
    def decompose_window(
            self,
            network: ReactionNetwork,
            window: Window,
            members: Callable[[State], bool] | None = None
    ) -> WindowDecomposition:
        """
        Strongly connected classes of the window states with their labels.
        A class is UNCERTAIN when it reaches a transition leaving the window and some state outside the window
        leads into it or into a class upstream of it. A class that leaves the window but is never entered from
        outside keeps its ordinary label.
        :param members: keep only the window states satisfying this predicate
        """
        states = [x for x in window.states() if members is None or members(x)]
        index = {x: i for i, x in enumerate(states)}
        edges: list[tuple[int, int]] = []
        exits = [False] * len(states)
        entries = [False] * len(states)
        has_predecessor = [False] * len(states)

        for i, x in enumerate(states):
            for nxt, _ in self.successors(network, x):
                j = index.get(nxt)
                if j is None:
                    exits[i] = True
                else:
                    edges.append((i, j))
            for reaction in network.reactions:
                previous = _sub(x, reaction.vector)
                if _geq(previous, reaction.reactant):
                    has_predecessor[i] = True
                    if previous not in index:
                        entries[i] = True

        labels = self._components.strong_components(len(states), edges)
        members_of: dict[int, list[int]] = {}
        for i, label in enumerate(labels):
            members_of.setdefault(label, []).append(i)

        successors_of = {label: set() for label in members_of}
        predecessors_of = {label: set() for label in members_of}
        for i, j in edges:
            if labels[i] != labels[j]:
                successors_of[labels[i]].add(labels[j])
                predecessors_of[labels[j]].add(labels[i])

        order = self._topological_order(successors_of, predecessors_of)
        # a class is only certain if it cannot both leave the window and be re-entered from outside
        reaches_exit = {label: any(exits[i] for i in members_of[label]) for label in members_of}
        for label in reversed(order):
            reaches_exit[label] = reaches_exit[label] or any(reaches_exit[s] for s in successors_of[label])
        entered = {label: any(entries[i] for i in members_of[label]) for label in members_of}
        for label in order:
            entered[label] = entered[label] or any(entered[p] for p in predecessors_of[label])

        classes = []
        assignment: dict[State, int] = {}
        for class_id, label in enumerate(order):
            nodes = members_of[label]
            closed = not successors_of[label] and not any(exits[i] for i in nodes)
            if reaches_exit[label] and entered[label]:
                kind = StateLabel.UNCERTAIN
            elif len(nodes) > 1:
                kind = StateLabel.PIC if closed else StateLabel.QIC
            elif closed:
                kind = StateLabel.TRAPPING if has_predecessor[nodes[0]] else StateLabel.NEUTRAL
            else:
                kind = StateLabel.ESCAPING
            class_states = tuple(sorted(states[i] for i in nodes))
            classes.append(WindowClass(id=class_id, states=class_states, label=kind, closed=closed))
            for x in class_states:
                assignment[x] = class_id

        self._logger.info(
            "Window decomposed",
            extra={"states": len(states), "classes": len(classes), "bounds": window.bounds}
        )
        return WindowDecomposition(window=window, classes=tuple(classes), assignment=assignment)

    @staticmethod
    def _topological_order(successors_of, predecessors_of) -> list[int]:
        indegree = {label: len(preds) for label, preds in predecessors_of.items()}
        queue = deque(sorted(label for label, degree in indegree.items() if degree == 0))
        order = []
        while queue:
            label = queue.popleft()
            order.append(label)
            for nxt in sorted(successors_of[label]):
                indegree[nxt] -= 1
                if indegree[nxt] == 0:
                    queue.append(nxt)
        return order

    @error_handler
    def k_set(self, network: ReactionNetwork, c: State, window: Window) -> list[State]:
        """L_c intersected with the union of (up I+ and up O-) and (up I- and up O+)."""
        direction = self._lattice.gcd_vector_set(network.vectors) if network.reactions else None
        if direction is None:
            raise NotOneDimensionalError(
                "K set needs a one-dimensional stoichiometric subspace",
                dimension=self._lattice.span_dimension(network.vectors)
            )
        jumps = self._network.jump_structure(network)
        up = self._lattice.upward_contains
        return [
            x for x in self.compatibility_class(network, c, window)
            if (up(jumps.inputs_positive, x) and up(jumps.outputs_negative, x))
            or (up(jumps.inputs_negative, x) and up(jumps.outputs_positive, x))
        ]
