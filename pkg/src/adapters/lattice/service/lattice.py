from fractions import Fraction
from typing import Iterable, Sequence
import logging
import math

import sympy
from sympy.matrices.normalforms import hermite_normal_form

from ..dao import AbstractLinearSolver
from ..dto import PrimitiveDirection, PositiveIndependence, ConservationLaw, ConeMembership
from src.adapters.common import error_handler
from src.adapters.network.dto import ReactionNetwork, State, Vector
from src.exceptions import LatticeError


def _integral(values: Sequence[Fraction]) -> tuple[int, ...]:
    """Smallest positive multiple of a rational vector that is a primitive integer vector."""
    scale = math.lcm(*(Fraction(v).denominator for v in values)) if values else 1
    ints = [int(Fraction(v) * scale) for v in values]
    g = math.gcd(*ints) if ints else 0
    return tuple(v // g for v in ints) if g > 1 else tuple(ints)


def _dot(a, b):
    return sum(x * y for x, y in zip(a, b))


class LatticeService:
    def __init__(self, solver: AbstractLinearSolver, logger: logging.Logger | None = None):
        self._solver = solver
        self._logger = logger or logging.getLogger(__name__)

    @error_handler
    def gcd_vector_set(self, vectors: Iterable[Vector]) -> PrimitiveDirection | None:
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise LatticeError("gcd of an empty vector set is undefined")
        if any(not any(v) for v in vectors):
            raise LatticeError("gcd is undefined for a set containing the zero vector",
                               context={"vectors": vectors})
        if self.span_dimension(vectors) != 1:
            return None

        first = vectors[0]
        primitive = [c // math.gcd(*first) for c in first]
        lead = next(j for j, c in enumerate(primitive) if c != 0)
        if primitive[lead] < 0:
            primitive = [-c for c in primitive]

        multiples = [v[lead] // primitive[lead] for v in vectors]
        scale = math.gcd(*multiples)
        vector = tuple(scale * c for c in primitive)
        return PrimitiveDirection(
            vector=vector,
            scale=scale,
            support=tuple(j for j, c in enumerate(vector) if c != 0)
        )

    @staticmethod
    def minimal_set(states: Iterable[State]) -> tuple[State, ...]:
        unique = list(dict.fromkeys(tuple(s) for s in states))
        return tuple(
            x for x in unique
            if not any(y != x and all(a >= b for a, b in zip(x, y)) for y in unique)
        )

    @staticmethod
    def upward_contains(antichain: Iterable[State], x: State) -> bool:
        return any(all(a >= b for a, b in zip(x, y)) for y in antichain)

    @staticmethod
    def span_dimension(vectors: Iterable[Vector]) -> int:
        vectors = [list(v) for v in vectors]
        if not vectors:
            return 0
        return sympy.Matrix(vectors).rank()

    @staticmethod
    def orthogonal_complement(vectors: Iterable[Vector], dimension: int) -> list[tuple[int, ...]]:
        """Integer basis of the vectors orthogonal to every given vector."""
        vectors = [list(v) for v in vectors if any(v)]
        if not vectors:
            return [tuple(int(i == j) for i in range(dimension)) for j in range(dimension)]
        return [
            _integral([Fraction(int(v.p), int(v.q)) for v in basis])
            for basis in sympy.Matrix(vectors).nullspace()
        ]

    def in_span(self, generators: Iterable[Vector], vector: Vector) -> bool:
        generators = [tuple(g) for g in generators]
        return self.span_dimension(generators) == self.span_dimension(generators + [tuple(vector)])

    @error_handler
    def positively_linearly_independent(self, vectors: Iterable[Vector]) -> PositiveIndependence:
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            raise LatticeError("positive independence needs a nonempty vector set")
        d = len(vectors[0])
        k = len(vectors)

        # nonzero c >= 0 with sum c_w w = 0, normalized by sum c = 1
        rows = [[Fraction(v[j]) for v in vectors] for j in range(d)]
        rows.append([Fraction(1)] * k)
        rhs = [Fraction(0)] * d + [Fraction(1)]
        point = self._solver.feasible_point(rows, rhs, k)
        if point is not None:
            witness = _integral(point)
            self._logger.debug("Positive dependence found", extra={"witness": witness})
            return PositiveIndependence(independent=False, witness=witness)

        # otherwise Gordan gives v with v.w >= 1 for all w; v = v_plus - v_minus, slacks s_w
        rows = []
        for index, v in enumerate(vectors):
            slack = [Fraction(-1) if i == index else Fraction(0) for i in range(k)]
            rows.append([Fraction(c) for c in v] + [Fraction(-c) for c in v] + slack)
        point = self._solver.feasible_point(rows, [Fraction(1)] * k, 2 * d + k)
        if point is None:
            raise LatticeError("neither a dependence nor a separator was found", context={"vectors": vectors})
        separator = _integral([point[j] - point[d + j] for j in range(d)])
        return PositiveIndependence(independent=True, separator=separator)

    @error_handler
    def conservation_law(self, vectors: Iterable[Vector], dimension: int) -> ConservationLaw:
        vectors = [tuple(v) for v in vectors]
        if not vectors:
            return ConservationLaw(conservative=True, law=tuple([1] * dimension))
        # v = 1 + u with u >= 0 and v.w = 0 for every w
        rows = [[Fraction(c) for c in v] for v in vectors]
        rhs = [Fraction(-sum(v)) for v in vectors]
        point = self._solver.feasible_point(rows, rhs, dimension)
        if point is None:
            return ConservationLaw(conservative=False)
        return ConservationLaw(conservative=True, law=_integral([1 + u for u in point]))

    def is_conservative(self, network: ReactionNetwork) -> bool:
        return self.conservation_law(network.vectors, network.dimension).conservative

    @error_handler
    def cone_contains(self, generators: Iterable[Vector], target: Vector) -> ConeMembership:
        generators = [tuple(g) for g in generators]
        if not any(target):
            return ConeMembership(contained=True, coefficients=tuple([Fraction(0)] * len(generators)))
        if not generators:
            return ConeMembership(contained=False)
        rows = [[Fraction(g[j]) for g in generators] for j in range(len(target))]
        point = self._solver.feasible_point(rows, [Fraction(t) for t in target], len(generators))
        if point is None:
            return ConeMembership(contained=False)
        return ConeMembership(contained=True, coefficients=point)

    @staticmethod
    def integer_span_contains(generators: Iterable[Vector], target: Vector) -> bool:
        """Membership in the integer lattice spanned by the generators."""
        generators = [tuple(g) for g in generators if any(g)]
        if not generators:
            return not any(target)
        # the Hermite basis has independent columns, so the coefficients are unique
        basis = hermite_normal_form(sympy.Matrix(generators).T)
        if basis.cols == 0:
            return not any(target)
        try:
            coefficients, _ = basis.gauss_jordan_solve(sympy.Matrix(list(target)))
        except ValueError:
            return False
        return all(c.is_integer for c in coefficients)
