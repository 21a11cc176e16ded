from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Sequence
import logging

import sympy
from sympy.solvers.simplex import linprog, InfeasibleLPError, UnboundedLPError

from src.adapters.lattice.dto import LinearProgramResult


def _rational(value) -> sympy.Rational:
    value = Fraction(value)
    return sympy.Rational(value.numerator, value.denominator)


def _fraction(value) -> Fraction:
    value = sympy.Rational(value)
    return Fraction(int(value.p), int(value.q))


class AbstractLinearSolver(ABC):
    @abstractmethod
    def minimize(
            self,
            cost: Sequence[Fraction],
            a_eq: Sequence[Sequence[Fraction]],
            b_eq: Sequence[Fraction]
    ) -> LinearProgramResult:
        """
        Solves min cost.x subject to a_eq x = b_eq, x >= 0 exactly.
        :param cost: objective coefficients, one per variable
        :param a_eq: equality constraint rows
        :param b_eq: right-hand sides
        :return: status with an optimal vertex when one exists
        """
        raise NotImplementedError()

    def feasible_point(
            self,
            a_eq: Sequence[Sequence[Fraction]],
            b_eq: Sequence[Fraction],
            variables: int
    ) -> tuple[Fraction, ...] | None:
        result = self.minimize([Fraction(0)] * variables, a_eq, b_eq)
        return result.point if result.status == "optimal" else None


class SympyLinearSolver(AbstractLinearSolver):
    """Exact rational LP through sympy's simplex; equalities enter as paired inequalities."""

    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)

    def minimize(self, cost, a_eq, b_eq) -> LinearProgramResult:
        n = len(cost)
        rows = [[_rational(v) for v in row] for row in a_eq]
        rhs = [_rational(v) for v in b_eq]
        if any(len(row) != n for row in rows) or len(rows) != len(rhs):
            raise ValueError("constraint matrix shape does not match the objective")
        if not rows:
            if any(Fraction(c) < 0 for c in cost):
                return LinearProgramResult(status="unbounded")
            return LinearProgramResult(status="optimal", point=tuple([Fraction(0)] * n), value=Fraction(0))

        a_ub = rows + [[-v for v in row] for row in rows]
        b_ub = rhs + [-v for v in rhs]
        try:
            value, point = linprog([_rational(c) for c in cost], a_ub, b_ub)
        except InfeasibleLPError:
            self._logger.debug("Linear program infeasible", extra={"rows": len(rows), "variables": n})
            return LinearProgramResult(status="infeasible")
        except UnboundedLPError:
            return LinearProgramResult(status="unbounded")
        return LinearProgramResult(
            status="optimal",
            point=tuple(_fraction(x) for x in point),
            value=_fraction(value)
        )
