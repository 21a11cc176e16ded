from abc import ABC, abstractmethod
from fractions import Fraction
from typing import Sequence
import logging

import sympy as sp

from src.adapters.network.dto import ReactionNetwork


def _to_fraction(value) -> Fraction:
    value = sp.Rational(value)
    return Fraction(int(value.p), int(value.q))


class AbstractDirectionalExpander(ABC):
    @abstractmethod
    def expand(
            self,
            network: ReactionNetwork,
            offsets: Sequence[Fraction],
            slopes: Sequence[Fraction]
    ) -> tuple[tuple[Fraction, ...], tuple[Fraction, ...]]:
        """
        Expands the first-coordinate drift and second moment along x_j = offsets_j + slopes_j * x.
        :return: (drift, second moment) coefficients in ascending powers of x
        """
        raise NotImplementedError()


class SympyDirectionalExpander(AbstractDirectionalExpander):
    def __init__(self, logger: logging.Logger | None = None):
        self._logger = logger or logging.getLogger(__name__)
        self._x = sp.Symbol("x")

    def _coefficients(self, expr) -> tuple[Fraction, ...]:
        expr = sp.expand(expr)
        if expr == 0:
            return (Fraction(0),)
        poly = sp.Poly(expr, self._x, domain="QQ")
        return tuple(_to_fraction(a) for a in reversed(poly.all_coeffs()))

    def expand(self, network, offsets, slopes):
        coords = [
            sp.Rational(a.numerator, a.denominator) + sp.Rational(s.numerator, s.denominator) * self._x
            for a, s in zip(map(Fraction, offsets), map(Fraction, slopes))
        ]
        drift = sp.Integer(0)
        second = sp.Integer(0)
        for reaction in network.reactions:
            rate = sp.Rational(reaction.rate.numerator, reaction.rate.denominator)
            intensity = rate * sp.Mul(*(
                coords[j] - i for j, y in enumerate(reaction.reactant) for i in range(y)
            ))
            jump = reaction.product[0] - reaction.reactant[0]
            drift += intensity * jump
            second += intensity * jump ** 2

        result = self._coefficients(drift), self._coefficients(second)
        self._logger.debug(
            "Directional polynomials expanded",
            extra={"drift_degree": len(result[0]) - 1, "second_degree": len(result[1]) - 1}
        )
        return result
