from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, model_validator

from src.adapters.network.dto import Vector


class PrimitiveDirection(BaseModel):
    """omega* (vector), omega** (scale) and the support of omega*."""
    model_config = ConfigDict(frozen=True)

    vector: Vector
    scale: int
    support: tuple[int, ...]

    @model_validator(mode="after")
    def check_normalized(self) -> "PrimitiveDirection":
        nonzero = [v for v in self.vector if v != 0]
        if not nonzero or nonzero[0] <= 0:
            raise ValueError("first nonzero coordinate of a direction must be positive")
        if self.scale <= 0 or any(v % self.scale for v in self.vector):
            raise ValueError("scale must be a positive divisor of every coordinate")
        return self

    @property
    def step(self) -> Vector:
        """omega*/omega**, the primitive integer step along the line."""
        return tuple(v // self.scale for v in self.vector)

    def seminorm(self, x) -> int:
        return sum(abs(x[j]) for j in self.support)

    def sign(self, omega: Vector) -> int:
        dot = sum(a * b for a, b in zip(omega, self.vector))
        return (dot > 0) - (dot < 0)

    def multiple(self, omega: Vector) -> Fraction:
        """omega = multiple * vector for omega on the line."""
        j = self.support[0]
        return Fraction(omega[j], self.vector[j])


class PositiveIndependence(BaseModel):
    """
    Gordan alternative: either a nonzero non-negative integer combination summing
    to zero (witness) or an integer vector with positive product against every vector (separator).
    """
    model_config = ConfigDict(frozen=True)

    independent: bool
    witness: tuple[int, ...] | None = None
    separator: Vector | None = None


class ConservationLaw(BaseModel):
    model_config = ConfigDict(frozen=True)

    conservative: bool
    law: tuple[int, ...] | None = None


class ConeMembership(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    contained: bool
    coefficients: tuple[Fraction, ...] | None = None


class LinearProgramResult(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    status: Literal["optimal", "infeasible", "unbounded"]
    point: tuple[Fraction, ...] | None = None
    value: Fraction | None = None
