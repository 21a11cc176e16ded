from fractions import Fraction
from decimal import Decimal
from typing import Annotated, Any

from pydantic import (
    BaseModel, ConfigDict, BeforeValidator, PlainSerializer, WithJsonSchema,
    field_validator, model_validator
)

# Complexes, states and reaction vectors are plain integer tuples in species order.
Complex = tuple[int, ...]
State = tuple[int, ...]
Vector = tuple[int, ...]


def to_fraction(value: Any) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise ValueError("boolean is not a rate")
    if isinstance(value, (int, Decimal)):
        return Fraction(value)
    if isinstance(value, float):
        return Fraction(value).limit_denominator(10**12)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise ValueError(f"cannot interpret {value!r} as an exact rational")


def format_rational(value: Fraction) -> str:
    if value.denominator == 1:
        return str(value.numerator)
    return f"{value.numerator}/{value.denominator}"


Rational = Annotated[
    Fraction,
    BeforeValidator(to_fraction),
    PlainSerializer(format_rational, return_type=str),
    WithJsonSchema({"type": "string", "pattern": r"^-?\d+(/\d+)?$"}),
]


class Reaction(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    reactant: Complex
    product: Complex
    rate: Rational

    @property
    def vector(self) -> Vector:
        return tuple(b - a for a, b in zip(self.reactant, self.product))

    @property
    def pair(self) -> tuple[Complex, Complex]:
        return self.reactant, self.product

    def scaled(self, factor: Fraction) -> "Reaction":
        return Reaction(reactant=self.reactant, product=self.product, rate=self.rate * factor)


class ReactionNetwork(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    species: tuple[str, ...]
    reactions: tuple[Reaction, ...]

    @field_validator("reactions")
    @classmethod
    def merge_duplicates(cls, reactions: tuple[Reaction, ...]) -> tuple[Reaction, ...]:
        merged: dict[tuple[Complex, Complex], Fraction] = {}
        for reaction in reactions:
            merged[reaction.pair] = merged.get(reaction.pair, Fraction(0)) + reaction.rate
        return tuple(
            Reaction(reactant=reactant, product=product, rate=rate)
            for (reactant, product), rate in merged.items()
        )

    @model_validator(mode="after")
    def check_dimensions(self) -> "ReactionNetwork":
        d = len(self.species)
        if len(set(self.species)) != d:
            raise ValueError("species names must be unique")
        for reaction in self.reactions:
            if len(reaction.reactant) != d or len(reaction.product) != d:
                raise ValueError(f"complex dimension differs from species count {d}")
            if min(reaction.reactant + reaction.product, default=0) < 0:
                raise ValueError("complex coefficients must be non-negative")
        return self

    @property
    def dimension(self) -> int:
        return len(self.species)

    @property
    def complexes(self) -> list[Complex]:
        seen: dict[Complex, None] = {}
        for reaction in self.reactions:
            seen.setdefault(reaction.reactant)
            seen.setdefault(reaction.product)
        return list(seen)

    @property
    def vectors(self) -> list[Vector]:
        return [reaction.vector for reaction in self.reactions]

    def species_index(self, name: str) -> int:
        return self.species.index(name)

    def restrict(self, indices) -> "ReactionNetwork":
        return ReactionNetwork(species=self.species, reactions=tuple(self.reactions[i] for i in sorted(indices)))

    def with_rates_scaled(self, factor) -> "ReactionNetwork":
        factor = to_fraction(factor)
        return ReactionNetwork(species=self.species, reactions=tuple(r.scaled(factor) for r in self.reactions))

    def reordered(self, order: list[str]) -> "ReactionNetwork":
        if sorted(order) != sorted(self.species):
            raise ValueError("new order must be a permutation of the species")
        perm = [self.species.index(name) for name in order]
        return ReactionNetwork(
            species=tuple(order),
            reactions=tuple(
                Reaction(
                    reactant=tuple(r.reactant[i] for i in perm),
                    product=tuple(r.product[i] for i in perm),
                    rate=r.rate
                ) for r in self.reactions
            )
        )


class ValidationReport(BaseModel):
    ok: bool
    violations: list[str] = []


class JumpStructure(BaseModel):
    model_config = ConfigDict(frozen=True)

    omegas: tuple[Vector, ...]
    reactant_minimal: dict[Vector, tuple[Complex, ...]]   # I_omega
    product_minimal: dict[Vector, tuple[Complex, ...]]    # O_omega = I_omega + omega
    inputs_minimal: tuple[Complex, ...]                   # minimal set of I
    outputs_minimal: tuple[Complex, ...]                  # minimal set of O
    inputs_positive: tuple[Complex, ...] = ()             # I+, filled only when a direction is known
    inputs_negative: tuple[Complex, ...] = ()
    outputs_positive: tuple[Complex, ...] = ()
    outputs_negative: tuple[Complex, ...] = ()
