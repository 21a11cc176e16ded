from fractions import Fraction
from typing import Literal

from pydantic import BaseModel, ConfigDict, computed_field

from src.adapters.lattice.dto import PrimitiveDirection
from src.adapters.network.dto import State, Vector, Rational
from src.adapters.reach.dto import StateLabel, TriState

Infinity = Literal["+inf"]

CONJECTURE_NOTE = (
    "alpha = beta = 0 with R = 2 is not decided by the threshold clauses; "
    "essential networks are conjectured to be null recurrent here "
    "(S <-> 2S -> 3S is a known null recurrent birth-death instance)"
)


class OneDimProfile(BaseModel):
    model_config = ConfigDict(frozen=True)

    direction: PrimitiveDirection
    catalysts: tuple[int, ...]
    r: int
    r_plus: int | None      # None when no reaction moves along +omega*
    r_minus: int | None
    h2_ok: bool
    h3_ok: bool
    h4_ok: bool
    conservative: bool
    linear_in_first: bool   # every reactant is S1 plus catalysts
    suggested_order: tuple[str, ...] | None = None


class LatticeLine(BaseModel):
    """
    L_c as the progression base + n * step for n >= 0.
    Under a non-negative direction the progression is bounded below only.
    """
    model_config = ConfigDict(frozen=True)

    representative: State
    direction: PrimitiveDirection
    base: State
    representative_index: int

    @property
    def step(self) -> Vector:
        return self.direction.step

    def point(self, n: int) -> State:
        return tuple(b + n * s for b, s in zip(self.base, self.step))

    def index_of(self, x: State) -> int | None:
        """Index of x on the line, None if x is not on it."""
        support = self.direction.support
        j = support[0]
        offset, remainder = divmod(x[j] - self.base[j], self.step[j])
        if remainder or offset < 0 or self.point(offset) != tuple(x):
            return None
        return offset

    def residue(self, n: int) -> int:
        """Class label k in 1..omega** of the point with index n."""
        return 1 + (n - self.representative_index) % self.direction.scale

    def points(self, start: int, stop: int) -> list[State]:
        return [self.point(n) for n in range(start, stop)]


class Interval(BaseModel):
    """Index interval [start, stop[ on a lattice line; stop None is unbounded."""
    model_config = ConfigDict(frozen=True)

    start: int
    stop: int | None

    @property
    def empty(self) -> bool:
        return self.stop is not None and self.stop <= self.start

    @property
    def finite(self) -> bool:
        return self.stop is not None

    def contains(self, n: int) -> bool:
        return n >= self.start and (self.stop is None or n < self.stop)

    def indices(self, limit: int | None = None) -> range:
        stop = self.stop if self.stop is not None else limit
        if stop is None:
            raise ValueError("unbounded interval needs a limit")
        if limit is not None:
            stop = min(stop, limit)
        return range(self.start, max(self.start, stop))


class Progression(BaseModel):
    """Gamma_c^(k) restricted to K_c: start, start + omega**, ..."""
    model_config = ConfigDict(frozen=True)

    k: int
    start: int
    stride: int
    label: StateLabel
    first_point: State

    def contains(self, n: int) -> bool:
        return n >= self.start and (n - self.start) % self.stride == 0


class ClassGeometry(BaseModel):
    model_config = ConfigDict(frozen=True)

    line: LatticeLine
    i: int | None
    i_plus: int | None
    o: int | None
    o_minus: int | None
    c_lower: int | None
    c_upper: tuple[int | Infinity, ...]
    neutral: Interval
    trapping: Interval
    escaping: Interval
    nonsingleton: Interval
    sigma_plus: tuple[int, ...]
    sigma_minus: tuple[int, ...]
    sigma_plus_count: int
    progressions: tuple[Progression, ...]

    @property
    def has_pic(self) -> TriState:
        return "yes" if any(p.label == StateLabel.PIC for p in self.progressions) else "no"

    @property
    def has_qic(self) -> TriState:
        return "yes" if any(p.label == StateLabel.QIC for p in self.progressions) else "no"

    def label_of(self, x: State) -> StateLabel | None:
        """Label of a state of L_c, None off the line."""
        n = self.line.index_of(x)
        if n is None:
            return None
        if self.neutral.contains(n):
            return StateLabel.NEUTRAL
        if self.trapping.contains(n):
            return StateLabel.TRAPPING
        if self.escaping.contains(n):
            return StateLabel.ESCAPING
        for progression in self.progressions:
            if progression.contains(n):
                return progression.label
        return None

    def progression_of(self, x: State) -> Progression | None:
        n = self.line.index_of(x)
        if n is None:
            return None
        return next((p for p in self.progressions if p.contains(n)), None)


class ThresholdParams(BaseModel):
    model_config = ConfigDict(frozen=True, arbitrary_types_allowed=True)

    r: int
    alpha: Rational
    gamma: Rational
    theta: Rational
    beta: Rational
    drift_coefficients: tuple[Rational, ...]          # ascending powers of x1
    second_moment_coefficients: tuple[Rational, ...]
    degenerate: bool = False

    @computed_field
    @property
    def drift_degree(self) -> int:
        nonzero = [p for p, a in enumerate(self.drift_coefficients) if a != 0]
        return nonzero[-1] if nonzero else -1

    def scaled(self, factor: Fraction) -> "ThresholdParams":
        return ThresholdParams(
            r=self.r,
            alpha=self.alpha * factor,
            gamma=self.gamma * factor,
            theta=self.theta * factor,
            beta=self.beta * factor,
            drift_coefficients=tuple(a * factor for a in self.drift_coefficients),
            second_moment_coefficients=tuple(a * factor for a in self.second_moment_coefficients),
            degenerate=self.degenerate
        )


class Verdict(BaseModel):
    """A decision value and the threshold condition that produced it."""
    model_config = ConfigDict(frozen=True)

    value: str
    clause: str | None = None
    note: str | None = None


class TailVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    stationary: Verdict
    qsd: Verdict


class DynamicsVerdict(BaseModel):
    model_config = ConfigDict(frozen=True)

    explosive: Verdict
    recurrence: Verdict
    exp_ergodic: Verdict
    extinction_as: Verdict
    quasi_ergodic: Verdict
    tail: TailVerdict


class EndotacticReport(BaseModel):
    model_config = ConfigDict(frozen=True)

    applies: bool
    source: Literal["weakly-reversible", "flag"] | None = None
    r_minus_exceeds_r_plus: bool | None = None
    non_explosive: bool | None = None
    exp_ergodic_on_pics: bool | None = None
    uniform_qsd_on_qics: bool | None = None
    stationary_tail: str | None = None
