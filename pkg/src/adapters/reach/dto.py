from enum import Enum
from itertools import product
from typing import Iterator, Literal

from pydantic import BaseModel, ConfigDict, Field, field_validator

from src.adapters.network.dto import State

TriState = Literal["yes", "no", "unknown"]


def tri_and(*values: TriState) -> TriState:
    if "no" in values:
        return "no"
    return "unknown" if "unknown" in values else "yes"


def tri_or(*values: TriState) -> TriState:
    if "yes" in values:
        return "yes"
    return "unknown" if "unknown" in values else "no"


def tri_not(value: TriState) -> TriState:
    return {"yes": "no", "no": "yes", "unknown": "unknown"}[value]


class Window(BaseModel):
    """Box [0, bounds] in every coordinate, bounds inclusive."""
    model_config = ConfigDict(frozen=True)

    bounds: tuple[int, ...]

    @field_validator("bounds")
    @classmethod
    def non_negative(cls, bounds):
        if any(b < 0 for b in bounds):
            raise ValueError("window bounds must be non-negative")
        return bounds

    @classmethod
    def cube(cls, dimension: int, bound: int) -> "Window":
        return cls(bounds=tuple([bound] * dimension))

    @classmethod
    def around(cls, points, padding: int) -> "Window":
        return cls(bounds=tuple(max(coords) + padding for coords in zip(*points)))

    def contains(self, x: State) -> bool:
        return len(x) == len(self.bounds) and all(0 <= a <= b for a, b in zip(x, self.bounds))

    def states(self) -> Iterator[State]:
        return product(*(range(b + 1) for b in self.bounds))

    @property
    def size(self) -> int:
        size = 1
        for b in self.bounds:
            size *= b + 1
        return size


class Reachability(BaseModel):
    model_config = ConfigDict(frozen=True)

    value: TriState
    path: tuple[int, ...] | None = None       # reaction indices, replayable from the source
    target: State | None = None
    reason: str | None = None
    expansions: int = 0


class StateLabel(str, Enum):
    NEUTRAL = "neutral"
    TRAPPING = "trapping"
    ESCAPING = "escaping"
    PIC = "PIC-member"
    QIC = "QIC-member"
    UNCERTAIN = "boundary-uncertain"


class WindowClass(BaseModel):
    model_config = ConfigDict(frozen=True)

    id: int
    states: tuple[State, ...]
    label: StateLabel
    closed: bool


class WindowDecomposition(BaseModel):
    model_config = ConfigDict(frozen=True)

    window: Window
    classes: tuple[WindowClass, ...]
    assignment: dict[State, int] = Field(repr=False)

    def class_of(self, x: State) -> WindowClass:
        return self.classes[self.assignment[tuple(x)]]

    def label_of(self, x: State) -> StateLabel:
        return self.class_of(x).label

    def states_with_label(self, label: StateLabel) -> list[State]:
        return sorted(x for c in self.classes if c.label == label for x in c.states)

    def non_singleton_states(self) -> list[State]:
        return sorted(x for c in self.classes if len(c.states) > 1 for x in c.states)

    def restrict_to_class(self, x: State) -> tuple[State, ...]:
        return self.class_of(x).states
