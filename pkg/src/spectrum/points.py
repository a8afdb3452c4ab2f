"""Points of the glued spectrum Sp(A) and the blockwise distance."""

import math
from dataclasses import dataclass
from fractions import Fraction
from numbers import Rational
from typing import Union

Number = Union[int, Fraction, str]


def as_fraction(value: Number) -> Fraction:
    """Exact conversion; floats are rejected so no rounding sneaks in."""
    if isinstance(value, Fraction):
        return value
    if isinstance(value, bool):
        raise TypeError("booleans are not rationals")
    if isinstance(value, (int, Rational)):
        return Fraction(value)
    if isinstance(value, str):
        return Fraction(value.strip())
    raise TypeError(f"expected an exact rational, got {type(value).__name__}")


@dataclass(frozen=True, order=True)
class Theta:
    """The point of Sp(F1) belonging to block j."""

    j: int

    def __str__(self) -> str:
        return f"theta{self.j}"


@dataclass(frozen=True, order=True)
class Interior:
    """Coordinate t of the interval block i; t in {0, 1} is a raw, non-canonical endpoint."""

    i: int
    t: Fraction

    def __post_init__(self):
        object.__setattr__(self, 't', as_fraction(self.t))
        if not 0 <= self.t <= 1:
            raise ValueError(f"coordinate {self.t} outside [0,1]")

    @property
    def is_endpoint(self) -> bool:
        return self.t == 0 or self.t == 1

    def __str__(self) -> str:
        return f"({self.t},{self.i})"


SpectrumPoint = Union[Theta, Interior]


def dist(x: SpectrumPoint, y: SpectrumPoint) -> Union[Fraction, float]:
    """
    |t - t'| inside one interval block, 0 for identical thetas, infinite otherwise.
    """
    if isinstance(x, Interior) and isinstance(y, Interior) and x.i == y.i:
        return abs(x.t - y.t)
    if isinstance(x, Theta) and isinstance(y, Theta) and x.j == y.j:
        return Fraction(0)
    return math.inf
