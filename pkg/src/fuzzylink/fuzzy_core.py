"""Triangular fuzzy numbers, alpha-cuts and defuzzification."""
from __future__ import annotations

import enum
import math
from dataclasses import dataclass
from typing import Sequence

import numpy as np

ATOL = 1e-9


class ShoulderKind(enum.Enum):
    """Which side of the mode (if any) plateaus at membership 1.

    ``LEFT`` keeps membership 1 for every x below the mode, ``RIGHT`` for
    every x above it.  Shoulders are used for the outermost terms of a
    partition so that the universe edges stay fully covered.
    """

    NONE = "none"
    LEFT = "left"
    RIGHT = "right"


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self) -> None:
        if not self.lo <= self.hi:
            raise ValueError(f"interval requires lo <= hi, got [{self.lo}, {self.hi}]")

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval", atol: float = ATOL) -> bool:
        return self.lo - atol <= other.lo and other.hi <= self.hi + atol

    def __iter__(self):
        yield self.lo
        yield self.hi


@dataclass(frozen=True)
class TriangularFuzzyNumber:
    """A triangular fuzzy number ``(a, b, c)`` with support ``[a, c]`` and mode ``b``."""

    a: float
    b: float
    c: float

    def __post_init__(self) -> None:
        if not all(math.isfinite(v) for v in (self.a, self.b, self.c)):
            raise ValueError(f"non-finite vertex in {self.as_tuple()}")
        if not (self.a <= self.b <= self.c):
            raise ValueError(f"triangular fuzzy number requires a <= b <= c, got {self.as_tuple()}")

    @classmethod
    def crisp(cls, value: float) -> "TriangularFuzzyNumber":
        return cls(value, value, value)

    def as_tuple(self) -> tuple[float, float, float]:
        return (self.a, self.b, self.c)

    def scaled(self, factor: float) -> "TriangularFuzzyNumber":
        return TriangularFuzzyNumber(self.a * factor, self.b * factor, self.c * factor)

    def __iter__(self):
        return iter(self.as_tuple())


TFN = TriangularFuzzyNumber


def _check_shoulder(tfn: TriangularFuzzyNumber, shoulder: ShoulderKind) -> None:
    if shoulder is ShoulderKind.LEFT and tfn.a != tfn.b:
        raise ValueError(f"left shoulder requires a == b, got {tfn.as_tuple()}")
    if shoulder is ShoulderKind.RIGHT and tfn.b != tfn.c:
        raise ValueError(f"right shoulder requires b == c, got {tfn.as_tuple()}")


def membership(tfn: TriangularFuzzyNumber, shoulder: ShoulderKind, x):
    """Membership degree of ``x`` (scalar or array) in ``tfn``.

    Works elementwise on numpy arrays; returns a float for scalar input.
    """
    _check_shoulder(tfn, shoulder)
    a, b, c = tfn.a, tfn.b, tfn.c
    xs = np.asarray(x, dtype=float)
    mu = np.zeros_like(xs)

    if b > a:
        rising = (xs >= a) & (xs <= b)
        mu = np.where(rising, (xs - a) / (b - a), mu)
    if c > b:
        falling = (xs >= b) & (xs <= c)
        mu = np.where(falling, (c - xs) / (c - b), mu)
    mu = np.where(xs == b, 1.0, mu)
    if shoulder is ShoulderKind.LEFT:
        mu = np.where(xs <= b, 1.0, mu)
    elif shoulder is ShoulderKind.RIGHT:
        mu = np.where(xs >= b, 1.0, mu)

    mu = np.clip(mu, 0.0, 1.0)
    if mu.ndim == 0:
        return float(mu)
    return mu


def alpha_cut(tfn: TriangularFuzzyNumber, alpha: float) -> Interval:
    if not 0.0 <= alpha <= 1.0:
        raise ValueError(f"alpha must lie in [0, 1], got {alpha}")
    if alpha == 0.0:
        return Interval(tfn.a, tfn.c)
    if alpha == 1.0:
        return Interval(tfn.b, tfn.b)
    lo = tfn.a + (tfn.b - tfn.a) * alpha
    hi = tfn.c - (tfn.c - tfn.b) * alpha
    # rounding can push lo a hair past hi on near-degenerate numbers
    return Interval(min(lo, hi), max(lo, hi))


def centroid_defuzzify(tfn: TriangularFuzzyNumber) -> float:
    """Centroid of the triangle, i.e. the mean of its three vertices."""
    return (tfn.a + tfn.b + tfn.c) / 3.0


def normalize(values: Sequence[float]) -> list[float]:
    arr = np.asarray(values, dtype=float)
    if arr.size == 0:
        raise ValueError("cannot normalize an empty sequence")
    if np.any(arr < 0):
        raise ValueError(f"normalize expects non-negative values, got {list(values)}")
    total = math.fsum(arr.tolist())
    if total <= 0:
        raise ValueError("cannot normalize: all values are zero")
    return [v / total for v in arr.tolist()]
