"""Compact metric spaces used throughout the package.

Points are plain Python values, tagged by the space they live in:

* interval / real line: ``float``
* circle: ``float`` angle reduced to ``[0, 2*pi)``
* symbolic: :class:`~nads.symbolic.Word`, a bi-infinite periodic 0/1 sequence
* product: ``tuple`` ``(p, q)`` of factor points

The product metric is the max metric and the circle uses arc length.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from itertools import product as _cartesian
from typing import Any, Sequence

import numpy as np

from nads.errors import SpaceMismatchError, UnsupportedOperationError
from nads.symbolic import Word, symbolic_distance, symbolic_distance_exact, window_radius

TWO_PI = 2.0 * math.pi

INTERVAL = "interval"
CIRCLE = "circle"
SYMBOLIC = "symbolic"
PRODUCT = "product"


@dataclass(frozen=True)
class SpaceDescriptor:
    kind: str
    lo: float = 0.0
    hi: float = 1.0
    compact: bool = True
    factors: tuple["SpaceDescriptor", ...] = field(default=())

    def __post_init__(self):
        if self.kind not in (INTERVAL, CIRCLE, SYMBOLIC, PRODUCT):
            raise ValueError(f"unknown space kind {self.kind!r}")
        if self.kind == INTERVAL and not self.lo < self.hi:
            raise ValueError("interval needs lo < hi")
        if self.kind == PRODUCT and len(self.factors) != 2:
            raise ValueError("product space needs exactly two factors")

    @property
    def diameter(self) -> float:
        if self.kind == INTERVAL:
            return self.hi - self.lo
        if self.kind == CIRCLE:
            return math.pi
        if self.kind == SYMBOLIC:
            return 3.0
        return max(f.diameter for f in self.factors)

    @property
    def is_numeric(self) -> bool:
        """True for spaces whose points are single floats."""
        return self.kind in (INTERVAL, CIRCLE)

    def contains(self, p: Any) -> bool:
        if self.kind == INTERVAL:
            if not isinstance(p, (float, int, np.floating)) or isinstance(p, bool):
                return False
            return (not self.compact) or self.lo <= p <= self.hi
        if self.kind == CIRCLE:
            return isinstance(p, (float, int, np.floating)) and 0.0 <= p < TWO_PI
        if self.kind == SYMBOLIC:
            return isinstance(p, Word)
        return (
            isinstance(p, tuple)
            and len(p) == 2
            and self.factors[0].contains(p[0])
            and self.factors[1].contains(p[1])
        )

    def __str__(self) -> str:
        if self.kind == INTERVAL:
            tag = "" if self.compact else " (non-compact, window)"
            return f"[{self.lo:g}, {self.hi:g}]{tag}"
        if self.kind == PRODUCT:
            return f"{self.factors[0]} x {self.factors[1]}"
        return self.kind


def interval(lo: float = 0.0, hi: float = 1.0) -> SpaceDescriptor:
    return SpaceDescriptor(INTERVAL, float(lo), float(hi))


def real_line(window: tuple[float, float] = (-5.0, 5.0)) -> SpaceDescriptor:
    """The real line; ``window`` bounds the region property checks look at."""
    return SpaceDescriptor(INTERVAL, float(window[0]), float(window[1]), compact=False)


def circle() -> SpaceDescriptor:
    return SpaceDescriptor(CIRCLE, 0.0, TWO_PI)


def symbolic() -> SpaceDescriptor:
    return SpaceDescriptor(SYMBOLIC)


def product(x: SpaceDescriptor, y: SpaceDescriptor) -> SpaceDescriptor:
    return SpaceDescriptor(PRODUCT, factors=(x, y))


def circle_point(theta: float) -> float:
    t = math.fmod(float(theta), TWO_PI)
    if t < 0.0:
        t += TWO_PI
    # fmod can round up to exactly 2*pi for tiny negative inputs
    return 0.0 if t >= TWO_PI else t


def point(space: SpaceDescriptor, value: Any) -> Any:
    """Coerce ``value`` into a point of ``space`` (reducing angles, building words)."""
    if space.kind == INTERVAL:
        x = float(value)
        if space.compact and not space.lo <= x <= space.hi:
            raise ValueError(f"{x} outside {space}")
        return x
    if space.kind == CIRCLE:
        return circle_point(value)
    if space.kind == SYMBOLIC:
        return value if isinstance(value, Word) else Word(value)
    a, b = value
    return (point(space.factors[0], a), point(space.factors[1], b))


def _check(space: SpaceDescriptor, p: Any, q: Any) -> None:
    if not (space.contains(p) and space.contains(q)):
        raise SpaceMismatchError(f"points {p!r}, {q!r} do not both belong to {space}")


def distance(space: SpaceDescriptor, p: Any, q: Any) -> float:
    _check(space, p, q)
    return _distance(space, p, q)


def _distance(space: SpaceDescriptor, p: Any, q: Any) -> float:
    kind = space.kind
    if kind == INTERVAL:
        return abs(p - q)
    if kind == CIRCLE:
        d = math.fmod(abs(p - q), TWO_PI)
        return min(d, TWO_PI - d)
    if kind == SYMBOLIC:
        return symbolic_distance(p, q)
    fx, fy = space.factors
    return max(_distance(fx, p[0], q[0]), _distance(fy, p[1], q[1]))


def distance_exact(space: SpaceDescriptor, p: Any, q: Any) -> Fraction | float:
    """Like :func:`distance` but rational for symbolic (and all-symbolic product) spaces."""
    _check(space, p, q)
    if space.kind == SYMBOLIC:
        return symbolic_distance_exact(p, q)
    if space.kind == PRODUCT:
        fx, fy = space.factors
        return max(distance_exact(fx, p[0], q[0]), distance_exact(fy, p[1], q[1]))
    return _distance(space, p, q)


def same_point(space: SpaceDescriptor, p: Any, q: Any, tol: float = 0.0) -> bool:
    if space.kind == SYMBOLIC:
        return p == q
    if space.kind == PRODUCT:
        fx, fy = space.factors
        return same_point(fx, p[0], q[0], tol) and same_point(fy, p[1], q[1], tol)
    return _distance(space, p, q) <= tol


def point_key(space: SpaceDescriptor, p: Any) -> Any:
    """Hashable key identifying ``p``; equal keys iff equal points."""
    if space.kind == PRODUCT:
        return (point_key(space.factors[0], p[0]), point_key(space.factors[1], p[1]))
    if space.kind in (INTERVAL, CIRCLE):
        return float(p)
    return p


def epsilon_net(space: SpaceDescriptor, eps: float, *, allow_window: bool = False) -> list:
    """Finite set whose open eps-balls cover the space.

    Non-compact spaces raise unless ``allow_window`` is set, in which case the
    net covers the descriptor's window ``[lo, hi]`` only.
    """
    if eps <= 0:
        raise ValueError("eps must be positive")
    if not space.compact and not allow_window:
        raise UnsupportedOperationError(f"{space} is not compact")
    if space.kind == INTERVAL:
        n = max(1, math.ceil((space.hi - space.lo) / eps))
        return [float(x) for x in np.linspace(space.lo, space.hi, n + 1)]
    if space.kind == CIRCLE:
        n = max(2, math.ceil(TWO_PI / eps))
        return [TWO_PI * i / n for i in range(n)]
    if space.kind == SYMBOLIC:
        m = window_radius(eps)
        return [Word.from_window("".join(bits), -m) for bits in _cartesian("01", repeat=2 * m + 1)]
    fx, fy = space.factors
    return [
        (p, q)
        for p in epsilon_net(fx, eps, allow_window=allow_window)
        for q in epsilon_net(fy, eps, allow_window=allow_window)
    ]


@dataclass(frozen=True)
class OpenBallSet:
    """Finite union of open balls ``B(center, radius)``."""

    balls: tuple[tuple[Any, float], ...]

    def __post_init__(self):
        if not self.balls:
            raise ValueError("OpenBallSet needs at least one ball")
        if any(r <= 0 for _, r in self.balls):
            raise ValueError("ball radii must be positive")

    @classmethod
    def ball(cls, center: Any, radius: float) -> "OpenBallSet":
        return cls(((center, float(radius)),))

    @classmethod
    def of(cls, balls: Sequence[tuple[Any, float]]) -> "OpenBallSet":
        return cls(tuple((c, float(r)) for c, r in balls))

    def __iter__(self):
        return iter(self.balls)

    def __len__(self):
        return len(self.balls)


def ball_contains(space: SpaceDescriptor, ball_set: OpenBallSet, p: Any) -> bool:
    return any(_distance(space, c, p) < r for c, r in ball_set.balls)


def random_point(space: SpaceDescriptor, rng: np.random.Generator, max_word: int = 12) -> Any:
    """Seeded random point; symbolic points are random words of length <= ``max_word``."""
    if space.kind == INTERVAL:
        return float(rng.uniform(space.lo, space.hi))
    if space.kind == CIRCLE:
        return circle_point(rng.uniform(0.0, TWO_PI))
    if space.kind == SYMBOLIC:
        n = int(rng.integers(1, max_word + 1))
        return Word("".join(rng.choice(["0", "1"], size=n)))
    return (random_point(space.factors[0], rng, max_word), random_point(space.factors[1], rng, max_word))
