"""Non-autonomous map families ``f_{1,inf} = (f_1, f_2, ...)`` and their orbits.

``compose_segment(fam, n, i, x)`` is ``f_{n+i-1} o ... o f_n (x)`` with the
convention that ``i = 0`` is the identity; ``orbit`` lists ``f_1^n(x)`` for
``n = 0..N``.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from fractions import Fraction
from functools import lru_cache
from typing import Any, Callable, Sequence

import numpy as np

from nads import kernels
from nads.errors import InvalidConjugacyError, UnsupportedOperationError
from nads.spaces import (
    CIRCLE,
    INTERVAL,
    PRODUCT,
    SYMBOLIC,
    TWO_PI,
    SpaceDescriptor,
    _distance,
    circle_point,
    epsilon_net,
    random_point,
)
from nads.symbolic import Word

# elementary numeric maps understood by the kernels
OP_IDENTITY, OP_LOGISTIC, OP_TENT, OP_CONSTANT, OP_CIRCLE_POWER, OP_ROTATION, OP_SIN2, OP_ASIN, OP_ANGLE_SCALE = range(9)

_NUMERIC_OPS = {
    "identity": OP_IDENTITY,
    "logistic": OP_LOGISTIC,
    "tent": OP_TENT,
    "constant": OP_CONSTANT,
    "circle_power": OP_CIRCLE_POWER,
    "rotation": OP_ROTATION,
    "sin2": OP_SIN2,
    "asin_sqrt": OP_ASIN,
    "angle_scale": OP_ANGLE_SCALE,
}


@dataclass(frozen=True)
class MapSpec:
    """A named continuous self-map.

    ``compose`` stores its parts in application order (first applied first);
    ``product`` stores the two factor maps; ``callable`` wraps a user function.
    """

    name: str
    params: tuple = ()
    parts: tuple["MapSpec", ...] = ()
    fn: Callable[[Any], Any] | None = field(default=None, compare=False)

    def __call__(self, x):
        return apply_map(self, x)

    def __str__(self) -> str:
        if self.name == "shift":
            return f"sigma^{self.params[0]}"
        if self.name == "compose":
            return " o ".join(str(p) for p in reversed(self.parts))
        if self.name == "product":
            return f"({self.parts[0]} x {self.parts[1]})"
        if self.params:
            return f"{self.name}({', '.join(str(p) for p in self.params)})"
        return self.name

    @property
    def surjective(self) -> bool:
        if self.name == "logistic":
            return self.params[0] == 4
        if self.name == "constant":
            return False
        if self.name == "circle_power":
            return float(self.params[0]) >= 1.0
        if self.name == "callable":
            return bool(self.params and self.params[0])
        if self.name in ("compose", "product"):
            return all(p.surjective for p in self.parts)
        return True

    @property
    def invertible(self) -> bool:
        if self.name in ("identity", "rotation", "shift", "sin2", "asin_sqrt"):
            return True
        if self.name in ("compose", "product"):
            return all(p.invertible for p in self.parts)
        return False

    @property
    def exact(self) -> bool:
        """Evaluation is exact (symbolic shifts and identities)."""
        if self.name in ("identity", "shift"):
            return True
        if self.name in ("compose", "product"):
            return all(p.exact for p in self.parts)
        return False


IDENTITY = MapSpec("identity")


def identity() -> MapSpec:
    return IDENTITY


def logistic(a: float = 4.0) -> MapSpec:
    return MapSpec("logistic", (float(a),))


def tent() -> MapSpec:
    return MapSpec("tent")


def constant(c: float) -> MapSpec:
    return MapSpec("constant", (float(c),))


def circle_power(r) -> MapSpec:
    """``theta -> r*theta mod 2pi``; ``r`` may be a Fraction."""
    r = Fraction(r) if isinstance(r, (int, Fraction, str)) else r
    return MapSpec("circle_power", (r,))


def angle_scale(r) -> MapSpec:
    """``theta -> r*theta`` on the angle lift, reduced only when points are reported.

    A single step with non-integer ``r`` is not a circle map, but a run of
    steps whose factors multiply to an integer is: ``angle_scale(3/2)`` after
    ``angle_scale(2)`` is ``theta -> 3 theta``. Orbits keep the lift between
    steps so these products telescope.
    """
    r = Fraction(r) if isinstance(r, (int, Fraction, str)) else r
    return MapSpec("angle_scale", (r,))


def rotation(alpha: float) -> MapSpec:
    return MapSpec("rotation", (float(alpha),))


def shift(m: int = 1) -> MapSpec:
    m = int(m)
    return IDENTITY if m == 0 else MapSpec("shift", (m,))


def sin2() -> MapSpec:
    """``x -> sin^2(pi x / 2)``, the homeomorphism of [0,1] carrying tent to logistic(4)."""
    return MapSpec("sin2")


def asin_sqrt() -> MapSpec:
    """Inverse of :func:`sin2`: ``y -> (2/pi) arcsin(sqrt(y))``."""
    return MapSpec("asin_sqrt")


def from_callable(fn: Callable[[Any], Any], name: str = "custom", surjective: bool = False) -> MapSpec:
    return MapSpec("callable", (surjective, name), fn=fn)


def product_map(f: MapSpec, g: MapSpec) -> MapSpec:
    if f.name == "identity" and g.name == "identity":
        return IDENTITY
    return MapSpec("product", parts=(f, g))


def compose(*maps: MapSpec) -> MapSpec:
    """Mathematical composition ``compose(f, g)(x) = f(g(x))``, simplified.

    Identities are dropped and adjacent shifts / rotations are merged, so for
    example ``compose(shift(2), shift(-2), shift(1)) == shift(1)``.
    """
    seq: list[MapSpec] = []
    for m in reversed(maps):
        seq.extend(m.parts if m.name == "compose" else (m,))
    out: list[MapSpec] = []
    for m in seq:
        if m.name == "identity":
            continue
        if out and m.name == out[-1].name == "shift":
            merged = shift(out[-1].params[0] + m.params[0])
            out.pop()
            if merged.name != "identity":
                out.append(merged)
            continue
        if out and m.name == out[-1].name == "rotation":
            alpha = math.fmod(out[-1].params[0] + m.params[0], TWO_PI)
            out.pop()
            if alpha != 0.0:
                out.append(rotation(alpha))
            continue
        if out and {m.name, out[-1].name} == {"sin2", "asin_sqrt"}:
            out.pop()
            continue
        out.append(m)
    if not out:
        return IDENTITY
    if len(out) == 1:
        return out[0]
    return MapSpec("compose", parts=tuple(out))


def inverse(spec: MapSpec) -> MapSpec:
    if spec.name == "identity":
        return spec
    if spec.name == "shift":
        return shift(-spec.params[0])
    if spec.name == "rotation":
        return rotation(-spec.params[0])
    if spec.name == "sin2":
        return asin_sqrt()
    if spec.name == "asin_sqrt":
        return sin2()
    if spec.name == "compose" and spec.invertible:
        return compose(*[inverse(p) for p in spec.parts])
    if spec.name == "product" and spec.invertible:
        return product_map(inverse(spec.parts[0]), inverse(spec.parts[1]))
    raise UnsupportedOperationError(f"{spec} has no known inverse")


def shift_exponent(spec: MapSpec) -> int | None:
    """``m`` when ``spec`` is ``sigma^m`` (identity gives 0), else None."""
    if spec.name == "identity":
        return 0
    if spec.name == "shift":
        return spec.params[0]
    return None


def apply_map(spec: MapSpec, x: Any) -> Any:
    name = spec.name
    if name == "identity":
        return x
    if name == "shift":
        return x.shift(spec.params[0])
    if name == "logistic":
        return spec.params[0] * x * (1.0 - x)
    if name == "tent":
        return 2.0 * x if x <= 0.5 else 2.0 - 2.0 * x
    if name == "constant":
        return spec.params[0]
    if name == "circle_power":
        return circle_point(float(spec.params[0]) * x)
    if name == "angle_scale":
        return float(spec.params[0]) * x
    if name == "rotation":
        return circle_point(x + spec.params[0])
    if name == "sin2":
        s = math.sin(0.5 * math.pi * x)
        return s * s
    if name == "asin_sqrt":
        return (2.0 / math.pi) * math.asin(math.sqrt(min(max(x, 0.0), 1.0)))
    if name == "compose":
        for part in spec.parts:
            x = apply_map(part, x)
        return x
    if name == "product":
        return (apply_map(spec.parts[0], x[0]), apply_map(spec.parts[1], x[1]))
    if name == "callable":
        return spec.fn(x)
    raise UnsupportedOperationError(f"unknown map {name!r}")


# named infinite schedules n -> f_n


def _sched_constant_halving(n: int) -> MapSpec:
    return constant(2.0**-n)


def _sched_circle_stretch(n: int) -> MapSpec:
    return angle_scale(Fraction(n + 1, n))


def _sched_shift_zigzag(n: int) -> MapSpec:
    k = (n + 1) // 2
    return shift(k if n % 2 else -k)


SCHEDULES: dict[str, tuple[Callable[[int], MapSpec], bool]] = {
    # name -> (rule, every f_n surjective)
    "constant-halving": (_sched_constant_halving, False),
    "circle-stretch": (_sched_circle_stretch, True),
    "shift-zigzag": (_sched_shift_zigzag, True),
}


class MapFamily:
    """The sequence ``f_1, f_2, ...`` acting on ``space``.

    Build one with :func:`periodic_family`, :func:`scheduled_family`,
    :func:`product_family`, :func:`conjugate_family` or :func:`custom_family`.
    """

    def __init__(
        self,
        space: SpaceDescriptor,
        kind: str,
        *,
        maps: Sequence[MapSpec] = (),
        schedule: str | None = None,
        rule: Callable[[int], MapSpec] | None = None,
        factors: Sequence["MapFamily"] = (),
        conjugacy: tuple[MapSpec, MapSpec] | None = None,
        surjective: bool | None = None,
        name: str | None = None,
    ):
        self.space = space
        self.kind = kind
        self.maps = tuple(maps)
        self.schedule = schedule
        self.factors = tuple(factors)
        self.conjugacy = conjugacy
        self.name = name
        if kind == "periodic":
            if not self.maps:
                raise ValueError("periodic family needs k >= 1 maps")
            self._rule = lambda n: self.maps[(n - 1) % len(self.maps)]
            default_surj = all(m.surjective for m in self.maps)
        elif kind == "schedule":
            fn, default_surj = SCHEDULES[schedule]
            self._rule = fn
        elif kind == "product":
            fx, fy = self.factors
            self._rule = lambda n: product_map(fx.map_at(n), fy.map_at(n))
            default_surj = fx.surjective and fy.surjective
        elif kind == "conjugate":
            (base,) = self.factors
            h, h_inv = conjugacy
            self._rule = lambda n: compose(h, base.map_at(n), h_inv)
            default_surj = base.surjective
        elif kind == "custom":
            if rule is None:
                raise ValueError("custom family needs a rule")
            self._rule = rule
            default_surj = False
        else:
            raise ValueError(f"unknown family kind {kind!r}")
        self.surjective = default_surj if surjective is None else surjective
        self.map_at = lru_cache(maxsize=4096)(self._map_at)

    def _map_at(self, n: int) -> MapSpec:
        if n < 1:
            raise ValueError("maps are indexed from n = 1")
        return self._rule(n)

    @property
    def period(self) -> int | None:
        """k for a k-periodic family (products: lcm of factor periods), else None."""
        if self.kind == "periodic":
            return len(self.maps)
        if self.kind == "product":
            ps = [f.period for f in self.factors]
            if None in ps:
                return None
            return ps[0] * ps[1] // math.gcd(ps[0], ps[1])
        if self.kind == "conjugate":
            return self.factors[0].period
        return None

    @property
    def exact(self) -> bool:
        """All maps act exactly (pure shift families)."""
        return self.space.kind == SYMBOLIC

    def component(self, i: int) -> "MapFamily":
        """Factor family ``i`` of a family on a product space."""
        if self.space.kind != PRODUCT:
            raise UnsupportedOperationError("not a product family")
        if self.kind == "product":
            return self.factors[i]
        parent = self
        return MapFamily(
            self.space.factors[i],
            "custom",
            rule=lambda n: _project(parent.map_at(n), i),
            surjective=self.surjective,
        )

    def orbit(self, x, N: int) -> list:
        return orbit(self, x, N)

    def distance(self, p, q) -> float:
        return _distance(self.space, p, q)

    def __repr__(self) -> str:
        label = self.name or self.kind
        return f"MapFamily({label} on {self.space})"


def _project(spec: MapSpec, i: int) -> MapSpec:
    if spec.name == "identity":
        return IDENTITY
    if spec.name == "product":
        return spec.parts[i]
    raise UnsupportedOperationError(f"cannot project {spec} onto factor {i}")


def periodic_family(space: SpaceDescriptor, maps: Sequence[MapSpec], name: str | None = None, **kw) -> MapFamily:
    return MapFamily(space, "periodic", maps=maps, name=name, **kw)


def scheduled_family(space: SpaceDescriptor, schedule: str, name: str | None = None) -> MapFamily:
    if schedule not in SCHEDULES:
        raise ValueError(f"unknown schedule {schedule!r}; known: {sorted(SCHEDULES)}")
    return MapFamily(space, "schedule", schedule=schedule, name=name)


def custom_family(space: SpaceDescriptor, rule: Callable[[int], MapSpec], name: str | None = None) -> MapFamily:
    """Family from an arbitrary rule; never claims exactness or periodicity."""
    return MapFamily(space, "custom", rule=rule, name=name)


def autonomous(space: SpaceDescriptor, f: MapSpec, name: str | None = None) -> MapFamily:
    return periodic_family(space, [f], name=name)


def product_family(fam_x: MapFamily, fam_y: MapFamily) -> MapFamily:
    from nads.spaces import product

    return MapFamily(product(fam_x.space, fam_y.space), "product", factors=(fam_x, fam_y))


# composition and orbits


def shift_amounts(fam: MapFamily, N: int, start: int = 1) -> np.ndarray:
    """Cumulative shifts ``S[i]`` with ``f_start^i = sigma^S[i]`` for ``i = 0..N``."""
    out = np.zeros(N + 1, dtype=np.int64)
    total = 0
    for i in range(N):
        m = shift_exponent(fam.map_at(start + i))
        if m is None:
            raise UnsupportedOperationError(f"{fam.map_at(start + i)} is not a shift power")
        total += m
        out[i + 1] = total
    return out


def compose_segment(fam: MapFamily, n: int, i: int, x):
    """``f_n^i(x) = f_{n+i-1} o ... o f_n (x)``; ``i = 0`` returns ``x``."""
    if n < 1 or i < 0:
        raise ValueError("need n >= 1 and i >= 0")
    if i == 0:
        return x
    if fam.space.kind == SYMBOLIC:
        return x.shift(int(shift_amounts(fam, i, start=n)[-1]))
    for t in range(n, n + i):
        x = apply_map(fam.map_at(t), x)
    return circle_point(x) if fam.space.kind == CIRCLE else x


def orbit(fam: MapFamily, x, N: int, start: int = 1) -> list:
    """``[x, f_start(x), f_start^2(x), ..., f_start^N(x)]`` computed incrementally."""
    if N < 0:
        raise ValueError("N must be nonnegative")
    kind = fam.space.kind
    if kind == SYMBOLIC:
        return [x.shift(int(s)) for s in shift_amounts(fam, N, start)]
    if kind in (INTERVAL, CIRCLE) and N > 0 and _kernel_ok(fam, start, N):
        traj = orbit_array(fam, np.array([x], dtype=np.float64), N, start)
        return [float(v) for v in traj[:, 0]]
    if kind == PRODUCT and fam.kind == "product":
        ox = orbit(fam.factors[0], x[0], N, start)
        oy = orbit(fam.factors[1], x[1], N, start)
        return list(zip(ox, oy))
    out = [x]
    for t in range(start, start + N):
        x = apply_map(fam.map_at(t), x)
        out.append(circle_point(x) if kind == CIRCLE else x)
    return out


def _kernel_ok(fam: MapFamily, start: int, N: int) -> bool:
    try:
        for t in range(start, start + N):
            _flatten(fam.map_at(t))
    except UnsupportedOperationError:
        return False
    return True


def _flatten(spec: MapSpec) -> list[tuple[int, float]]:
    if spec.name == "compose":
        out = []
        for part in spec.parts:
            out.extend(_flatten(part))
        return out
    op = _NUMERIC_OPS.get(spec.name)
    if op is None:
        raise UnsupportedOperationError(f"{spec} has no kernel form")
    param = float(spec.params[0]) if spec.params else 0.0
    return [(op, param)]


def op_table(fam: MapFamily, N: int, start: int = 1) -> tuple[np.ndarray, np.ndarray, np.ndarray]:
    """Flattened elementary ops for ``f_start .. f_{start+N-1}``.

    Returns ``(ops, params, ends)`` where ``ends[i]`` marks the last
    elementary op of a time step.
    """
    ops, params, ends = [], [], []
    for t in range(start, start + N):
        flat = _flatten(fam.map_at(t)) or [(OP_IDENTITY, 0.0)]
        for j, (op, p) in enumerate(flat):
            ops.append(op)
            params.append(p)
            ends.append(j == len(flat) - 1)
    return (
        np.asarray(ops, dtype=np.int64),
        np.asarray(params, dtype=np.float64),
        np.asarray(ends, dtype=np.uint8),
    )


def orbit_array(fam: MapFamily, xs: np.ndarray, N: int, start: int = 1) -> np.ndarray:
    """Batched orbits of numeric points: array of shape ``(N + 1, len(xs))``."""
    if not fam.space.is_numeric:
        raise UnsupportedOperationError("orbit_array needs an interval or circle family")
    xs = np.ascontiguousarray(xs, dtype=np.float64)
    if N == 0:
        return xs[None, :].copy()
    ops, params, ends = op_table(fam, N, start)
    out = kernels.iterate(ops, params, ends, xs)
    if fam.space.kind == CIRCLE:
        # lifted angles (angle_scale) are reduced for reporting only
        np.mod(out, TWO_PI, out=out)
        out[out >= TWO_PI] = 0.0
    return out


# autonomous reduction, periodicity, conjugacy


def periodic_collapse(fam: MapFamily) -> MapSpec:
    """``g = f_k o ... o f_1`` for a k-periodic family, so that ``g^j = f_1^{jk}``."""
    k = fam.period
    if k is None:
        raise UnsupportedOperationError("periodic_collapse needs a k-periodic family")
    return compose(*[fam.map_at(n) for n in range(k, 0, -1)])


def collapsed_family(fam: MapFamily) -> MapFamily:
    return autonomous(fam.space, periodic_collapse(fam), name=f"collapse({fam.name or fam.kind})")


@dataclass
class PeriodicityCheck:
    periodic: bool
    exact: bool
    distances: list[tuple[int, float]]


def periodicity_evidence(fam: MapFamily, x, n: int, multiples: int = 3, tol: float = 1e-9) -> PeriodicityCheck:
    """Check ``f_1^{nk}(x) = x`` for ``k = 1..multiples`` (distance <= tol).

    For a k-periodic family with ``k | n`` a single return already implies all
    multiples, and the check is marked exact (symbolic spaces only compare
    exactly; numeric ones within ``tol``).
    """
    if n < 1 or multiples < 1:
        raise ValueError("need n >= 1 and multiples >= 1")
    period = fam.period
    structural = period is not None and n % period == 0
    orb = orbit(fam, x, n * multiples)
    dists = [(k, _distance(fam.space, orb[n * k], x)) for k in range(1, multiples + 1)]
    ok = all(d <= tol for _, d in dists)
    exact = structural and (fam.space.kind == SYMBOLIC or _all_symbolic(fam.space))
    return PeriodicityCheck(ok, bool(structural and ok) and exact, dists)


def _all_symbolic(space: SpaceDescriptor) -> bool:
    if space.kind == PRODUCT:
        return all(_all_symbolic(f) for f in space.factors)
    return space.kind == SYMBOLIC


def is_periodic_point(fam: MapFamily, x, n: int, multiples: int = 3, tol: float = 1e-9) -> bool:
    return periodicity_evidence(fam, x, n, multiples, tol).periodic


@dataclass
class Semiconjugacy:
    """``h o f_n = g_n o h`` checked by sampling (no inverse available)."""

    source: MapFamily
    target: MapFamily
    h: MapSpec
    max_error: float


def _sample_points(space: SpaceDescriptor, count: int, seed: int) -> list:
    rng = np.random.default_rng(seed)
    pts = []
    if space.compact and space.kind != PRODUCT:
        net = epsilon_net(space, space.diameter / 10)
        pts.extend(net[: count // 2])
    while len(pts) < count:
        pts.append(random_point(space, rng))
    return pts


def conjugate_family(
    fam: MapFamily,
    h: MapSpec,
    h_inv: MapSpec | None = None,
    *,
    target: MapFamily | None = None,
    space: SpaceDescriptor | None = None,
    samples: int = 100,
    horizon: int = 10,
    tol: float = 1e-9,
    seed: int = 0,
) -> MapFamily | Semiconjugacy:
    """Transport ``fam`` along ``h``.

    With ``h_inv`` the result is the conjugate family ``g_n = h o f_n o h_inv``
    (after checking ``h_inv o h = id`` on samples). Without it the caller
    supplies ``target`` and the commutation ``h o f_n = g_n o h`` is checked
    for ``n <= horizon``.
    """
    pts = _sample_points(fam.space, samples, seed)
    out_space = space or fam.space
    if h_inv is not None:
        err = max(_distance(fam.space, apply_map(h_inv, apply_map(h, x)), x) for x in pts)
        if err > tol:
            raise InvalidConjugacyError(f"h_inv o h deviates from identity by {err:.3g}")
        return MapFamily(out_space, "conjugate", factors=(fam,), conjugacy=(h, h_inv), surjective=fam.surjective)
    if target is None:
        raise InvalidConjugacyError("semiconjugacy needs the target family")
    err = 0.0
    for x in pts:
        for n in range(1, horizon + 1):
            lhs = apply_map(h, apply_map(fam.map_at(n), x))
            rhs = apply_map(target.map_at(n), apply_map(h, x))
            err = max(err, _distance(out_space, lhs, rhs))
    if err > tol:
        raise InvalidConjugacyError(f"h o f_n and g_n o h differ by {err:.3g}")
    return Semiconjugacy(fam, target, h, err)
