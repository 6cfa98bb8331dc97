"""Tracing certificates for the strong, weak and quasi-weak specification properties.

A :class:`SegmentSpec` fixes the orbit segments ``[a_i, b_i]``, targets
``x_i``, tolerance ``eps``, gap bound ``M`` and (for SSP) a period ``p``. A
:class:`TracingCertificate` claims a point ``z`` with
``d(f_1^j z, f_1^j x_i) < eps`` on every segment; :func:`verify_certificate`
re-simulates the claim and is the only source of truth. Searches emit
nothing that has not passed it.

Search order: closed-form constructors first (window splicing for shift
families), then grid candidates, then seeded random points. Budgets count
candidate evaluations.
"""

from __future__ import annotations

import logging
import math
from dataclasses import dataclass, field, replace
from typing import Any, Callable, Sequence

import numpy as np
from scipy.optimize import brentq

from nads.errors import InvalidModulusError, SpecError, UnsupportedOperationError
from nads.properties import PropertyVerdict, check_mixing
from nads.spaces import CIRCLE, INTERVAL, PRODUCT, SYMBOLIC, TWO_PI, circle_point, random_point
from nads.symbolic import Word, splice, window_radius
from nads.systems import (
    MapFamily,
    MapSpec,
    apply_map,
    collapsed_family,
    conjugate_family,
    inverse,
    orbit,
    orbit_array,
    shift_amounts,
)

log = logging.getLogger(__name__)

DEFAULT_MULTIPLES = 3
PERIOD_TOL = 1e-9


@dataclass(frozen=True)
class SegmentSpec:
    segments: tuple[tuple[int, int], ...]
    targets: tuple
    eps: float
    gap: int = 0
    period: int | None = None
    stride: int = 1

    def __post_init__(self):
        segs = tuple((int(a), int(b)) for a, b in self.segments)
        object.__setattr__(self, "segments", segs)
        object.__setattr__(self, "targets", tuple(self.targets))
        if not segs:
            raise SpecError("at least one segment is required")
        if len(self.targets) != len(segs):
            raise SpecError(f"{len(segs)} segments but {len(self.targets)} targets")
        if self.eps < 0:
            raise SpecError("eps must be nonnegative")
        if self.gap < 0 or self.stride < 1:
            raise SpecError("gap must be >= 0 and stride >= 1")
        prev_b = None
        for a, b in segs:
            if a < 0 or a > b:
                raise SpecError(f"segment ({a}, {b}) needs 0 <= a <= b")
            if prev_b is not None:
                if a <= prev_b:
                    raise SpecError("segments must satisfy b_{j-1} < a_j")
                if a - prev_b <= self.gap:
                    raise SpecError(f"gap a_j - b_(j-1) = {a - prev_b} must exceed M = {self.gap}")
            prev_b = b
        if self.period is not None and self.period <= self.gap + segs[-1][1] - segs[0][0]:
            raise SpecError(f"period {self.period} must exceed M + b_k - a_1 = {self.gap + segs[-1][1] - segs[0][0]}")

    @property
    def horizon(self) -> int:
        return self.segments[-1][1]

    def indices(self, i: int) -> range:
        a, b = self.segments[i]
        return range(a, b + 1, self.stride)

    def without_period(self) -> "SegmentSpec":
        return replace(self, period=None)


@dataclass
class TracingCertificate:
    witness: Any
    distances: tuple[float, ...]
    period: int | None = None
    period_evidence: tuple[tuple[int, float], ...] = ()
    budget: int = 0
    method: str = ""


@dataclass
class NotFound:
    """Search ran out of budget; says nothing about absence."""

    budget: int
    reason: str = "budget exhausted"

    def __bool__(self) -> bool:
        return False


# verification


def _trace(system, spec: SegmentSpec, z):
    """Per-segment max distances (None if any constraint fails) and the z-orbit."""
    horizon = spec.horizon
    if spec.period is not None:
        horizon = max(horizon, spec.period)
    oz = system.orbit(z, horizon)
    maxima = []
    for i, x in enumerate(spec.targets):
        ox = system.orbit(x, spec.segments[i][1])
        worst = 0.0
        for j in spec.indices(i):
            d = system.distance(oz[j], ox[j])
            if not d < spec.eps:
                return None, oz
            worst = max(worst, d)
        maxima.append(float(worst))
    return tuple(maxima), oz


def _period_evidence(system, z, p: int, multiples: int, oz=None) -> tuple[tuple[int, float], ...]:
    n = p * multiples
    if oz is None or len(oz) <= n:
        oz = system.orbit(z, n)
    return tuple((m, float(system.distance(oz[p * m], z))) for m in range(1, multiples + 1))


def verify_certificate(system, spec: SegmentSpec, cert: TracingCertificate, *, tol: float = 1e-12) -> bool:
    """Recompute every tracing distance (and period returns) of ``cert``.

    ``system`` is anything with ``orbit(x, N)`` and ``distance(p, q)``: a
    :class:`~nads.systems.MapFamily` or an induced hyperspace / measure
    family. Strict ``< eps`` throughout; recorded distances must be
    reproduced within ``tol``.
    """
    if len(cert.distances) != len(spec.segments):
        return False
    maxima, oz = _trace(system, spec, cert.witness)
    if maxima is None:
        return False
    if any(abs(m - d) > tol for m, d in zip(maxima, cert.distances)):
        return False
    if spec.period is not None:
        if cert.period != spec.period or not cert.period_evidence:
            return False
        multiples = len(cert.period_evidence)
        ev = _period_evidence(system, cert.witness, spec.period, multiples)
        if any(d > PERIOD_TOL for _, d in ev):
            return False
        if any(abs(d - rd) > tol or m != rm for (m, d), (rm, rd) in zip(ev, cert.period_evidence)):
            return False
    return True


def certify(system, spec: SegmentSpec, z, *, multiples: int = DEFAULT_MULTIPLES, budget: int = 0, method: str = ""):
    """Build a certificate for ``z`` if it traces ``spec``; otherwise None."""
    maxima, oz = _trace(system, spec, z)
    if maxima is None:
        return None
    if spec.period is None:
        return TracingCertificate(z, maxima, budget=budget, method=method)
    ev = _period_evidence(system, z, spec.period, multiples, oz)
    if any(d > PERIOD_TOL for _, d in ev):
        return None
    return TracingCertificate(z, maxima, spec.period, ev, budget, method)


# candidate generation


def _symbolic_constructor(fam: MapFamily, spec: SegmentSpec, multiples: int) -> list[Word]:
    """Splice each target's window around every shifted time into one word.

    With ``f_1^j = sigma^S(j)``, tracing ``x_i`` at time ``j`` to within
    ``eps`` follows from ``z_t = x_i,t`` for ``|t - S(j)| <= w`` where
    ``2^(1-w) < eps``. For SSP the word length must divide every ``S(p m)``.
    """
    if spec.eps <= 0:
        return []
    S = shift_amounts(fam, max(spec.horizon, (spec.period or 0) * multiples))
    period = None
    if spec.period is not None:
        g = 0
        for m in range(1, multiples + 1):
            g = math.gcd(g, int(S[spec.period * m]))
        period = g or None
    out = []
    w0 = window_radius(spec.eps)
    # wider windows give slack; narrower ones may still verify when windows collide
    for w in range(w0 + 2, -1, -1):
        pieces = []
        for i, x in enumerate(spec.targets):
            shifts = sorted({int(S[j]) for j in spec.indices(i)})
            # merge consecutive windows into runs
            lo = hi = None
            for s in shifts:
                if lo is not None and s - w <= hi + 1:
                    hi = s + w
                else:
                    if lo is not None:
                        pieces.append((lo, hi, x))
                    lo, hi = s - w, s + w
            pieces.append((lo, hi, x))
        z = splice(pieces, period=period)
        if z is not None and z not in out:
            out.append(z)
    return out


def _numeric_region(fam: MapFamily, spec: SegmentSpec):
    space = fam.space
    a1 = spec.segments[0][0]
    if a1 == 0 and spec.eps > 0:
        c = spec.targets[0]
        r = min(spec.eps, space.diameter)
        return c - r, c + r
    return space.lo, space.hi


def _clip(space, xs):
    if space.kind == CIRCLE:
        xs = np.mod(xs, TWO_PI)
        xs[xs >= TWO_PI] = 0.0
        return xs
    if space.compact:
        return np.clip(xs, space.lo, space.hi)
    return xs


def _numeric_candidates(fam, spec, budget, rng) -> np.ndarray:
    space = fam.space
    lo, hi = _numeric_region(fam, spec)
    n_grid = max(1, budget // 2)
    grid = np.linspace(lo, hi, n_grid + 2)[1:-1]
    rand = rng.uniform(lo, hi, size=budget - n_grid - len(spec.targets))
    xs = np.concatenate([np.asarray(spec.targets, dtype=np.float64), grid, rand])
    return _clip(space, xs)[:budget]


def _numeric_trace_mask(fam, spec, xs) -> np.ndarray:
    traj = orbit_array(fam, xs, spec.horizon)
    ok = np.ones(xs.shape[0], dtype=bool)
    for i, x in enumerate(spec.targets):
        tx = orbit_array(fam, np.array([x], dtype=np.float64), spec.segments[i][1])[:, 0]
        idx = list(spec.indices(i))
        d = np.abs(traj[idx] - tx[idx, None])
        if fam.space.kind == CIRCLE:
            d = np.minimum(d, TWO_PI - d)
        ok &= (d < spec.eps).all(axis=0)
    return ok


def _periodic_numeric(fam, p, lo, hi, grid, tol=PERIOD_TOL) -> list[float]:
    """Numeric points in ``[lo, hi]`` with ``f_1^p(x) = x`` (grid hits and bracketed roots)."""
    space = fam.space
    xs = _clip(space, np.linspace(lo, hi, grid))
    g = orbit_array(fam, xs, p)[-1] - xs
    if space.kind == CIRCLE:
        g = np.mod(g + math.pi, TWO_PI) - math.pi
    out = [float(x) for x in xs[np.abs(g) <= tol]]

    def gfun(t):
        t = circle_point(t) if space.kind == CIRCLE else float(t)
        v = orbit(fam, t, p)[-1] - t
        return (v + math.pi) % TWO_PI - math.pi if space.kind == CIRCLE else v

    for k in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0):
        try:
            r = brentq(gfun, xs[k], xs[k + 1], xtol=1e-15)
        except ValueError:
            continue
        out.append(circle_point(r) if space.kind == CIRCLE else float(r))
    return out


def _search(fam: MapFamily, spec: SegmentSpec, multiples: int, budget: int, seed: int):
    space = fam.space
    rng = np.random.default_rng(seed)
    used = 0
    if space.kind == PRODUCT:
        return _search_product(fam, spec, multiples, budget, seed)
    if space.kind == SYMBOLIC:
        for z in _symbolic_constructor(fam, spec, multiples):
            used += 1
            cert = certify(fam, spec, z, multiples=multiples, budget=used, method="splice")
            if cert is not None:
                return cert
        pool = list(spec.targets)
        while used < budget:
            z = pool.pop(0) if pool else random_point(space, rng, max_word=16)
            used += 1
            cert = certify(fam, spec, z, multiples=multiples, budget=used, method="random")
            if cert is not None:
                return cert
        return NotFound(used)
    if space.kind in (INTERVAL, CIRCLE):
        if spec.period is None:
            xs = _numeric_candidates(fam, spec, budget, rng)
            ok = np.flatnonzero(_numeric_trace_mask(fam, spec, xs))
            for k in ok[:8]:
                cert = certify(fam, spec, float(xs[k]), budget=int(k) + 1, method="grid")
                if cert is not None:
                    return cert
            return NotFound(len(xs))
        lo, hi = _numeric_region(fam, spec)
        cands = _periodic_numeric(fam, spec.period, lo, hi, max(16, budget))
        if (lo, hi) != (space.lo, space.hi):
            cands += _periodic_numeric(fam, spec.period, space.lo, space.hi, max(16, budget))
        cands = [float(c) for c in cands[:budget]]
        if not cands:
            return NotFound(max(16, budget), "no periodic candidates")
        ok = np.flatnonzero(_numeric_trace_mask(fam, spec, np.array(cands)))
        for k in ok[:8]:
            cert = certify(fam, spec, cands[k], multiples=multiples, budget=int(k) + 1, method="periodic-roots")
            if cert is not None:
                return cert
        return NotFound(len(cands))
    raise UnsupportedOperationError(f"no witness search for {space}")


def _search_product(fam, spec, multiples, budget, seed):
    parts = []
    for idx in (0, 1):
        sub = replace(spec, targets=tuple(x[idx] for x in spec.targets))
        res = _search(fam.component(idx), sub, multiples, budget, seed)
        if not res:
            return res
        parts.append((sub, res))
    (sx, cx), (sy, cy) = parts
    z = (cx.witness, cy.witness)
    return certify(fam, spec, z, multiples=multiples, budget=cx.budget + cy.budget, method="product") or NotFound(
        cx.budget + cy.budget, "component witnesses did not combine"
    )


def find_wsp_witness(fam: MapFamily, spec: SegmentSpec, *, budget: int = 4000, seed: int = 0):
    """A point tracing every segment of ``spec`` (period ignored), or :class:`NotFound`."""
    return _search(fam, spec.without_period(), DEFAULT_MULTIPLES, budget, seed)


def find_qsp_witness(fam: MapFamily, x1, x2, n: int, eps: float, *, budget: int = 4000, seed: int = 0):
    """``z`` with ``d(z, x1) < eps`` and ``d(f_1^n z, f_1^n x2) < eps``."""
    return find_wsp_witness(fam, qsp_spec(x1, x2, n, eps), budget=budget, seed=seed)


def qsp_spec(x1, x2, n: int, eps: float) -> SegmentSpec:
    if n < 1:
        raise SpecError("QSP needs n >= 1")
    return SegmentSpec(((0, 0), (n, n)), (x1, x2), eps, gap=n - 1)


def find_ssp_witness(
    fam: MapFamily, spec: SegmentSpec, multiples: int = DEFAULT_MULTIPLES, *, budget: int = 4000, seed: int = 0
):
    """A point of period ``spec.period`` tracing ``spec``, or :class:`NotFound`."""
    if spec.period is None:
        raise SpecError("SSP search needs spec.period")
    return _search(fam, spec, multiples, budget, seed)


def find_psp_witness(fam: MapFamily, spec: SegmentSpec, multiples: int = DEFAULT_MULTIPLES, *, budget: int = 4000, seed: int = 0):
    """Two-segment SSP; kept as a name only."""
    if len(spec.segments) != 2:
        raise SpecError("PSP is SSP with exactly two segments")
    return find_ssp_witness(fam, spec, multiples, budget=budget, seed=seed)


# constructive content


@dataclass
class MEstimate:
    M: int | None
    mixing: PropertyVerdict
    trials: int = 0
    successes: int = 0
    certificates: list = field(default_factory=list)
    warnings: list[str] = field(default_factory=list)

    @property
    def exhausted(self) -> bool:
        return self.M is None or self.successes < self.trials


def estimate_M_qsp(
    fam: MapFamily,
    eps: float,
    horizon: int = 60,
    trials: int = 100,
    *,
    seed: int = 0,
    budget: int = 4000,
    window: bool = False,
) -> MEstimate:
    """Gap constant ``M`` for QSP from the mixing threshold on an eps/2-net.

    Mixing at resolution eps/2 with threshold ``n0`` makes ``M = n0`` work
    (any ``z`` in the ball around ``y1``'s net point that reaches the ball
    around ``f_1^n y2``'s net point is within eps of both). ``M`` is then
    validated by ``trials`` random QSP searches with ``n`` in ``[M, M+20]``.
    """
    warnings = []
    if not fam.space.compact:
        warnings.append("non-compact space: the mixing/QSP equivalence needs compactness")
    if not fam.surjective:
        warnings.append("family not surjective: the mixing/QSP equivalence needs surjectivity")
    mix = check_mixing(fam, eps / 2, horizon, seed=seed, window=window)
    if not mix.witnessed:
        return MEstimate(None, mix, warnings=warnings)
    M = int(mix.evidence["threshold"])
    rng = np.random.default_rng(seed)
    certs = []
    for t in range(trials):
        x1 = random_point(fam.space, rng)
        x2 = random_point(fam.space, rng)
        n = int(rng.integers(M, M + 21))
        res = find_qsp_witness(fam, x1, x2, n, eps, budget=budget, seed=seed + t)
        if res:
            certs.append((qsp_spec(x1, x2, n, eps), res))
    return MEstimate(M, mix, trials, len(certs), certs, warnings)


def collapsed_gap(M: int, k: int) -> int:
    """``[M / k] + 1``: gap for the collapsed system so that ``k * gap > M``."""
    if k < 1:
        raise ValueError("k must be >= 1")
    return M // k + 1


def collapse_spec(fam: MapFamily, spec: SegmentSpec, M: int | None = None) -> SegmentSpec:
    """Spec for ``g = f_k o ... o f_1`` (indices j) rewritten for the base family at indices ``j k``."""
    k = fam.period
    if k is None:
        raise UnsupportedOperationError("collapse needs a k-periodic family")
    # k (a_j - b_(j-1)) >= k (gap + 1) exceeds k gap + k - 1
    gap = k * spec.gap + k - 1 if M is None else M
    return SegmentSpec(
        tuple((k * a, k * b) for a, b in spec.segments),
        spec.targets,
        spec.eps,
        gap=gap,
        period=None if spec.period is None else k * spec.period,
        stride=k * spec.stride,
    )


def collapse_witness(fam: MapFamily, spec: SegmentSpec, cert: TracingCertificate, M: int | None = None):
    """Map a certificate for the collapsed map ``g`` to one for the base family.

    Since ``f_1^{jk} = g^j`` the same point works at indices ``jk``; its
    period becomes ``k p``. Returns ``(base_spec, base_cert)``.
    """
    base_spec = collapse_spec(fam, spec, M)
    multiples = len(cert.period_evidence) or DEFAULT_MULTIPLES
    out = certify(fam, base_spec, cert.witness, multiples=multiples, budget=cert.budget, method="collapse")
    if out is None:
        raise SpecError("certificate does not transfer; it does not verify for g")
    return base_spec, out


def restrict_witness(fam: MapFamily, base_spec: SegmentSpec, cert: TracingCertificate):
    """Base certificate at indices ``jk`` -> certificate for the collapsed map ``g``."""
    k = fam.period
    if k is None:
        raise UnsupportedOperationError("collapse needs a k-periodic family")
    if base_spec.stride % k or any(a % k or b % k for a, b in base_spec.segments):
        raise SpecError("base segments must sit on multiples of k")
    if base_spec.period is not None and base_spec.period % k:
        raise SpecError("base period must be a multiple of k")
    g_spec = SegmentSpec(
        tuple((a // k, b // k) for a, b in base_spec.segments),
        base_spec.targets,
        base_spec.eps,
        gap=base_spec.gap // k,
        period=None if base_spec.period is None else base_spec.period // k,
        stride=base_spec.stride // k,
    )
    g = collapsed_family(fam)
    multiples = len(cert.period_evidence) or DEFAULT_MULTIPLES
    out = certify(g, g_spec, cert.witness, multiples=multiples, budget=cert.budget, method="restrict")
    if out is None:
        raise SpecError("base certificate does not verify at multiples of k")
    return g, g_spec, out


def product_witness(
    fam_x: MapFamily,
    spec_x: SegmentSpec,
    cert_x: TracingCertificate,
    fam_y: MapFamily,
    spec_y: SegmentSpec,
    cert_y: TracingCertificate,
):
    """Pair two certificates over the same segments into one for the product family.

    Max-metric tracing distance is the max of the component distances; the
    period (SSP) is ``lcm(p_x, p_y)``. Returns ``(product_family, spec, cert)``.
    """
    from nads.systems import product_family

    if spec_x.segments != spec_y.segments or spec_x.stride != spec_y.stride:
        raise SpecError("product_witness needs identical segment structure")
    period = None
    if spec_x.period is not None and spec_y.period is not None:
        period = math.lcm(spec_x.period, spec_y.period)
    fam = product_family(fam_x, fam_y)
    spec = SegmentSpec(
        spec_x.segments,
        tuple(zip(spec_x.targets, spec_y.targets)),
        max(spec_x.eps, spec_y.eps),
        gap=max(spec_x.gap, spec_y.gap),
        period=period,
        stride=spec_x.stride,
    )
    z = (cert_x.witness, cert_y.witness)
    distances = tuple(max(dx, dy) for dx, dy in zip(cert_x.distances, cert_y.distances))
    evidence = ()
    if period is not None:
        multiples = min(len(cert_x.period_evidence), len(cert_y.period_evidence)) or DEFAULT_MULTIPLES
        evidence = _period_evidence(fam, z, period, multiples)
    cert = TracingCertificate(z, distances, period, evidence, cert_x.budget + cert_y.budget, "product")
    if not verify_certificate(fam, spec, cert):
        raise SpecError("component certificates do not combine into a valid product certificate")
    return fam, spec, cert


def transport_witness(
    fam: MapFamily,
    spec: SegmentSpec,
    cert: TracingCertificate,
    h: MapSpec,
    modulus: Callable[[float], float] | None,
    target_eps: float,
    *,
    target: MapFamily | None = None,
):
    """Push a certificate through a (semi)conjugacy ``h`` with continuity modulus.

    ``spec.eps`` must not exceed ``modulus(target_eps)``; then ``h(z)``
    traces ``h(x_i)`` within ``target_eps`` for ``g_n = h o f_n o h^-1``
    (or the supplied ``target`` family). Returns ``(g_family, spec_y, cert_y)``.
    """
    if modulus is None:
        raise UnsupportedOperationError("transport needs a continuity modulus for h")
    delta = modulus(target_eps)
    if spec.eps > delta:
        raise SpecError(f"source eps {spec.eps} exceeds modulus({target_eps}) = {delta}")
    g = target if target is not None else conjugate_family(fam, h, inverse(h))
    spec_y = replace(spec, targets=tuple(apply_map(h, x) for x in spec.targets), eps=target_eps)
    y = apply_map(h, cert.witness)
    multiples = len(cert.period_evidence) or DEFAULT_MULTIPLES
    out = certify(g, spec_y, y, multiples=multiples, budget=cert.budget, method="transport")
    if out is None:
        raise InvalidModulusError("transported witness fails verification; modulus too optimistic")
    return g, spec_y, out


def as_wsp(spec: SegmentSpec, cert: TracingCertificate) -> tuple[SegmentSpec, TracingCertificate]:
    """SSP certificate viewed as a WSP certificate (period dropped)."""
    return spec.without_period(), TracingCertificate(cert.witness, cert.distances, budget=cert.budget, method=cert.method)


def as_qsp(spec: SegmentSpec, cert: TracingCertificate) -> tuple[SegmentSpec, TracingCertificate]:
    """Two singleton segments ``[0,0], [n,n]`` read as a QSP certificate."""
    (a1, b1), (a2, b2) = spec.segments
    if (a1, b1) != (0, 0) or a2 != b2:
        raise SpecError("QSP view needs segments [0,0] and [n,n]")
    return qsp_spec(spec.targets[0], spec.targets[1], a2, spec.eps), TracingCertificate(
        cert.witness, cert.distances, budget=cert.budget, method=cert.method
    )
