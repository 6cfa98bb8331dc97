"""Horizon-bounded checks of transitivity, mixing, sensitivity and periodic density.

Every check works on pairs of open balls ``(U, V)`` and the hit set
``N(U, V) = {n >= 1 : f_1^n(U) meets V}``. Hits are always backed by a
witness ``u in U`` with ``f_1^n(u) in V``; misses only mean that no witness
was found among the candidates tried, so negative verdicts are reported as
``refuted-at-resolution``.

Candidate witnesses come from three engines:

* symbolic (shift-power) families: ``f_1^n = sigma^S(n)``, and a witness is
  spliced from the window of ``U``'s center around 0 and the window of
  ``V``'s center around ``S(n)``; it exists when the two windows agree on
  their overlap. The window test is vectorized over all ball pairs.
* interval / circle families: a grid plus seeded random samples in each
  ``U`` ball, pushed forward by the compiled orbit kernel.
* product families: a product ball is a product of factor balls (max
  metric), so a pair hits at ``n`` iff both factor pairs hit at ``n``.
"""

from __future__ import annotations

import enum
import math
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass, field
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.optimize import brentq

from nads import kernels
from nads.errors import UnsupportedOperationError
from nads.spaces import (
    CIRCLE,
    INTERVAL,
    PRODUCT,
    SYMBOLIC,
    TWO_PI,
    OpenBallSet,
    SpaceDescriptor,
    _distance,
    ball_contains,
    circle_point,
    epsilon_net,
)
from nads.symbolic import Word, splice, window_code, window_radius
from nads.systems import MapFamily, orbit, orbit_array, periodicity_evidence, shift_amounts

MAX_EVIDENCE = 64


class Verdict(str, enum.Enum):
    WITNESSED = "witnessed"
    REFUTED = "refuted-at-resolution"
    INCONCLUSIVE = "inconclusive"

    def __str__(self) -> str:
        return self.value


@dataclass
class HitSet:
    U: OpenBallSet
    V: OpenBallSet
    horizon: int
    hits: list[int]
    evidence: dict[int, Any]
    samples_per_ball: int
    seed: int

    def verify(self, fam: MapFamily) -> bool:
        """Re-simulate every recorded witness."""
        space = fam.space
        for n in self.hits:
            u = self.evidence.get(n)
            if u is None or not ball_contains(space, self.U, u):
                return False
            if not ball_contains(space, self.V, orbit(fam, u, n)[-1]):
                return False
        return True


@dataclass
class PropertyVerdict:
    name: str
    verdict: Verdict
    params: dict
    evidence: dict = field(default_factory=dict)
    seed: int = 0
    heuristic: bool = False
    caveats: list[str] = field(default_factory=list)
    sub: dict[str, "PropertyVerdict"] = field(default_factory=dict)

    @property
    def witnessed(self) -> bool:
        return self.verdict is Verdict.WITNESSED

    def __str__(self) -> str:
        extra = " (heuristic)" if self.heuristic else ""
        return f"{self.name}: {self.verdict}{extra}"


# pair engines


class _PairEngine:
    """Hit matrices ``hits(n)[i, j]`` for U-balls ``i`` and V-balls ``j``."""

    def hits(self, n: int) -> np.ndarray:
        raise NotImplementedError

    def witness(self, i: int, j: int, n: int):
        raise NotImplementedError

    def track(self, horizon: int) -> tuple[np.ndarray, np.ndarray]:
        """``first_hit`` and ``last_miss`` matrices over ``n = 1..horizon`` (0 = never)."""
        first = np.zeros(self.shape, dtype=np.int32)
        last = np.zeros(self.shape, dtype=np.int32)
        for n in range(1, horizon + 1):
            h = self.hits(n)
            first[h & (first == 0)] = n
            last[~h] = n
        return first, last


class _SymbolicEngine(_PairEngine):
    def __init__(self, fam: MapFamily, U: Sequence[tuple[Word, float]], V: Sequence[tuple[Word, float]], horizon: int):
        self.U, self.V = list(U), list(V)
        self.shape = (len(self.U), len(self.V))
        self.S = shift_amounts(fam, horizon)
        self.a = np.array([window_radius(r) for _, r in self.U])
        self.b = np.array([window_radius(r) for _, r in self.V])
        if max(self.a.max(), self.b.max()) > 31:
            raise UnsupportedOperationError("ball radius too small for 64-bit window codes")
        self.codes_u = np.array([window_code(c, a) for (c, _), a in zip(self.U, self.a)], dtype=np.uint64)
        self.codes_v = np.array([window_code(c, b) for (c, _), b in zip(self.V, self.b)], dtype=np.uint64)
        self._groups = [
            (np.flatnonzero(self.a == a), np.flatnonzero(self.b == b), int(a), int(b))
            for a in np.unique(self.a)
            for b in np.unique(self.b)
        ]

    def _keys(self, iu, jv, a, b, s):
        lo, hi = max(-a, s - b), min(a, s + b)
        if lo > hi:
            return None
        mask = np.uint64((1 << (hi - lo + 1)) - 1)
        ku = (self.codes_u[iu] >> np.uint64(lo + a)) & mask
        kv = (self.codes_v[jv] >> np.uint64(lo - s + b)) & mask
        return ku, kv

    def hits(self, n: int) -> np.ndarray:
        s = int(self.S[n])
        out = np.zeros(self.shape, dtype=bool)
        for iu, jv, a, b in self._groups:
            keys = self._keys(iu, jv, a, b, s)
            if keys is None:
                out[np.ix_(iu, jv)] = True
            else:
                out[np.ix_(iu, jv)] = keys[0][:, None] == keys[1][None, :]
        return out

    def track(self, horizon: int):
        if len(self._groups) != 1:
            return super().track(horizon)
        iu, jv, a, b = self._groups[0]
        first = np.zeros(self.shape, dtype=np.int32)
        last = np.zeros(self.shape, dtype=np.int32)
        for n in range(1, horizon + 1):
            keys = self._keys(iu, jv, a, b, int(self.S[n]))
            if keys is None:
                first[first == 0] = n
            else:
                kernels.track_pairs(keys[0], keys[1], n, first, last)
        return first, last

    def witness(self, i: int, j: int, n: int):
        s = int(self.S[n])
        (cu, _), (cv, _) = self.U[i], self.V[j]
        a, b = int(self.a[i]), int(self.b[j])
        return splice([(-a, a, cu), (s - b, s + b, cv.shift(-s))])


def _ball_samples(space: SpaceDescriptor, c: float, r: float, count: int, extra: int, rng) -> np.ndarray:
    offs = r * np.linspace(-1.0, 1.0, count + 2)[1:-1]
    if extra:
        offs = np.concatenate([[0.0], offs, rng.uniform(-r, r, size=extra)])
    else:
        offs = np.concatenate([[0.0], offs])
    pts = c + offs
    if space.kind == CIRCLE:
        pts = np.mod(pts, TWO_PI)
        pts[pts >= TWO_PI] = 0.0
    elif space.compact:
        pts = np.clip(pts, space.lo, space.hi)
    return pts


def _parallel_orbits(fam: MapFamily, xs: np.ndarray, horizon: int, threads: int) -> np.ndarray:
    if threads <= 1 or xs.size < 2048:
        return orbit_array(fam, xs, horizon)
    chunks = np.array_split(xs, threads)
    with ThreadPoolExecutor(threads) as pool:
        parts = list(pool.map(lambda c: orbit_array(fam, c, horizon), chunks))
    return np.concatenate(parts, axis=1)


class _NumericEngine(_PairEngine):
    def __init__(self, fam, U, V, horizon, samples, extra, seed, threads=1):
        space = fam.space
        rng = np.random.default_rng(seed)
        self.U, self.V = list(U), list(V)
        self.shape = (len(self.U), len(self.V))
        pts, group = [], []
        for g, (c, r) in enumerate(self.U):
            p = _ball_samples(space, c, r, samples, extra, rng)
            pts.append(p)
            group.append(np.full(p.shape, g, dtype=np.int64))
        self.points = np.concatenate(pts)
        group = np.concatenate(group)
        traj = _parallel_orbits(fam, self.points, horizon, threads)
        centers = np.array([c for c, _ in self.V], dtype=np.float64)
        radii = np.array([r for _, r in self.V], dtype=np.float64)
        self.index = kernels.ball_hit_index(traj, group, len(self.U), centers, radii, space.kind == CIRCLE)

    def hits(self, n):
        return self.index[:, :, n] >= 0

    def track(self, horizon):
        h = self.index[:, :, 1 : horizon + 1] >= 0
        n = np.arange(1, horizon + 1)
        first = np.where(h.any(axis=2), n[np.argmax(h, axis=2)], 0).astype(np.int32)
        miss = ~h
        rev = np.argmax(miss[:, :, ::-1], axis=2)
        last = np.where(miss.any(axis=2), horizon - rev, 0).astype(np.int32)
        return first, last

    def witness(self, i, j, n):
        k = self.index[i, j, n]
        return None if k < 0 else float(self.points[k])


class _ProductEngine(_PairEngine):
    def __init__(self, fam, U, V, horizon, **kw):
        self.U, self.V = list(U), list(V)
        self.shape = (len(self.U), len(self.V))
        self.parts = []
        for idx in (0, 1):
            cu, iu = _dedupe([(c[idx], r) for c, r in self.U], fam.space.factors[idx])
            cv, iv = _dedupe([(c[idx], r) for c, r in self.V], fam.space.factors[idx])
            eng = make_engine(fam.component(idx), cu, cv, horizon, **kw)
            self.parts.append((eng, iu, iv))

    def hits(self, n):
        out = np.ones(self.shape, dtype=bool)
        for eng, iu, iv in self.parts:
            out &= eng.hits(n)[np.ix_(iu, iv)]
        return out

    def witness(self, i, j, n):
        comps = []
        for eng, iu, iv in self.parts:
            w = eng.witness(int(iu[i]), int(iv[j]), n)
            if w is None:
                return None
            comps.append(w)
        return tuple(comps)


def _dedupe(balls, space):
    from nads.spaces import point_key

    keys: dict = {}
    uniq, index = [], []
    for c, r in balls:
        k = (point_key(space, c), r)
        if k not in keys:
            keys[k] = len(uniq)
            uniq.append((c, r))
        index.append(keys[k])
    return uniq, np.array(index, dtype=np.int64)


def make_engine(fam, U, V, horizon, *, samples=128, extra=32, seed=0, threads=1) -> _PairEngine:
    kind = fam.space.kind
    if kind == SYMBOLIC:
        return _SymbolicEngine(fam, U, V, horizon)
    if kind in (INTERVAL, CIRCLE):
        return _NumericEngine(fam, U, V, horizon, samples, extra, seed, threads)
    if kind == PRODUCT:
        return _ProductEngine(fam, U, V, horizon, samples=samples, extra=extra, seed=seed, threads=threads)
    raise UnsupportedOperationError(f"no pair engine for {fam.space}")


# hit sets


def hit_set(
    fam: MapFamily,
    U: OpenBallSet,
    V: OpenBallSet,
    horizon: int,
    samples_per_ball: int = 128,
    seed: int = 0,
) -> HitSet:
    """Times ``n <= horizon`` at which a sampled ``u in U`` lands in ``V``.

    Sound for hits (each carries a re-verifiable witness), incomplete for
    misses.
    """
    if horizon < 1:
        raise ValueError("horizon must be >= 1")
    eng = make_engine(fam, list(U), list(V), horizon, samples=samples_per_ball, seed=seed)
    hits, evidence = [], {}
    space = fam.space
    for n in range(1, horizon + 1):
        h = eng.hits(n)
        for i, j in zip(*np.nonzero(h)):
            w = eng.witness(int(i), int(j), n)
            if w is not None and ball_contains(space, U, w) and ball_contains(space, V, orbit(fam, w, n)[-1]):
                hits.append(n)
                evidence[n] = w
                break
    return HitSet(U, V, horizon, hits, evidence, samples_per_ball, seed)


# net-based checks


def _net_balls(fam, eps, window):
    space = fam.space
    caveats = []
    if not space.compact:
        if not window:
            raise UnsupportedOperationError(f"{space} is not compact; pass window=True to check [lo, hi] only")
        caveats.append(f"non-compact space: checked on window [{space.lo:g}, {space.hi:g}] only")
    net = epsilon_net(space, eps, allow_window=window)
    return [(c, eps) for c in net], caveats


def _witness_record(fam, eng, i, j, n):
    w = eng.witness(i, j, n)
    if w is None:
        return None
    (cu, ru), (cv, rv) = eng.U[i], eng.V[j]
    return {"U": (cu, ru), "V": (cv, rv), "n": int(n), "witness": w}


def _sample_pairs(shape, count, seed):
    total = shape[0] * shape[1]
    if total <= count:
        return [(i, j) for i in range(shape[0]) for j in range(shape[1])]
    rng = np.random.default_rng(seed)
    flat = np.sort(rng.choice(total, size=count, replace=False))
    return [(int(k // shape[1]), int(k % shape[1])) for k in flat]


def check_transitive(
    fam: MapFamily,
    eps: float,
    horizon: int,
    *,
    samples: int = 128,
    seed: int = 0,
    window: bool = False,
    threads: int = 1,
) -> PropertyVerdict:
    balls, caveats = _net_balls(fam, eps, window)
    eng = make_engine(fam, balls, balls, horizon, samples=samples, seed=seed, threads=threads)
    first, _ = eng.track(horizon)
    params = {"eps": eps, "horizon": horizon, "net_size": len(balls), "samples": samples}
    missing = np.argwhere(first == 0)
    if missing.size:
        i, j = (int(v) for v in missing[0])
        ev = {"failing_pair": {"U": balls[i], "V": balls[j]}, "pairs_without_hit": int(len(missing))}
        return PropertyVerdict("transitive", Verdict.REFUTED, params, ev, seed, caveats=caveats)
    records = []
    for i, j in _sample_pairs(eng.shape, MAX_EVIDENCE, seed):
        rec = _witness_record(fam, eng, i, j, int(first[i, j]))
        if rec is not None:
            records.append(rec)
    ev = {
        "pairs": int(first.size),
        "max_first_hit": int(first.max()),
        "complete": first.size <= MAX_EVIDENCE,
        "witnesses": records,
    }
    return PropertyVerdict("transitive", Verdict.WITNESSED, params, ev, seed, caveats=caveats)


def _periodic_miss_pattern(misses: Iterable[int], window: range, max_period: int = 4):
    """``(q, r)`` when every ``n`` in ``window`` with ``n = r (mod q)`` is a miss."""
    miss = set(misses)
    for q in range(1, max_period + 1):
        for r in range(q):
            cls = [n for n in window if n % q == r]
            if cls and all(n in miss for n in cls):
                return q, r
    return None


def check_mixing(
    fam: MapFamily,
    eps: float,
    horizon: int,
    *,
    samples: int = 128,
    seed: int = 0,
    window: bool = False,
    threads: int = 1,
    pattern_pairs: int = 64,
) -> PropertyVerdict:
    """Mixing at resolution ``eps``: all net-ball pairs hit at every ``n in [n0, horizon]``.

    Witnessed with the minimal such ``n0`` when ``n0 <= horizon // 2``.
    Refuted (heuristic) when some pair misses a whole residue class mod
    ``q <= 4`` across the second half of the horizon.
    """
    balls, caveats = _net_balls(fam, eps, window)
    eng = make_engine(fam, balls, balls, horizon, samples=samples, seed=seed, threads=threads)
    return _mixing_verdict(fam, eng, horizon, eps, seed, caveats, pattern_pairs, {"samples": samples})


def _mixing_verdict(fam, eng, horizon, eps, seed, caveats, pattern_pairs, extra_params):
    first, last = eng.track(horizon)
    n0 = int(last.max()) + 1
    params = {"eps": eps, "horizon": horizon, "net_size": eng.shape[0], **extra_params}
    if n0 <= horizon // 2:
        records = []
        times = sorted({n0, (n0 + horizon) // 2, horizon})
        for i, j in _sample_pairs(eng.shape, max(1, MAX_EVIDENCE // len(times)), seed):
            for n in times:
                rec = _witness_record(fam, eng, i, j, n)
                if rec is not None:
                    records.append(rec)
        ev = {
            "threshold": n0,
            "pairs": int(last.size),
            "complete": last.size * (horizon - n0 + 1) <= MAX_EVIDENCE,
            "witnesses": records,
        }
        return PropertyVerdict("mixing", Verdict.WITNESSED, params, ev, seed, caveats=caveats)
    tail = range(horizon // 2 + 1, horizon + 1)
    candidates = np.argwhere(last == horizon)[:pattern_pairs]
    for i, j in candidates:
        misses = [n for n in tail if not eng.hits(n)[i, j]]
        pattern = _periodic_miss_pattern(misses, tail)
        if pattern is not None:
            q, r = pattern
            ev = {
                "failing_pair": {"U": eng.U[int(i)], "V": eng.V[int(j)]},
                "miss_pattern": {"modulus": q, "residue": r, "window": [tail.start, tail.stop - 1]},
                "misses": misses,
            }
            return PropertyVerdict("mixing", Verdict.REFUTED, params, ev, seed, heuristic=True, caveats=caveats)
    ev = {"best_threshold": n0, "pairs_missing_late": int(np.count_nonzero(last > horizon // 2))}
    return PropertyVerdict("mixing", Verdict.INCONCLUSIVE, params, ev, seed, caveats=caveats)


def perturbations(space: SpaceDescriptor, x, radius: float, count: int, rng) -> list:
    """Points ``y != x`` with ``d(x, y) < radius``."""
    if space.kind in (INTERVAL, CIRCLE):
        offs = radius * np.linspace(-1.0, 1.0, count + 2)[1:-1]
        offs = np.concatenate([offs, rng.uniform(-radius, radius, size=max(1, count // 4))])
        pts = []
        for o in offs:
            if o == 0.0:
                continue
            y = circle_point(x + o) if space.kind == CIRCLE else x + o
            if space.compact and not space.lo <= y <= space.hi:
                continue
            pts.append(float(y))
        return pts
    if space.kind == SYMBOLIC:
        out = []
        j0 = 0
        while 2.0**-j0 >= radius:
            j0 += 1
        n = len(x)
        for j in range(j0, j0 + 6):
            for sign in (1, -1):
                t = sign * j
                period = n * math.ceil((2 * j + 4) / n)
                bits = list(x.window(0, period - 1))
                bits[t % period] = "1" if bits[t % period] == "0" else "0"
                y = Word("".join(bits))
                if 0 < _distance(space, x, y) < radius:
                    out.append(y)
        return out
    fx, fy = space.factors
    ys = [(y, x[1]) for y in perturbations(fx, x[0], radius, count, rng)]
    ys += [(x[0], y) for y in perturbations(fy, x[1], radius, count, rng)]
    return ys


def check_sensitive(
    fam: MapFamily,
    delta: float,
    eps_perturb: float,
    horizon: int,
    *,
    samples: int = 64,
    seed: int = 0,
    window: bool = False,
) -> PropertyVerdict:
    """For every net point ``x`` (net at ``eps_perturb``) find ``y`` with
    ``d(x, y) < eps_perturb`` and ``n <= horizon`` with ``d(f_1^n x, f_1^n y) > delta``.
    """
    space = fam.space
    balls, caveats = _net_balls(fam, eps_perturb, window)
    rng = np.random.default_rng(seed)
    params = {"delta": delta, "eps_perturb": eps_perturb, "horizon": horizon, "net_size": len(balls)}
    records = []
    for x, _ in balls:
        ys = perturbations(space, x, eps_perturb, samples, rng)
        found = _separation(fam, x, ys, delta, horizon)
        if found is None:
            ev = {"unseparated_point": x, "candidates": len(ys)}
            return PropertyVerdict("sensitive", Verdict.REFUTED, params, ev, seed, caveats=caveats)
        records.append({"x": x, "y": found[0], "n": found[1], "separation": found[2]})
    ev = {"complete": True, "witnesses": records}
    return PropertyVerdict("sensitive", Verdict.WITNESSED, params, ev, seed, caveats=caveats)


def _separation(fam, x, ys, delta, horizon):
    space = fam.space
    if not ys:
        return None
    if space.is_numeric:
        traj = orbit_array(fam, np.array([x] + list(ys)), horizon)
        d = np.abs(traj[1:, 1:] - traj[1:, :1])
        if space.kind == CIRCLE:
            d = np.minimum(d, TWO_PI - d)
        ok = d > delta
        cols = np.flatnonzero(ok.any(axis=0))
        if cols.size == 0:
            return None
        k = int(cols[0])
        n = int(np.argmax(ok[:, k])) + 1
        return ys[k], n, float(d[n - 1, k])
    ox = orbit(fam, x, horizon)
    for y in ys:
        oy = orbit(fam, y, horizon)
        for n in range(1, horizon + 1):
            sep = _distance(space, ox[n], oy[n])
            if sep > delta:
                return y, n, sep
    return None


def _periodic_candidates(fam, center, radius, period_bound, multiples, grid, tol):
    """Yield ``(x, n)`` with ``x`` within ``radius`` of ``center`` and periodic of period ``n``."""
    space = fam.space
    if space.kind == SYMBOLIC:
        a = window_radius(radius)
        S = shift_amounts(fam, period_bound * multiples)
        base = center.window(-a, a)
        words = [center] + [Word.from_window(base, -a, period=L) for L in range(2 * a + 1, 2 * a + 2 + period_bound)]
        for z in words:
            if _distance(space, z, center) >= radius:
                continue
            L = len(z)
            for n in range(1, period_bound + 1):
                if all(int(S[n * k]) % L == 0 for k in range(1, multiples + 1)):
                    yield z, n
                    break
        return
    if space.is_numeric:
        lo, hi = center - radius, center + radius
        xs = np.linspace(lo, hi, grid + 2)[1:-1]
        if space.compact and space.kind == INTERVAL:
            xs = xs[(xs >= space.lo) & (xs <= space.hi)]
        if space.kind == CIRCLE:
            xs = np.mod(xs, TWO_PI)
        for n in range(1, period_bound + 1):
            traj = orbit_array(fam, xs, n)
            g = traj[-1] - xs
            if space.kind == CIRCLE:
                g = np.mod(g + math.pi, TWO_PI) - math.pi
            close = np.flatnonzero(np.abs(g) <= tol)
            for k in close:
                yield float(xs[k]), n
            roots = []
            for k in np.flatnonzero(np.sign(g[:-1]) * np.sign(g[1:]) < 0)[:16]:

                def gfun(t, n=n):
                    v = orbit(fam, circle_point(t) if space.kind == CIRCLE else float(t), n)[-1] - (
                        circle_point(t) if space.kind == CIRCLE else t
                    )
                    return (v + math.pi) % TWO_PI - math.pi if space.kind == CIRCLE else v

                try:
                    roots.append(brentq(gfun, xs[k], xs[k + 1], xtol=1e-15))
                except ValueError:
                    continue
            for r in roots:
                r = circle_point(r) if space.kind == CIRCLE else float(r)
                yield r, n
        return
    if space.kind == PRODUCT:
        cx = list(
            _periodic_candidates(fam.component(0), center[0], radius, period_bound, multiples, grid, tol)
        )[:8]
        cy = list(
            _periodic_candidates(fam.component(1), center[1], radius, period_bound, multiples, grid, tol)
        )[:8]
        for x, nx in cx:
            for y, ny in cy:
                n = nx * ny // math.gcd(nx, ny)
                if n <= period_bound:
                    yield (x, y), n


def check_periodic_dense(
    fam: MapFamily,
    eps: float,
    period_bound: int,
    multiples: int = 3,
    *,
    tol: float = 1e-9,
    grid: int = 400,
    seed: int = 0,
    window: bool = False,
) -> PropertyVerdict:
    """Every eps-net ball contains a point with ``f_1^{nk}(x) = x`` for ``k <= multiples``, some ``n <= period_bound``."""
    space = fam.space
    balls, caveats = _net_balls(fam, eps, window)
    params = {"eps": eps, "period_bound": period_bound, "multiples": multiples, "net_size": len(balls), "tol": tol}
    records = []
    for c, r in balls:
        hit = None
        for x, n in _periodic_candidates(fam, c, r, period_bound, multiples, grid, tol):
            if _distance(space, x, c) >= r:
                continue
            chk = periodicity_evidence(fam, x, n, multiples, tol)
            if chk.periodic:
                hit = {"center": c, "point": x, "n": n, "exact": chk.exact}
                break
        if hit is None:
            ev = {"empty_ball": {"center": c, "radius": r}}
            return PropertyVerdict("periodic_dense", Verdict.REFUTED, params, ev, seed, caveats=caveats)
        records.append(hit)
    ev = {"complete": True, "witnesses": records}
    return PropertyVerdict("periodic_dense", Verdict.WITNESSED, params, ev, seed, caveats=caveats)


@dataclass
class DevaneyParams:
    eps: float = 0.5
    horizon: int = 30
    delta: float = 0.25
    eps_perturb: float = 0.25
    period_bound: int = 16
    multiples: int = 3
    samples: int = 128
    window: bool = False


def check_devaney(fam: MapFamily, params: DevaneyParams | None = None, *, seed: int = 0) -> PropertyVerdict:
    """Transitivity + dense periodic points + sensitivity; the Wiggins sub-verdict drops periodicity."""
    p = params or DevaneyParams()
    trans = check_transitive(fam, p.eps, p.horizon, samples=p.samples, seed=seed, window=p.window)
    per = check_periodic_dense(fam, p.eps, p.period_bound, p.multiples, seed=seed, window=p.window)
    sens = check_sensitive(fam, p.delta, p.eps_perturb, p.horizon, seed=seed, window=p.window)
    wig = _conjunction("wiggins", [trans, sens], vars(p), seed)
    out = _conjunction("devaney", [trans, per, sens], vars(p), seed)
    out.sub = {"transitive": trans, "periodic_dense": per, "sensitive": sens, "wiggins": wig}
    return out


def _conjunction(name, parts, params, seed):
    verdicts = [v.verdict for v in parts]
    if all(v is Verdict.WITNESSED for v in verdicts):
        verdict = Verdict.WITNESSED
    elif any(v is Verdict.REFUTED for v in verdicts):
        verdict = Verdict.REFUTED
    else:
        verdict = Verdict.INCONCLUSIVE
    caveats = sorted({c for v in parts for c in v.caveats})
    ev = {v.name: v.verdict.value for v in parts}
    return PropertyVerdict(name, verdict, dict(params), ev, seed, any(v.heuristic for v in parts), caveats)


# re-verification from evidence alone


def reverify(fam: MapFamily, verdict: PropertyVerdict) -> bool:
    """Re-simulate every witness recorded in a witnessed verdict."""
    if verdict.verdict is not Verdict.WITNESSED:
        return True
    space = fam.space
    if verdict.sub:
        return all(reverify(fam, v) for v in verdict.sub.values())
    ev = verdict.evidence
    if verdict.name in ("transitive", "mixing", "measure_mixing_base"):
        for rec in ev.get("witnesses", []):
            (cu, ru), (cv, rv) = rec["U"], rec["V"]
            w = rec["witness"]
            if not _distance(space, w, cu) < ru:
                return False
            if not _distance(space, orbit(fam, w, rec["n"])[-1], cv) < rv:
                return False
        return bool(ev.get("witnesses"))
    if verdict.name == "sensitive":
        eps = verdict.params["eps_perturb"]
        delta = verdict.params["delta"]
        for rec in ev["witnesses"]:
            x, y, n = rec["x"], rec["y"], rec["n"]
            if not _distance(space, x, y) < eps:
                return False
            if not _distance(space, orbit(fam, x, n)[-1], orbit(fam, y, n)[-1]) > delta:
                return False
        return True
    if verdict.name == "periodic_dense":
        eps = verdict.params["eps"]
        for rec in ev["witnesses"]:
            if not _distance(space, rec["point"], rec["center"]) < eps:
                return False
            chk = periodicity_evidence(fam, rec["point"], rec["n"], verdict.params["multiples"], verdict.params["tol"])
            if not chk.periodic:
                return False
        return True
    return True
