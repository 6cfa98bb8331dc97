"""Empirical measures, the Prohorov metric and the induced measure family.

An :class:`EmpiricalMeasure` is ``(delta_{x_1} + ... + delta_{x_n}) / n``;
these are dense among Borel probability measures, so they are the only
representation. The Prohorov distance is exact for such measures: it is
found among finitely many candidate values (atom distances and mass
differences) by bisection on a feasibility test. Two feasibility tests are
provided and must agree: subset enumeration (small supports) and a max-flow
formulation (Strassen), which is used for large supports.
"""

from __future__ import annotations

import math
from collections import Counter
from typing import Any, Iterable, Sequence

import numpy as np
from scipy.sparse import csr_matrix
from scipy.sparse.csgraph import maximum_flow

from nads import kernels
from nads.errors import SpecError
from nads.properties import (
    MAX_EVIDENCE,
    PropertyVerdict,
    Verdict,
    _periodic_miss_pattern,
    make_engine,
)
from nads.spaces import CIRCLE, OpenBallSet, SpaceDescriptor, _distance, ball_contains
from nads.specification import (
    DEFAULT_MULTIPLES,
    SegmentSpec,
    TracingCertificate,
    certify,
    find_ssp_witness,
    find_wsp_witness,
    verify_certificate,
)
from nads.systems import MapFamily, orbit, orbit_array

SUBSET_LIMIT = 12


class EmpiricalMeasure:
    """Uniform measure on a list of atoms; repeated atoms carry extra weight."""

    __slots__ = ("atoms", "_counts")

    def __init__(self, atoms: Iterable[Any]):
        self.atoms = tuple(atoms)
        if not self.atoms:
            raise ValueError("EmpiricalMeasure needs at least one atom")
        self._counts = Counter(self.atoms)

    @classmethod
    def dirac(cls, x) -> "EmpiricalMeasure":
        return cls([x])

    @property
    def n(self) -> int:
        return len(self.atoms)

    def support(self) -> list[tuple[Any, int]]:
        """Distinct atoms with multiplicities, in first-seen order."""
        return list(self._counts.items())

    def mass(self, pred) -> float:
        return sum(c for a, c in self._counts.items() if pred(a)) / self.n

    def __eq__(self, other):
        if not isinstance(other, EmpiricalMeasure):
            return NotImplemented
        # equal as measures: identical normalized weights
        return all(
            self._counts.get(a, 0) * other.n == other._counts.get(a, 0) * self.n
            for a in set(self._counts) | set(other._counts)
        )

    def __hash__(self):
        g = math.gcd(*self._counts.values())
        return hash(frozenset((a, c // g) for a, c in self._counts.items()))

    def __repr__(self):
        return f"EmpiricalMeasure({list(self.atoms)!r})"


# Prohorov distance


def _setup(space, mu: EmpiricalMeasure, nu: EmpiricalMeasure):
    su, sv = mu.support(), nu.support()
    if space.is_numeric:
        d = kernels.pairwise_distance(
            np.array([a for a, _ in su], dtype=np.float64),
            np.array([b for b, _ in sv], dtype=np.float64),
            space.kind == CIRCLE,
        )
    else:
        d = np.array([[_distance(space, a, b) for b, _ in sv] for a, _ in su], dtype=np.float64)
    L = math.lcm(mu.n, nu.n)
    # integer masses scaled by L keep every comparison exact
    p = np.array([c * (L // mu.n) for _, c in su], dtype=np.int64)
    q = np.array([c * (L // nu.n) for _, c in sv], dtype=np.int64)
    return d, p, q, L


def _one_sided_subsets(adj: np.ndarray, p: np.ndarray, q: np.ndarray, slack: float) -> bool:
    k = len(p)
    masks = ((np.arange(1, 2**k)[:, None] >> np.arange(k)) & 1).astype(bool)
    neigh = (masks.astype(np.int64) @ adj.astype(np.int64)) > 0
    return bool(np.all(masks @ p <= neigh @ q + slack))


def feasible_subsets(d, p, q, L, eps) -> bool:
    """``mu(S) <= nu(N(S, eps)) + eps`` and the mirror condition, over all atom subsets ``S``."""
    adj = d < eps
    slack = eps * L
    return _one_sided_subsets(adj, p, q, slack) and _one_sided_subsets(adj.T, q, p, slack)


def feasible_flow(d, p, q, L, eps) -> bool:
    """Same test via max-flow: ``maxflow >= (1 - eps) L`` on the ``d < eps`` bipartite graph.

    By the defect form of Hall's theorem the max flow is
    ``L - max_S (mu(S) - nu(N(S)))``; the graph is the same in both
    directions, so one flow decides both conditions.
    """
    a, b = d.shape
    adj = d < eps
    src, sink = 0, a + b + 1
    rows, cols, caps = [], [], []
    for i in range(a):
        rows.append(src), cols.append(1 + i), caps.append(int(p[i]))
    ii, jj = np.nonzero(adj)
    rows.extend((1 + ii).tolist())
    cols.extend((1 + a + jj).tolist())
    caps.extend([int(L)] * len(ii))
    for j in range(b):
        rows.append(1 + a + j), cols.append(sink), caps.append(int(q[j]))
    g = csr_matrix((np.array(caps, dtype=np.int32), (rows, cols)), shape=(a + b + 2, a + b + 2))
    flow = maximum_flow(g, src, sink).flow_value
    return flow >= (1.0 - eps) * L


def prohorov_candidates(d: np.ndarray, n: int, m: int) -> np.ndarray:
    """All values where feasibility can change: 0, 1, atom distances, mass differences."""
    masses = {abs(i / n - j / m) for i in range(n + 1) for j in range(m + 1)}
    vals = np.concatenate([[0.0, 1.0], d.ravel(), np.fromiter(masses, dtype=np.float64)])
    return np.unique(vals[(vals >= 0.0) & (vals <= 1.0)])


def prohorov(space: SpaceDescriptor, mu: EmpiricalMeasure, nu: EmpiricalMeasure, backend: str = "auto") -> float:
    """Prohorov distance between empirical measures.

    Feasibility is constant between consecutive candidates, so the distance
    is the first candidate whose following open interval is feasible
    (tested at its midpoint). ``backend`` is ``"subsets"``, ``"flow"`` or
    ``"auto"`` (subsets up to 12 support points).
    """
    d, p, q, L = _setup(space, mu, nu)
    if backend == "auto":
        backend = "subsets" if max(len(p), len(q)) <= SUBSET_LIMIT else "flow"
    if backend == "subsets":
        test = feasible_subsets
    elif backend == "flow":
        test = feasible_flow
    else:
        raise ValueError(f"unknown backend {backend!r}")
    cand = prohorov_candidates(d, mu.n, nu.n)
    mids = np.append((cand[:-1] + cand[1:]) / 2, cand[-1] + 0.5)
    lo, hi = 0, len(cand) - 1  # the interval after candidate 1 is always feasible
    while lo < hi:
        mid = (lo + hi) // 2
        if test(d, p, q, L, mids[mid]):
            hi = mid
        else:
            lo = mid + 1
    return float(cand[lo])


def prohorov_bruteforce(space: SpaceDescriptor, mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
    """Reference value by scanning every candidate (no bisection, subset test only)."""
    d, p, q, L = _setup(space, mu, nu)
    cand = prohorov_candidates(d, mu.n, nu.n)
    for k, c in enumerate(cand):
        nxt = cand[k + 1] if k + 1 < len(cand) else c + 1.0
        if feasible_subsets(d, p, q, L, (c + nxt) / 2):
            return float(c)
    return 1.0


# induced family


def pushforward(fam: MapFamily, mu: EmpiricalMeasure, n: int) -> EmpiricalMeasure:
    """Image measure under ``f_1^n``: atoms are mapped, the atom count is kept."""
    if n < 0:
        raise ValueError("n must be nonnegative")
    if n == 0:
        return mu
    return MeasureFamily(fam).orbit(mu, n)[-1]


class MeasureFamily:
    """Induced family ``f~_n(mu) = mu o f_n^{-1}`` on empirical measures."""

    def __init__(self, base: MapFamily):
        self.base = base
        self.space = base.space

    def orbit(self, mu: EmpiricalMeasure, N: int) -> list[EmpiricalMeasure]:
        atoms = mu.atoms
        if self.space.is_numeric and N > 0:
            try:
                traj = orbit_array(self.base, np.asarray(atoms, dtype=np.float64), N)
                return [EmpiricalMeasure(float(v) for v in traj[j]) for j in range(N + 1)]
            except Exception:  # no kernel form
                pass
        orbits = [orbit(self.base, a, N) for a in atoms]
        return [EmpiricalMeasure(o[j] for o in orbits) for j in range(N + 1)]

    def distance(self, mu: EmpiricalMeasure, nu: EmpiricalMeasure) -> float:
        return prohorov(self.space, mu, nu)

    def __repr__(self):
        return f"MeasureFamily({self.base!r})"


def induced_measure_family(fam: MapFamily) -> MeasureFamily:
    return MeasureFamily(fam)


def lift_witness_measures(
    fam: MapFamily,
    spec: SegmentSpec,
    base_certs: Sequence[TracingCertificate | None] | None = None,
    *,
    multiples: int = DEFAULT_MULTIPLES,
    budget: int = 4000,
    seed: int = 0,
):
    """Trace empirical target measures by ``rho = (sum delta_{z_l}) / n``.

    All targets must have the same atom count ``n``; atom ``l`` of each
    target (in list order) gives the base spec traced by ``base_certs[l]``.
    Missing certificates are searched for. Returns
    ``(measure_family, spec, cert)``.
    """
    targets = [t if isinstance(t, EmpiricalMeasure) else EmpiricalMeasure(t) for t in spec.targets]
    n = targets[0].n
    if any(t.n != n for t in targets):
        raise SpecError("all target measures need the same atom count")
    if base_certs is not None and len(base_certs) != n:
        raise SpecError(f"need {n} base certificates, got {len(base_certs)}")
    certs = []
    for l in range(n):
        base_targets = tuple(t.atoms[l] for t in targets)
        cert = None if base_certs is None else base_certs[l]
        if cert is None:
            base_spec = SegmentSpec(spec.segments, base_targets, spec.eps, spec.gap, spec.period, spec.stride)
            if spec.period is None:
                cert = find_wsp_witness(fam, base_spec, budget=budget, seed=seed + l)
            else:
                cert = find_ssp_witness(fam, base_spec, multiples, budget=budget, seed=seed + l)
            if not cert:
                raise SpecError(f"missing base certificate for atom {l} ({cert.reason})")
        else:
            base_spec = SegmentSpec(spec.segments, base_targets, spec.eps, spec.gap, cert.period, spec.stride)
            if not verify_certificate(fam, base_spec, cert):
                raise SpecError(f"base certificate {l} does not verify")
        certs.append(cert)
    period = None if spec.period is None else math.lcm(*(c.period for c in certs))
    mfam = MeasureFamily(fam)
    mspec = SegmentSpec(spec.segments, tuple(targets), spec.eps, spec.gap, period, spec.stride)
    rho = EmpiricalMeasure(c.witness for c in certs)
    out = certify(mfam, mspec, rho, multiples=multiples, budget=sum(c.budget for c in certs), method="measure-lift")
    if out is None:
        raise SpecError("lifted measure fails Prohorov tracing")
    return mfam, mspec, out


# mixing on the measure space


def _in_set(space, balls: OpenBallSet):
    return lambda a: ball_contains(space, balls, a)


def check_mixing_measures(
    fam: MapFamily,
    U: OpenBallSet,
    V: OpenBallSet,
    threshold: float = 0.8,
    atom_count: int = 10,
    horizon: int = 40,
    *,
    samples: int = 128,
    seed: int = 0,
) -> PropertyVerdict:
    """Measure-level mixing between ``W1 = {mu(U) > threshold}`` and ``W2 = {mu(V) > threshold}``.

    For each ``n`` a measure with ``atom_count`` atoms is assembled from base
    points ``u in U`` with ``f_1^n(u) in V`` and accepted only if
    ``mu(U) > threshold`` and ``f~_1^n(mu)(V) > threshold`` by direct count.
    Conversely every accepted measure yields a base hit: when
    ``threshold >= 1/2`` the two conditions force an atom in
    ``U`` whose image lies in ``V``, and that atom is recorded and rechecked.
    """
    if not 0.0 < threshold < 1.0:
        raise ValueError("threshold must lie in (0, 1)")
    space = fam.space
    inU, inV = _in_set(space, U), _in_set(space, V)
    eng = make_engine(fam, list(U), list(V), horizon, samples=samples, seed=seed)
    params = {"threshold": threshold, "atom_count": atom_count, "horizon": horizon, "samples": samples}
    found: dict[int, tuple[EmpiricalMeasure, Any]] = {}
    for n in range(1, horizon + 1):
        h = eng.hits(n)
        pts = []
        for i, j in zip(*np.nonzero(h)):
            w = eng.witness(int(i), int(j), n)
            if w is not None and w not in pts:
                pts.append(w)
            if len(pts) >= atom_count:
                break
        if not pts:
            continue
        mu = EmpiricalMeasure(pts[k % len(pts)] for k in range(atom_count))
        image = pushforward(fam, mu, n)
        if not (mu.mass(inU) > threshold and image.mass(inV) > threshold):
            continue
        # converse direction: recover a base witness from the measure
        base = next((a for a in mu.atoms if inU(a) and inV(orbit(fam, a, n)[-1])), None)
        if base is not None:
            found[n] = (mu, base)
    misses = [n for n in range(1, horizon + 1) if n not in found]
    n0 = (max(misses) + 1) if misses else 1
    if n0 <= horizon // 2:
        shown = [n for n in range(n0, horizon + 1)]
        if len(shown) > MAX_EVIDENCE:
            shown = shown[:MAX_EVIDENCE]
        ev = {
            "threshold_time": n0,
            "measures": {n: list(found[n][0].atoms) for n in shown},
            "base_hits": {n: found[n][1] for n in shown},
        }
        return PropertyVerdict("mixing-measures", Verdict.WITNESSED, params, ev, seed)
    tail = range(horizon // 2 + 1, horizon + 1)
    pattern = _periodic_miss_pattern(misses, tail)
    if pattern is not None:
        q, r = pattern
        ev = {"misses": misses, "miss_pattern": {"modulus": q, "residue": r, "window": [tail.start, tail.stop - 1]}}
        return PropertyVerdict("mixing-measures", Verdict.REFUTED, params, ev, seed, heuristic=True)
    return PropertyVerdict("mixing-measures", Verdict.INCONCLUSIVE, params, {"misses": misses}, seed)


def reverify_measures(fam: MapFamily, U: OpenBallSet, V: OpenBallSet, verdict: PropertyVerdict) -> bool:
    """Recount masses for every recorded measure and recheck the base hits."""
    space = fam.space
    inU, inV = _in_set(space, U), _in_set(space, V)
    thr = verdict.params["threshold"]
    for n, atoms in verdict.evidence.get("measures", {}).items():
        mu = EmpiricalMeasure(atoms)
        b = verdict.evidence["base_hits"][n]
        n = int(n)  # keys are strings after a JSON round trip
        if not (mu.mass(inU) > thr and pushforward(fam, mu, n).mass(inV) > thr):
            return False
        if not (inU(b) and inV(orbit(fam, b, n)[-1])):
            return False
    return True
