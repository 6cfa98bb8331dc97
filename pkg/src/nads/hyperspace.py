"""Finite subsets of a space under the Hausdorff metric, and the induced family.

``F(X)`` is dense in the hyperspace ``K(X)`` of nonempty compact subsets, so
finite sets are the only representation. The induced map sends ``A`` to its
image set ``{f_n(a)}``; images may lose points when ``f_n`` is not injective.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Iterable, Sequence

import numpy as np

from nads import kernels
from nads.errors import InvalidHyperCertificateError, SpecError
from nads.spaces import CIRCLE, SpaceDescriptor, _distance
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


class FiniteCompact:
    """Nonempty finite set of points; duplicates dropped, first-seen order kept."""

    __slots__ = ("points", "_set")

    def __init__(self, points: Iterable[Any]):
        pts = tuple(dict.fromkeys(points))
        if not pts:
            raise ValueError("FiniteCompact needs at least one point")
        self.points = pts
        self._set = frozenset(pts)

    def __len__(self):
        return len(self.points)

    def __iter__(self):
        return iter(self.points)

    def __eq__(self, other):
        return isinstance(other, FiniteCompact) and self._set == other._set

    def __hash__(self):
        return hash(self._set)

    def __repr__(self):
        return f"FiniteCompact({list(self.points)!r})"


def hausdorff(space: SpaceDescriptor, A: FiniteCompact, B: FiniteCompact) -> float:
    """``max(sup_a d(a, B), sup_b d(b, A))`` for finite sets."""
    if space.is_numeric:
        d = kernels.pairwise_distance(
            np.fromiter(A.points, dtype=np.float64), np.fromiter(B.points, dtype=np.float64), space.kind == CIRCLE
        )
    else:
        d = np.array([[_distance(space, a, b) for b in B.points] for a in A.points])
    return float(max(d.min(axis=1).max(), d.min(axis=0).max()))


def _point_orbits(fam: MapFamily, pts: Sequence[Any], N: int) -> list[list]:
    if fam.space.is_numeric and N > 0:
        try:
            traj = orbit_array(fam, np.asarray(pts, dtype=np.float64), N)
            return [[float(v) for v in traj[:, k]] for k in range(len(pts))]
        except Exception:  # no kernel form; fall back to scalar orbits
            pass
    return [orbit(fam, p, N) for p in pts]


class HyperspaceFamily:
    """Induced family ``f̄_n(A) = f_n(A)`` on finite sets; ``f̄_1^n = (f_1^n)``-image."""

    def __init__(self, base: MapFamily):
        self.base = base
        self.space = base.space

    def orbit(self, A: FiniteCompact, N: int) -> list[FiniteCompact]:
        orbits = _point_orbits(self.base, A.points, N)
        return [FiniteCompact(o[j] for o in orbits) for j in range(N + 1)]

    def distance(self, A: FiniteCompact, B: FiniteCompact) -> float:
        return hausdorff(self.space, A, B)

    def __repr__(self):
        return f"HyperspaceFamily({self.base!r})"


def induced_family(fam: MapFamily) -> HyperspaceFamily:
    return HyperspaceFamily(fam)


def _aligned(targets: Sequence[FiniteCompact], enumerations) -> list[list]:
    if enumerations is not None:
        enum = [list(e) for e in enumerations]
        if len(enum) != len(targets) or any(FiniteCompact(e) != A for e, A in zip(enum, targets)):
            raise SpecError("enumerations must list exactly the points of each target set")
        n = len(enum[0])
        if any(len(e) != n for e in enum):
            raise SpecError("aligned enumerations must have equal length")
        return enum
    n = max(len(A) for A in targets)
    # cycle shorter sets so every index i has a point x_i^l in each A_l
    return [[A.points[i % len(A)] for i in range(n)] for A in targets]


def lift_witness_hyperspace(
    fam: MapFamily,
    spec: SegmentSpec,
    base_certs: Sequence[TracingCertificate | None] | None = None,
    *,
    enumerations=None,
    multiples: int = DEFAULT_MULTIPLES,
    budget: int = 4000,
    seed: int = 0,
):
    """Trace finite target sets by the set ``C = {z_i}`` of base witnesses.

    ``spec.targets`` are :class:`FiniteCompact` sets ``A_l``. Element ``i``
    of each aligned enumeration gives a base spec with targets
    ``(x_i^1, ..., x_i^k)``; ``base_certs[i]`` must trace it (missing entries
    are searched for). With a period, ``C`` has period ``lcm`` of the
    element periods. Returns ``(induced_family, hyper_spec, cert)``.
    """
    targets = [A if isinstance(A, FiniteCompact) else FiniteCompact(A) for A in spec.targets]
    enum = _aligned(targets, enumerations)
    n = len(enum[0])
    if base_certs is not None and len(base_certs) != n:
        raise SpecError(f"need {n} base certificates, got {len(base_certs)}")
    certs = []
    for i in range(n):
        cert = None if base_certs is None else base_certs[i]
        base_targets = tuple(e[i] for e in enum)
        if cert is None:
            base_spec = SegmentSpec(spec.segments, base_targets, spec.eps, spec.gap, spec.period, spec.stride)
            if spec.period is None:
                cert = find_wsp_witness(fam, base_spec, budget=budget, seed=seed + i)
            else:
                cert = find_ssp_witness(fam, base_spec, multiples, budget=budget, seed=seed + i)
            if not cert:
                raise SpecError(f"missing base certificate for element {i} ({cert.reason})")
        else:
            base_spec = SegmentSpec(spec.segments, base_targets, spec.eps, spec.gap, cert.period, spec.stride)
            if not verify_certificate(fam, base_spec, cert):
                raise SpecError(f"base certificate {i} does not verify")
        certs.append(cert)
    period = None
    if spec.period is not None:
        period = math.lcm(*(c.period for c in certs))
    hyper = induced_family(fam)
    hspec = SegmentSpec(spec.segments, tuple(targets), spec.eps, spec.gap, period, spec.stride)
    C = FiniteCompact(c.witness for c in certs)
    out = certify(hyper, hspec, C, multiples=multiples, budget=sum(c.budget for c in certs), method="hyperspace-lift")
    if out is None:
        raise SpecError("lifted set fails Hausdorff tracing")
    for s, d in enumerate(out.distances):
        bound = max(c.distances[s] for c in certs)
        if d > bound + 1e-12:
            raise SpecError(f"Hausdorff distance {d} exceeds component bound {bound} on segment {s}")
    return hyper, hspec, out


def project_witness_from_hyperspace(fam: MapFamily, hyper_spec: SegmentSpec, cert: TracingCertificate, *, multiples: int = DEFAULT_MULTIPLES):
    """Pick ``b`` in the witness set that traces singleton targets in ``X``.

    Among elements passing base verification the one with the smallest
    worst-case tracing distance is returned as ``(base_spec, base_cert)``.
    """
    singles = []
    for A in hyper_spec.targets:
        if isinstance(A, FiniteCompact):
            if len(A) != 1:
                raise SpecError("projection needs singleton targets")
            singles.append(A.points[0])
        else:
            singles.append(A)
    base_spec = SegmentSpec(
        hyper_spec.segments, tuple(singles), hyper_spec.eps, hyper_spec.gap, hyper_spec.period, hyper_spec.stride
    )
    best = None
    for b in cert.witness:
        c = certify(fam, base_spec, b, multiples=multiples, budget=cert.budget, method="hyperspace-project")
        if c is not None and (best is None or max(c.distances) < max(best.distances)):
            best = c
    if best is None:
        raise InvalidHyperCertificateError("no element of the witness set traces the singleton targets")
    return base_spec, best
