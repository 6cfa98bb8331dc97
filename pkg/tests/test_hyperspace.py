import math

import pytest
from hypothesis import given, strategies as st

from nads import spaces
from nads import specification as SP
from nads import systems as S
from nads.errors import InvalidHyperCertificateError, SpecError
from nads.hyperspace import (
    FiniteCompact,
    hausdorff,
    induced_family,
    lift_witness_hyperspace,
    project_witness_from_hyperspace,
)
from nads.symbolic import Word

from oracles import circle_distance, hausdorff_brute, line_distance

SIGMA = S.autonomous(spaces.symbolic(), S.shift(1))
pts = st.lists(st.floats(0, 1), min_size=1, max_size=8)


def test_finite_compact_is_a_set():
    A = FiniteCompact([0.1, 0.2, 0.1])
    assert len(A) == 2 and A.points == (0.1, 0.2)
    assert A == FiniteCompact([0.2, 0.1]) and hash(A) == hash(FiniteCompact([0.2, 0.1]))
    with pytest.raises(ValueError):
        FiniteCompact([])


@given(pts, pts)
def test_hausdorff_matches_brute_force(a, b):
    A, B = FiniteCompact(a), FiniteCompact(b)
    assert hausdorff(spaces.interval(), A, B) == hausdorff_brute(line_distance, A.points, B.points)


@given(st.lists(st.floats(0, 6.28), min_size=1, max_size=6), st.lists(st.floats(0, 6.28), min_size=1, max_size=6))
def test_hausdorff_on_circle(a, b):
    A, B = FiniteCompact(a), FiniteCompact(b)
    assert hausdorff(spaces.circle(), A, B) == pytest.approx(hausdorff_brute(circle_distance, a, b), abs=1e-12)


def test_hausdorff_singletons_and_subsets():
    sp = spaces.interval()
    assert hausdorff(sp, FiniteCompact([0.2]), FiniteCompact([0.5])) == pytest.approx(0.3)
    assert hausdorff(sp, FiniteCompact([0.0, 1.0]), FiniteCompact([0.0])) == 1.0


def test_induced_orbit_is_image_set():
    fam = S.autonomous(spaces.interval(), S.logistic(4.0))
    hyper = induced_family(fam)
    orb = hyper.orbit(FiniteCompact([0.25, 0.75]), 2)
    assert orb[1] == FiniteCompact([0.75])  # images collapse into one point
    assert orb[2] == FiniteCompact([S.logistic(4.0)(0.75)])


def test_lift_uses_cycled_alignment():
    A = FiniteCompact([Word("0"), Word("01"), Word("011")])
    B = FiniteCompact([Word("1")])
    spec = SP.SegmentSpec(((0, 0), (8, 8)), (A, B), 0.5, gap=7)
    hyper, hspec, cert = lift_witness_hyperspace(SIGMA, spec)
    assert SP.verify_certificate(hyper, hspec, cert)
    assert 1 <= len(cert.witness) <= 3


def test_lift_with_period_and_explicit_certs():
    A, B = FiniteCompact([Word("0"), Word("01")]), FiniteCompact([Word("1"), Word("10")])
    spec = SP.SegmentSpec(((0, 0), (8, 8)), (A, B), 0.5, gap=7, period=18)
    base = [
        SP.find_ssp_witness(SIGMA, SP.SegmentSpec(spec.segments, (x, y), 0.5, 7, 18))
        for x, y in zip(A.points, B.points)
    ]
    hyper, hspec, cert = lift_witness_hyperspace(SIGMA, spec, base)
    assert hspec.period == math.lcm(*(c.period for c in base))
    assert SP.verify_certificate(hyper, hspec, cert)


def test_lift_rejects_bad_inputs():
    A, B = FiniteCompact([Word("0"), Word("01")]), FiniteCompact([Word("1")])
    spec = SP.SegmentSpec(((0, 0), (8, 8)), (A, B), 0.5, gap=7)
    with pytest.raises(SpecError):
        lift_witness_hyperspace(SIGMA, spec, [None])
    with pytest.raises(SpecError):
        lift_witness_hyperspace(SIGMA, spec, enumerations=[[Word("0")], [Word("1")]])
    wrong = SP.TracingCertificate(Word("1"), (0.0, 0.0))
    with pytest.raises(SpecError):
        lift_witness_hyperspace(SIGMA, spec, [wrong, wrong])


def test_project_picks_tracing_element():
    x, y = Word("0"), Word("1")
    single = SP.SegmentSpec(((0, 0), (8, 8)), (FiniteCompact([x]), FiniteCompact([y])), 0.5, gap=7)
    z = SP.find_wsp_witness(SIGMA, SP.SegmentSpec(single.segments, (x, y), 0.5, gap=7))
    hyper = induced_family(SIGMA)
    hcert = SP.certify(hyper, single, FiniteCompact([z.witness]))
    base_spec, base = project_witness_from_hyperspace(SIGMA, single, hcert)
    assert base.witness == z.witness and SP.verify_certificate(SIGMA, base_spec, base)
    forged = SP.TracingCertificate(FiniteCompact([Word("1")]), (0.0, 0.0))
    with pytest.raises(InvalidHyperCertificateError):
        project_witness_from_hyperspace(SIGMA, single, forged)
    pair = SP.SegmentSpec(single.segments, (FiniteCompact([x, y]), FiniteCompact([y])), 0.5, gap=7)
    with pytest.raises(SpecError):
        project_witness_from_hyperspace(SIGMA, pair, hcert)
