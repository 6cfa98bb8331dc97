import numpy as np
import pytest
from hypothesis import given, strategies as st

from nads import catalog, spaces
from nads import specification as SP
from nads import systems as S
from nads.errors import SpecError
from nads.measures import (
    EmpiricalMeasure,
    check_mixing_measures,
    induced_measure_family,
    lift_witness_measures,
    prohorov,
    prohorov_bruteforce,
    pushforward,
    reverify_measures,
)
from nads.properties import Verdict
from nads.serialize import decode_verdict, encode_verdict
from nads.spaces import OpenBallSet
from nads.symbolic import Word

from oracles import line_distance, prohorov_definition

SIGMA = S.autonomous(spaces.symbolic(), S.shift(1))
UNIT = spaces.interval()
atoms = st.lists(st.sampled_from([0.0, 0.1, 0.25, 0.3, 0.5, 0.7, 0.95]), min_size=1, max_size=6)


def test_measure_equality_is_normalized():
    assert EmpiricalMeasure([0.1, 0.2]) == EmpiricalMeasure([0.2, 0.1, 0.1, 0.2])
    assert hash(EmpiricalMeasure([0.1, 0.2])) == hash(EmpiricalMeasure([0.2, 0.1, 0.1, 0.2]))
    assert EmpiricalMeasure([0.1]) != EmpiricalMeasure([0.1, 0.2])
    assert EmpiricalMeasure([0.1, 0.1, 0.5]).mass(lambda a: a < 0.3) == pytest.approx(2 / 3)
    with pytest.raises(ValueError):
        EmpiricalMeasure([])


@given(atoms, atoms)
def test_backends_and_definition_agree(a, b):
    mu, nu = EmpiricalMeasure(a), EmpiricalMeasure(b)
    ref = prohorov_definition(line_distance, a, b)
    assert prohorov(UNIT, mu, nu, "subsets") == pytest.approx(ref, abs=1e-9)
    assert prohorov(UNIT, mu, nu, "flow") == pytest.approx(ref, abs=1e-9)
    assert prohorov_bruteforce(UNIT, mu, nu) == pytest.approx(ref, abs=1e-9)


def test_large_support_uses_flow(rng):
    a = rng.uniform(0, 1, 20)
    b = rng.uniform(0, 1, 15)
    mu, nu = EmpiricalMeasure(a), EmpiricalMeasure(b)
    assert prohorov(UNIT, mu, nu) == pytest.approx(prohorov(UNIT, mu, nu, "flow"))
    with pytest.raises(ValueError):
        prohorov(UNIT, mu, nu, "simplex")


def test_known_values():
    half = EmpiricalMeasure([0.0, 1.0])
    assert prohorov(UNIT, half, EmpiricalMeasure([0.0])) == 0.5
    assert prohorov(UNIT, EmpiricalMeasure.dirac(0.2), EmpiricalMeasure.dirac(0.5)) == pytest.approx(0.3)
    far = spaces.interval(0, 10)
    assert prohorov(far, EmpiricalMeasure.dirac(0.0), EmpiricalMeasure.dirac(7.0)) == 1.0


def test_pushforward_keeps_atom_count():
    mu = EmpiricalMeasure([0.25, 0.75, 0.75])
    img = pushforward(S.autonomous(UNIT, S.logistic(4.0)), mu, 1)
    assert img.n == 3 and img == EmpiricalMeasure([0.75])
    assert pushforward(SIGMA, EmpiricalMeasure([Word("01")]), 1) == EmpiricalMeasure([Word("10")])
    with pytest.raises(ValueError):
        pushforward(SIGMA, mu, -1)


def test_lift_measures_on_sigma_and_logistic():
    mu = EmpiricalMeasure([Word("0"), Word("01")])
    nu = EmpiricalMeasure([Word("1"), Word("1")])
    spec = SP.SegmentSpec(((0, 0), (8, 8)), (mu, nu), 0.5, gap=7, period=18)
    mfam, mspec, cert = lift_witness_measures(SIGMA, spec)
    assert SP.verify_certificate(mfam, mspec, cert)
    f = catalog.get("logistic-2periodic").family
    spec = SP.SegmentSpec(((0, 0), (10, 10)), (EmpiricalMeasure([0.2, 0.4]), EmpiricalMeasure([0.6, 0.9])), 0.2, gap=9)
    mfam, mspec, cert = lift_witness_measures(f, spec)
    assert SP.verify_certificate(induced_measure_family(f), mspec, cert)


def test_lift_measures_needs_equal_atom_counts():
    spec = SP.SegmentSpec(((0, 0), (8, 8)), (EmpiricalMeasure([Word("0")]), EmpiricalMeasure([Word("1"), Word("0")])), 0.5, gap=7)
    with pytest.raises(SpecError):
        lift_witness_measures(SIGMA, spec)


def test_measure_mixing_evidence_survives_json():
    U, V = OpenBallSet.ball(Word("0"), 0.5), OpenBallSet.ball(Word("1"), 0.5)
    v = check_mixing_measures(SIGMA, U, V, 0.8, 10, 40)
    assert v.verdict is Verdict.WITNESSED
    assert reverify_measures(SIGMA, U, V, v)
    assert reverify_measures(SIGMA, U, V, decode_verdict(encode_verdict(v)))
    n = next(iter(v.evidence["base_hits"]))
    v.evidence["base_hits"][n] = Word("1")
    assert not reverify_measures(SIGMA, U, V, v)


def test_measure_mixing_threshold_bounds():
    U = OpenBallSet.ball(Word("0"), 0.5)
    with pytest.raises(ValueError):
        check_mixing_measures(SIGMA, U, U, 1.0)


def test_measure_mixing_refuted_for_zigzag():
    U, V = OpenBallSet.ball(Word("0"), 0.5), OpenBallSet.ball(Word("1"), 0.5)
    v = check_mixing_measures(catalog.get("shift-zigzag").family, U, V, 0.8, 10, 40)
    assert v.verdict is Verdict.REFUTED and v.evidence["miss_pattern"]["modulus"] == 2
