import pytest

from nads import catalog, spaces
from nads import systems as S
from nads.errors import UnsupportedOperationError
from nads.properties import (
    DevaneyParams,
    Verdict,
    _periodic_miss_pattern,
    check_devaney,
    check_mixing,
    check_periodic_dense,
    check_sensitive,
    check_transitive,
    hit_set,
    reverify,
)
from nads.spaces import OpenBallSet
from nads.symbolic import Word

SIGMA = S.autonomous(spaces.symbolic(), S.shift(1))


def fam(entry):
    return catalog.get(entry).family


def test_sigma_mixing_witnessed_and_reverified():
    v = check_mixing(SIGMA, 0.5, 30)
    assert v.verdict is Verdict.WITNESSED
    assert v.evidence["threshold"] <= 15
    assert reverify(SIGMA, v)


def test_tampered_evidence_fails_reverification():
    v = check_transitive(SIGMA, 0.5, 20)
    assert reverify(SIGMA, v)
    rec = v.evidence["witnesses"][0]
    c = rec["U"][0]
    flipped = "1" if c.at(0) == "0" else "0"
    rec["witness"] = Word.from_window(flipped + c.window(1, 8), 0, period=len(c) + 9)
    assert not reverify(SIGMA, v)


def test_identity_refuted():
    ident = fam("identity-interval")
    assert check_transitive(ident, 0.2, 20).verdict is Verdict.REFUTED
    mix = check_mixing(ident, 0.2, 20)
    assert mix.verdict is Verdict.REFUTED and mix.heuristic


def test_mixing_inconclusive_when_horizon_short():
    v = check_mixing(fam("shift-3periodic"), 0.5, 40)
    assert v.verdict is Verdict.INCONCLUSIVE
    assert check_mixing(fam("shift-3periodic"), 0.5, 60).verdict is Verdict.WITNESSED


def test_logistic_mixing_and_threads_agree():
    f = fam("logistic-2periodic")
    a = check_mixing(f, 0.1, 60, seed=4)
    b = check_mixing(f, 0.1, 60, seed=4, threads=3)
    assert a.verdict is Verdict.WITNESSED
    assert a.evidence["threshold"] == b.evidence["threshold"]
    assert reverify(f, a)


def test_circle_stretch_mixes():
    f = fam("circle-stretch")
    v = check_mixing(f, 0.7, 40)
    assert v.verdict is Verdict.WITNESSED and reverify(f, v)


def test_non_compact_needs_window():
    f = fam("collapsing-constants")
    with pytest.raises(UnsupportedOperationError):
        check_transitive(f, 0.5, 10)
    v = check_transitive(f, 0.5, 10, window=True)
    assert v.verdict is Verdict.REFUTED and v.caveats


def test_hit_set_sigma_and_zigzag():
    U, V = OpenBallSet.ball(Word("0"), 0.5), OpenBallSet.ball(Word("1"), 0.5)
    hs = hit_set(SIGMA, U, V, 20)
    assert hs.verify(SIGMA)
    assert set(range(7, 21)) <= set(hs.hits)
    zz = hit_set(fam("shift-zigzag"), U, V, 30)
    assert zz.verify(fam("shift-zigzag")) and all(n % 2 for n in zz.hits)
    with pytest.raises(ValueError):
        hit_set(SIGMA, U, V, 0)


def test_hit_set_numeric():
    f = S.autonomous(spaces.interval(), S.logistic(4.0))
    hs = hit_set(f, OpenBallSet.ball(0.2, 0.05), OpenBallSet.ball(0.8, 0.05), 10)
    assert hs.hits and hs.verify(f)


def test_sensitivity():
    assert check_sensitive(SIGMA, 0.25, 0.25, 30).verdict is Verdict.WITNESSED
    ident = fam("identity-interval")
    assert check_sensitive(ident, 0.25, 0.1, 30).verdict is Verdict.REFUTED


def test_periodic_dense():
    v = check_periodic_dense(fam("alternating-rotation"), 0.5, 4)
    assert v.verdict is Verdict.WITNESSED and reverify(fam("alternating-rotation"), v)
    assert check_periodic_dense(fam("collapsing-constants"), 0.5, 4, window=True).verdict is Verdict.REFUTED


def test_devaney_and_wiggins():
    v = check_devaney(fam("shift-zigzag"), DevaneyParams(eps=0.5, horizon=30, period_bound=4))
    assert v.verdict is Verdict.WITNESSED
    assert v.sub["wiggins"].verdict is Verdict.WITNESSED
    assert reverify(fam("shift-zigzag"), v)
    inv = check_devaney(fam("alternating-inverse"), DevaneyParams(eps=0.5, horizon=20, period_bound=4))
    assert inv.verdict is Verdict.REFUTED
    assert inv.sub["periodic_dense"].verdict is Verdict.WITNESSED


def test_miss_pattern():
    window = range(21, 41)
    assert _periodic_miss_pattern([n for n in window if n % 2 == 0], window) == (2, 0)
    assert _periodic_miss_pattern([22, 25], window) is None


@pytest.mark.parametrize("entry", ["circle-stretch", "shift-3periodic", "logistic-2periodic", "full-shift", "tent-map"])
def test_mixing_systems_are_sensitive(entry):
    # checked per system, not assumed: a mixing verdict says nothing about sensitivity by itself
    f = fam(entry)
    row = next(e for e in catalog.get(entry).table if e.params.get("property") == "mixing")
    assert check_mixing(f, row.params["eps"], row.params["horizon"]).verdict is Verdict.WITNESSED
    perturb = 0.25 if f.space.kind == "symbolic" else 0.05
    v = check_sensitive(f, 0.25, perturb, 40, seed=0)
    assert v.verdict is Verdict.WITNESSED and reverify(f, v)
