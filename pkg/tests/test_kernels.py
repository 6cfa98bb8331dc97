"""The compiled and numpy kernels agree on shared inputs (up to libm rounding for transcendental ops)."""

import numpy as np
import pytest
from hypothesis import given, strategies as st
from hypothesis.extra import numpy as hnp

from nads import _pykernels, kernels, spaces
from nads import systems as S

compiled = pytest.importorskip("nads._kernels")


@pytest.fixture
def python_backend():
    kernels.use_backend("python")
    yield
    kernels.use_backend("cython")


def _fam():
    maps = [S.logistic(3.9), S.tent(), S.rotation(0.3), S.circle_power(2), S.sin2(), S.asin_sqrt(), S.angle_scale(1.5)]
    return maps


@pytest.mark.parametrize("spec", _fam(), ids=str)
def test_iterate_agrees(spec):
    space = spaces.circle() if spec.name in ("rotation", "circle_power", "angle_scale") else spaces.interval()
    fam = S.periodic_family(space, [spec, S.identity()])
    ops, params, ends = S.op_table(fam, 40)
    x0 = np.linspace(0.01, 0.99, 33)
    a = compiled.iterate(ops, params, ends, x0)
    b = _pykernels.iterate(ops, params, ends, x0)
    if spec.name in ("sin2", "asin_sqrt"):
        assert np.allclose(a, b, rtol=0, atol=1e-13)
    else:
        assert np.array_equal(a, b)


@given(hnp.arrays(np.float64, st.integers(1, 30), elements=st.floats(0, 6.28)),
       hnp.arrays(np.float64, st.integers(1, 30), elements=st.floats(0, 6.28)),
       st.booleans())
def test_pairwise_distance_agrees(a, b, circle):
    assert np.array_equal(compiled.pairwise_distance(a, b, circle), _pykernels.pairwise_distance(a, b, circle))


@given(hnp.arrays(np.uint64, 12, elements=st.integers(0, 3)), hnp.arrays(np.uint64, 9, elements=st.integers(0, 3)))
def test_track_pairs_agrees(ku, kv):
    out = []
    for mod in (compiled, _pykernels):
        first = np.zeros((12, 9), dtype=np.int32)
        last = np.zeros((12, 9), dtype=np.int32)
        for n in (1, 2, 3):
            mod.track_pairs(np.roll(ku, n), kv, n, first, last)
        out.append((first, last))
    assert all(np.array_equal(x, y) for x, y in zip(*out))


def test_ball_hit_index_agrees(rng):
    traj = rng.uniform(0, 1, size=(20, 60))
    group = np.repeat(np.arange(3), 20)
    centers = np.array([0.1, 0.5, 0.9])
    radii = np.array([0.05, 0.1, 0.05])
    for circle in (False, True):
        a = compiled.ball_hit_index(traj, group, 3, centers, radii, circle)
        b = _pykernels.ball_hit_index(traj, group, 3, centers, radii, circle)
        assert np.array_equal(a, b)


def test_backend_switch(python_backend):
    assert kernels.BACKEND == "python"
    fam = S.autonomous(spaces.interval(), S.logistic(4.0))
    traj = S.orbit_array(fam, np.array([0.3]), 5)
    assert traj[-1, 0] == pytest.approx(S.orbit(fam, 0.3, 5)[-1], abs=1e-12)


def test_unknown_backend():
    with pytest.raises(ValueError):
        kernels.use_backend("fortran")
