import math

import numpy as np
import pytest
from hypothesis import given, strategies as st

from nads import spaces
from nads.errors import SpaceMismatchError, UnsupportedOperationError
from nads.symbolic import Word

TWO_PI = 2 * math.pi


def test_circle_distance_is_arc_length():
    c = spaces.circle()
    assert spaces.distance(c, 0.1, TWO_PI - 0.1) == pytest.approx(0.2)
    assert spaces.distance(c, 0.0, math.pi) == pytest.approx(math.pi)


@given(st.floats(-50, 50), st.floats(-50, 50))
def test_circle_distance_ignores_lifts(a, b):
    c = spaces.circle()
    d_lift = spaces._distance(c, a, b)
    d_red = spaces._distance(c, spaces.circle_point(a), spaces.circle_point(b))
    assert d_lift == pytest.approx(d_red, abs=1e-9)
    assert 0 <= d_lift <= math.pi


def test_circle_point_range():
    for t in (-1e-17, TWO_PI, -TWO_PI, 7.0):
        assert 0.0 <= spaces.circle_point(t) < TWO_PI


def test_product_uses_max():
    p = spaces.product(spaces.interval(), spaces.symbolic())
    assert spaces.distance(p, (0.0, Word("0")), (0.5, Word("0"))) == 0.5
    assert spaces.distance(p, (0.0, Word("0")), (0.5, Word("1"))) == 3.0


def test_mismatched_points_raise():
    with pytest.raises(SpaceMismatchError):
        spaces.distance(spaces.interval(), 0.5, Word("0"))
    with pytest.raises(SpaceMismatchError):
        spaces.distance(spaces.interval(), 0.5, 2.0)


def test_descriptor_validation():
    with pytest.raises(ValueError):
        spaces.interval(1.0, 0.0)
    with pytest.raises(ValueError):
        spaces.SpaceDescriptor("torus")


@pytest.mark.parametrize(
    "space, eps",
    [(spaces.interval(), 0.1), (spaces.interval(-2, 3), 0.7), (spaces.circle(), 0.5), (spaces.symbolic(), 0.5)],
)
def test_nets_cover(space, eps, rng):
    net = spaces.epsilon_net(space, eps)
    for _ in range(300):
        x = spaces.random_point(space, rng, max_word=9)
        assert min(spaces.distance(space, x, c) for c in net) < eps


def test_non_compact_net_needs_window():
    line = spaces.real_line((-1.0, 1.0))
    with pytest.raises(UnsupportedOperationError):
        spaces.epsilon_net(line, 0.5)
    net = spaces.epsilon_net(line, 0.5, allow_window=True)
    assert net[0] == -1.0 and net[-1] == 1.0


def test_ball_sets():
    U = spaces.OpenBallSet.of([(0.1, 0.05), (0.9, 0.05)])
    assert spaces.ball_contains(spaces.interval(), U, 0.92)
    assert not spaces.ball_contains(spaces.interval(), U, 0.5)
    assert not spaces.ball_contains(spaces.interval(), U, 0.0)  # open balls
    with pytest.raises(ValueError):
        spaces.OpenBallSet.of([(0.1, 0.0)])


def test_exact_distance_for_symbolic_products():
    p = spaces.product(spaces.symbolic(), spaces.symbolic())
    d = spaces.distance_exact(p, (Word("0"), Word("01")), (Word("1"), Word("01")))
    assert d == 3


def test_random_points_are_seeded():
    a = [spaces.random_point(spaces.symbolic(), np.random.default_rng(5)) for _ in range(3)]
    b = [spaces.random_point(spaces.symbolic(), np.random.default_rng(5)) for _ in range(3)]
    assert a == b
