import math

import pytest
from hypothesis import given, strategies as st

from synodic.core import (
    TWO_PI,
    Angle,
    DomainError,
    Tolerance,
    normalize_angle,
    signed_angle,
)

finite = st.floats(min_value=-1e6, max_value=1e6, allow_nan=False)


@pytest.mark.parametrize("a,expected", [
    (0.0, 0.0),
    (TWO_PI, 0.0),
    (-math.pi / 2, 3 * math.pi / 2),
    (-1e-20, 0.0),
])
def test_normalize_angle(a, expected):
    assert normalize_angle(a) == pytest.approx(expected, abs=1e-15)


@pytest.mark.parametrize("bad", [math.nan, math.inf, -math.inf])
def test_non_finite_rejected(bad):
    with pytest.raises(DomainError):
        normalize_angle(bad)
    with pytest.raises(DomainError):
        Angle(bad)


@given(finite)
def test_normalize_range_and_idempotent(a):
    r = normalize_angle(a)
    assert 0.0 <= r < TWO_PI
    assert normalize_angle(r) == r


@given(st.floats(min_value=-10, max_value=10), st.integers(min_value=-10**6, max_value=10**6))
def test_normalize_periodic(a, k):
    d = abs(normalize_angle(a + TWO_PI * k) - normalize_angle(a))
    assert min(d, TWO_PI - d) < 1e-9


@given(finite)
def test_signed_range(a):
    r = signed_angle(a)
    assert -math.pi < r <= math.pi
    assert math.cos(r) == pytest.approx(math.cos(a), abs=1e-9)


def test_signed_pi_maps_to_pi():
    assert signed_angle(math.pi) == math.pi
    assert signed_angle(-math.pi) == math.pi


def test_angle_is_float():
    a = Angle.from_degrees(180.0)
    assert isinstance(a, float)
    assert a == pytest.approx(math.pi)
    assert a.degrees == pytest.approx(180.0)


def test_tolerance_defaults_and_validation():
    t = Tolerance()
    assert (t.abs_eps, t.rel_eps, t.max_iter) == (1e-12, 1e-12, 200)
    for kwargs in ({"abs_eps": 0.0}, {"rel_eps": -1.0}, {"max_iter": 0}, {"max_iter": 2.5}):
        with pytest.raises(DomainError):
            Tolerance(**kwargs)


def test_quadrant_cos_exact_on_quarter_turns():
    from synodic.core import HALF_PI, quadrant_cos
    assert [quadrant_cos(k * HALF_PI) for k in range(-4, 5)] == [1.0, 0.0, -1.0, 0.0, 1.0, 0.0, -1.0, 0.0, 1.0]


@given(st.floats(-100, 100))
def test_quadrant_cos_matches_cos(a):
    from synodic.core import quadrant_cos
    assert abs(quadrant_cos(a) - math.cos(a)) < 1e-14
