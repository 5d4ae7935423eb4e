import math
from collections import deque

import pytest
from hypothesis import assume, given
from hypothesis import strategies as st

from waypath.errors import DegenerateTriangleError, UndefinedHeadingError
from waypath.geometry import (
    Direction,
    ImagePoint,
    law_of_cosines_deg,
    new_history,
    normalize_deg,
    steer_from_theta,
    theta_fifo_push,
    theta_multi,
    theta_single,
)


def arctan_oracle(dh, dv):
    return math.degrees(math.atan(abs(dh) / abs(dv)))


coord = st.floats(0, 1000, allow_nan=False)


# law of cosines ------------------------------------------------------------


def test_law_of_cosines_matches_arctan_for_right_triangle():
    # b is the hypotenuse of legs 150 and 30
    b = math.hypot(150, 30)
    assert law_of_cosines_deg(150, b, 30) == pytest.approx(arctan_oracle(30, 150), abs=1e-9)
    assert law_of_cosines_deg(150, 152.971, 30) == pytest.approx(11.310, abs=0.01)


def test_law_of_cosines_trivial_cases():
    assert law_of_cosines_deg(1, 1, 0) == 0.0
    assert law_of_cosines_deg(3, 4, 5) == pytest.approx(90.0)


def test_law_of_cosines_rejects_zero_side():
    with pytest.raises(DegenerateTriangleError):
        law_of_cosines_deg(0, 1, 1)


@given(st.floats(0.1, 100), st.floats(0.1, 100), st.floats(0, 300))
def test_law_of_cosines_range(a, b, c):
    assert 0.0 <= law_of_cosines_deg(a, b, c) <= 180.0


@given(st.floats(0.1, 100), st.floats(0.1, 100), st.floats(0, 200), st.floats(0, 200))
def test_law_of_cosines_monotone_in_c(a, b, c1, c2):
    lo, hi = sorted((c1, c2))
    assert law_of_cosines_deg(a, b, lo) <= law_of_cosines_deg(a, b, hi) + 1e-12


# theta_multi ---------------------------------------------------------------


def test_theta_multi_examples():
    prev_top, prev_bottom = ImagePoint(100, 50), ImagePoint(100, 200)
    assert theta_multi(prev_top, prev_bottom, ImagePoint(130, 55)) == pytest.approx(arctan_oracle(30, 150), abs=1e-9)
    assert theta_multi(prev_top, prev_bottom, ImagePoint(130, 55)) == pytest.approx(11.310, abs=0.01)
    assert theta_multi(prev_top, prev_bottom, ImagePoint(100, 50)) == 0.0
    assert theta_multi(prev_top, prev_bottom, ImagePoint(70, 50)) == pytest.approx(-11.310, abs=0.01)


def test_theta_multi_degenerate_previous():
    with pytest.raises(DegenerateTriangleError):
        theta_multi(ImagePoint(5, 5), ImagePoint(5, 5), ImagePoint(9, 5))


@given(coord, coord, coord, coord, coord)
def test_theta_multi_zero_when_tops_share_column(h, v_top, h_bottom, v_bottom, v_curr):
    assume(abs(v_bottom - v_top) > 1e-3)
    assert theta_multi(ImagePoint(h, v_top), ImagePoint(h_bottom, v_bottom), ImagePoint(h, v_curr)) == 0.0


@given(st.floats(0, 500), st.floats(0, 400), st.floats(1, 400), st.floats(-300, 300), st.floats(0, 500))
def test_theta_multi_mirror_antisymmetry(h, v_top, length, shift, axis):
    prev_top = ImagePoint(h, v_top)
    prev_bottom = ImagePoint(h, v_top + length)
    curr = ImagePoint(h + shift, v_top)
    m = lambda p: ImagePoint(2 * axis - p[0], p[1])  # noqa: E731
    t = theta_multi(prev_top, prev_bottom, curr)
    tm = theta_multi(m(prev_top), m(prev_bottom), m(curr))
    assert math.copysign(1, t) == -math.copysign(1, tm) or t == tm == 0.0
    assert abs(t) == pytest.approx(abs(tm), abs=1e-6)


# theta_single --------------------------------------------------------------


def test_theta_single_examples():
    assert theta_single(ImagePoint(120, 100), ImagePoint(100, 200)) == pytest.approx(arctan_oracle(20, 100), abs=1e-9)
    assert theta_single(ImagePoint(100, 100), ImagePoint(100, 200)) == 0.0
    assert theta_single(ImagePoint(80, 100), ImagePoint(100, 200)) == pytest.approx(-11.310, abs=0.01)


def test_theta_single_horizontal_midline_undefined():
    with pytest.raises(UndefinedHeadingError):
        theta_single(ImagePoint(10, 100), ImagePoint(90, 100))


@given(coord, coord, st.floats(-500, 500), st.floats(1, 500))
def test_theta_single_matches_arctan(h, v, dh, dv):
    top, bottom = ImagePoint(h + dh, v), ImagePoint(h, v + dv)
    expected = math.copysign(arctan_oracle(dh, dv), dh) if dh else 0.0
    assert theta_single(top, bottom) == pytest.approx(expected, abs=1e-6)


@given(coord, coord, st.floats(-500, 500), st.floats(1, 500), st.floats(0, 1000))
def test_theta_single_mirror_antisymmetry(h, v, dh, dv, axis):
    top, bottom = ImagePoint(h + dh, v), ImagePoint(h, v + dv)
    m = lambda p: ImagePoint(2 * axis - p[0], p[1])  # noqa: E731
    t, tm = theta_single(top, bottom), theta_single(m(top), m(bottom))
    assert t == pytest.approx(-tm, abs=1e-6)
    if abs(t) > 1e-6:
        assert (t > 0) != (tm > 0)


# history -------------------------------------------------------------------


def test_fifo_eviction():
    h = new_history()
    h = theta_fifo_push(h, "obs1")
    assert list(h) == ["obs1"]
    h = theta_fifo_push(h, "obs2")
    assert list(h) == ["obs1", "obs2"]
    h = theta_fifo_push(h, "obs3")
    assert list(h) == ["obs2", "obs3"]


def test_fifo_accepts_plain_list():
    h = theta_fifo_push([1, 2, 3], 4)
    assert isinstance(h, deque) and list(h) == [3, 4]


# steering ------------------------------------------------------------------


@pytest.mark.parametrize(
    "theta, direction, duration",
    [(23, Direction.RIGHT, 1.0), (0, Direction.STRAIGHT, 0.0), (-46, Direction.LEFT, 2.0)],
)
def test_steer_examples(theta, direction, duration):
    cmd = steer_from_theta(theta)
    assert cmd.direction is direction
    assert cmd.duration_s == pytest.approx(duration, abs=1e-12)


def test_one_degree_turn_time():
    cmd = steer_from_theta(1)
    assert cmd.direction is Direction.RIGHT
    assert cmd.duration_s == pytest.approx(0.0435, abs=1e-4)


@given(st.floats(-1e6, 1e6))
def test_steer_duration_even_and_nonnegative(theta):
    a, b = steer_from_theta(theta), steer_from_theta(-theta)
    assert a.duration_s >= 0
    assert a.duration_s == b.duration_s
    assert a.duration_s == pytest.approx(abs(theta) / 23, abs=1e-9)


def test_steer_rejects_nan():
    with pytest.raises(ValueError):
        steer_from_theta(float("nan"))


@given(st.floats(-1e5, 1e5))
def test_normalize_range(angle):
    n = normalize_deg(angle)
    assert -180 < n <= 180
    assert math.isclose(math.cos(math.radians(n)), math.cos(math.radians(angle)), abs_tol=1e-6)
