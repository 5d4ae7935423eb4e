"""Angle computations and the timed-turn steering model.

Image space uses ``h`` (columns, rightward) and ``v`` (rows, downward).
World space uses ``x`` (east, cm) and ``y`` (north, cm); headings are
compass-style degrees, 0 = north, clockwise positive.

Theta values are signed degrees: negative turns left, positive turns right.
"""

from __future__ import annotations

import enum
import math
from collections import deque
from dataclasses import dataclass
from typing import Deque, Iterable, NamedTuple, Tuple

from .errors import DegenerateTriangleError, UndefinedHeadingError

#: Measured rotation rate of the robot while turning in place.
TURN_RATE_DEG_S = 23.0


class ImagePoint(NamedTuple):
    h: float
    v: float

    @classmethod
    def checked(cls, h: float, v: float) -> "ImagePoint":
        if not (math.isfinite(h) and math.isfinite(v)):
            raise ValueError(f"non-finite image point ({h}, {v})")
        if h < 0 or v < 0:
            raise ValueError(f"image point ({h}, {v}) has a negative coordinate")
        return cls(float(h), float(v))


class WorldPoint(NamedTuple):
    x: float
    y: float


def distance(p: Tuple[float, float], q: Tuple[float, float]) -> float:
    return math.hypot(p[0] - q[0], p[1] - q[1])


def normalize_deg(angle: float) -> float:
    """Wrap an angle into (-180, 180]."""
    wrapped = math.fmod(angle, 360.0)
    if wrapped <= -180.0:
        wrapped += 360.0
    elif wrapped > 180.0:
        wrapped -= 360.0
    return wrapped


def law_of_cosines_deg(a: float, b: float, c: float) -> float:
    """Angle (degrees) between sides ``a`` and ``b``, opposite side ``c``.

    The cosine is clamped to [-1, 1] so near-degenerate triangles built from
    rounded pixel coordinates do not produce NaN.
    """
    if a <= 0 or b <= 0:
        raise DegenerateTriangleError(f"sides adjacent to the angle must be positive (a={a}, b={b})")
    cos_angle = (a * a + b * b - c * c) / (2.0 * a * b)
    cos_angle = min(1.0, max(-1.0, cos_angle))
    return math.acos(cos_angle) * 180.0 / math.pi


def _signed(angle: float, lean: float) -> float:
    if lean > 0:
        return angle
    if lean < 0:
        return -angle
    return 0.0


def theta_multi(prev_top: ImagePoint, prev_bottom: ImagePoint, curr_top: ImagePoint) -> float:
    """Turn angle from two consecutive midline observations.

    The vertex is the previous bottom endpoint. The current top endpoint is
    moved onto the previous top row before measuring, so the opposite side of
    the triangle is the horizontal gap between the two tops.
    """
    if prev_top[0] == prev_bottom[0] and prev_top[1] == prev_bottom[1]:
        raise DegenerateTriangleError("previous midline has zero length")
    snapped = ImagePoint(curr_top[0], prev_top[1])
    a = distance(prev_top, prev_bottom)
    b = distance(snapped, prev_bottom)
    c = abs(snapped[0] - prev_top[0])
    if c == 0:
        return 0.0
    return _signed(law_of_cosines_deg(a, b, c), snapped[0] - prev_top[0])


def theta_single(top: ImagePoint, bottom: ImagePoint) -> float:
    """Turn angle between the midline and the vertical through its bottom end."""
    dv = abs(top[1] - bottom[1])
    if dv == 0:
        raise UndefinedHeadingError("midline is horizontal; heading is undefined")
    dh = abs(top[0] - bottom[0])
    if dh == 0:
        return 0.0
    a = math.hypot(dh, dv)
    return _signed(law_of_cosines_deg(a, dv, dh), top[0] - bottom[0])


def new_history() -> Deque:
    """Two-deep FIFO of midline observations (oldest first)."""
    return deque(maxlen=2)


def theta_fifo_push(history: Iterable, obs) -> Deque:
    """Append ``obs`` to the history, evicting the oldest beyond two entries.

    A deque with ``maxlen=2`` is updated in place; any other iterable is
    copied into a fresh one first.
    """
    if not (isinstance(history, deque) and history.maxlen == 2):
        history = deque(history, maxlen=2)
    history.append(obs)
    return history


class Direction(enum.Enum):
    LEFT = "left"
    RIGHT = "right"
    STRAIGHT = "straight"


@dataclass(frozen=True)
class SteerCommand:
    direction: Direction
    duration_s: float
    theta: float


def steer_from_theta(theta: float, turn_rate: float = TURN_RATE_DEG_S) -> SteerCommand:
    """Open-loop turn: spin for ``|theta| / turn_rate`` seconds."""
    if not math.isfinite(theta):
        raise ValueError(f"theta must be finite, got {theta}")
    if turn_rate <= 0:
        raise ValueError("turn_rate must be positive")
    if theta < 0:
        direction = Direction.LEFT
    elif theta > 0:
        direction = Direction.RIGHT
    else:
        direction = Direction.STRAIGHT
    return SteerCommand(direction, abs(theta) / turn_rate, float(theta))


def bearing_deg(origin: WorldPoint, target: WorldPoint) -> float:
    """Compass bearing from ``origin`` to ``target`` (0 = north, clockwise)."""
    return math.degrees(math.atan2(target[0] - origin[0], target[1] - origin[1]))
