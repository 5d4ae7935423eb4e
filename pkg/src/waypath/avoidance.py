"""Ultrasound obstacle-avoidance state machine.

The robot drives forward until the range reading drops below the threshold,
then probes rightward in 30 degree steps up to 90 degrees, swings 120 degrees
left, probes leftward the same way, and repeats. Once a probe finds a clear
direction it drives a clearance distance and re-aims at the target.
"""

from __future__ import annotations

import enum
import math
from dataclasses import dataclass, replace
from typing import List, Optional, Tuple, Union

from .errors import SensorError, TrappedError
from .geometry import WorldPoint
from .pathfind import theta_to_target

STEP_DEG = 30.0
SWING_DEG = 120.0
SWEEP_STEPS = 3


class Mode(enum.Enum):
    FORWARD = "Forward"
    SWEEP_RIGHT = "SweepRight"
    SWEEP_LEFT = "SweepLeft"
    CLEARING = "Clearing"


class ActionKind(enum.Enum):
    DRIVE_FORWARD = "DriveForward"
    TURN = "Turn"
    RESUME_TARGET = "ResumeTarget"


@dataclass(frozen=True)
class Action:
    kind: ActionKind
    degrees: float = 0.0

    def __str__(self) -> str:
        if self.kind is ActionKind.TURN:
            return f"Turn({self.degrees:+g})"
        return self.kind.value


DRIVE_FORWARD = Action(ActionKind.DRIVE_FORWARD)
RESUME_TARGET = Action(ActionKind.RESUME_TARGET)


def turn(degrees: float) -> Action:
    return Action(ActionKind.TURN, float(degrees))


@dataclass(frozen=True)
class RangeReading:
    distance_cm: float
    max_range: float = 400.0

    def __post_init__(self):
        if not (math.isfinite(self.distance_cm) and self.distance_cm > 0):
            raise SensorError(f"invalid range reading {self.distance_cm!r} cm")
        if self.distance_cm > self.max_range:
            raise SensorError(f"reading {self.distance_cm} cm exceeds max range {self.max_range} cm")


@dataclass(frozen=True)
class AvoidanceConfig:
    threshold_cm: float = 30.0
    clearance_cm: float = 40.0
    cycle_limit: Optional[int] = 3


@dataclass(frozen=True)
class AvoidanceState:
    mode: Mode = Mode.FORWARD
    k: int = 0
    saved_target_theta: Optional[float] = None
    scan_offset: float = 0.0
    cycles: int = 0
    cleared_cm: float = 0.0

    def __post_init__(self):
        sweeping = self.mode in (Mode.SWEEP_RIGHT, Mode.SWEEP_LEFT)
        if sweeping and not 1 <= self.k <= SWEEP_STEPS:
            raise ValueError(f"sweep step k must be in 1..{SWEEP_STEPS}, got {self.k}")
        if not sweeping and self.k != 0:
            raise ValueError(f"{self.mode.value} carries no sweep step")

    @property
    def label(self) -> str:
        if self.mode in (Mode.SWEEP_RIGHT, Mode.SWEEP_LEFT):
            return f"{self.mode.value}({self.k})"
        return self.mode.value


def _sweep(mode: Mode, k: int, state: AvoidanceState, offset: float, **kw) -> AvoidanceState:
    return replace(state, mode=mode, k=k, scan_offset=offset, cleared_cm=0.0, **kw)


def fsm_step(
    state: AvoidanceState,
    reading: Union[RangeReading, float],
    config: AvoidanceConfig = AvoidanceConfig(),
    target_theta: float = 0.0,
    travelled_cm: Optional[float] = None,
) -> Tuple[AvoidanceState, Action]:
    """Advance the state machine by one range reading.

    ``target_theta`` is the current turn-to-target angle, saved when the robot
    first leaves ``Forward``. ``travelled_cm`` is how far the robot moved
    while executing the previous ``DriveForward`` in ``Clearing``; it
    defaults to the full clearance distance. Readings equal to the threshold
    count as clear.
    """
    if not isinstance(reading, RangeReading):
        reading = RangeReading(float(reading), max(float(reading), RangeReading.max_range))
    blocked = reading.distance_cm < config.threshold_cm
    mode, k = state.mode, state.k

    if mode is Mode.FORWARD:
        if not blocked:
            return state, DRIVE_FORWARD
        new = _sweep(Mode.SWEEP_RIGHT, 1, state, STEP_DEG, saved_target_theta=target_theta, cycles=0)
        return new, turn(STEP_DEG)

    if mode is Mode.CLEARING:
        if blocked:
            new = _sweep(Mode.SWEEP_RIGHT, 1, state, STEP_DEG, cycles=0)
            return new, turn(STEP_DEG)
        cleared = state.cleared_cm + (config.clearance_cm if travelled_cm is None else travelled_cm)
        if cleared >= config.clearance_cm:
            return replace(state, mode=Mode.FORWARD, k=0, scan_offset=0.0, cleared_cm=0.0), RESUME_TARGET
        return replace(state, cleared_cm=cleared), DRIVE_FORWARD

    if not blocked:
        return replace(state, mode=Mode.CLEARING, k=0, cleared_cm=0.0), DRIVE_FORWARD

    if mode is Mode.SWEEP_RIGHT:
        if k < SWEEP_STEPS:
            return _sweep(mode, k + 1, state, state.scan_offset + STEP_DEG), turn(STEP_DEG)
        return _sweep(Mode.SWEEP_LEFT, 1, state, state.scan_offset - SWING_DEG), turn(-SWING_DEG)

    if k < SWEEP_STEPS:
        return _sweep(mode, k + 1, state, state.scan_offset - STEP_DEG), turn(-STEP_DEG)
    cycles = state.cycles + 1
    if config.cycle_limit is not None and cycles >= config.cycle_limit:
        raise TrappedError(f"no clear direction after {cycles} full sweep cycles")
    return _sweep(Mode.SWEEP_RIGHT, 1, state, state.scan_offset + SWING_DEG, cycles=cycles), turn(SWING_DEG)


def resume_heading(state: AvoidanceState, robot: WorldPoint, target: WorldPoint, heading: float) -> float:
    """Turn needed to face the target again after clearing an obstacle.

    Recomputed from the current pose because the robot has moved since the
    target theta was saved.
    """
    if state.mode in (Mode.SWEEP_RIGHT, Mode.SWEEP_LEFT):
        raise ValueError(f"cannot resume heading while in {state.label}")
    return theta_to_target(robot, heading, target)


def format_transcript_line(t_s: float, state: AvoidanceState, distance_cm: float, action: Action) -> str:
    return f"{t_s:.3f} {state.label} {distance_cm:.1f} {action}"


def run_transcript(
    readings,
    config: AvoidanceConfig = AvoidanceConfig(),
    dt: float = 1.0,
    state: AvoidanceState = AvoidanceState(),
) -> List[str]:
    """Feed a reading sequence through the FSM and return the log lines.

    Stops early (without raising) when the robot is trapped; the last line
    then records ``Trapped``.
    """
    lines = []
    for i, d in enumerate(readings):
        try:
            new, action = fsm_step(state, d, config)
        except TrappedError:
            lines.append(f"{i * dt:.3f} {state.label} {float(d):.1f} Trapped")
            break
        lines.append(format_transcript_line(i * dt, state, float(d), action))
        state = new
    return lines
