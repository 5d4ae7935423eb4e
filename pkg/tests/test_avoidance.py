import math
from pathlib import Path

import pytest
from hypothesis import given
from hypothesis import strategies as st

from waypath.avoidance import (
    DRIVE_FORWARD,
    RESUME_TARGET,
    ActionKind,
    AvoidanceConfig,
    AvoidanceState,
    Mode,
    RangeReading,
    fsm_step,
    resume_heading,
    run_transcript,
    turn,
)
from waypath.errors import SensorError, TrappedError
from waypath.geometry import WorldPoint

GOLDEN = Path(__file__).parent / "golden"
NO_LIMIT = AvoidanceConfig(cycle_limit=None)


def sweep(mode, k, offset):
    return AvoidanceState(mode=mode, k=k, scan_offset=offset, saved_target_theta=0.0)


@pytest.mark.parametrize(
    "state, d, mode, k, action",
    [
        (AvoidanceState(), 100, Mode.FORWARD, 0, DRIVE_FORWARD),
        (AvoidanceState(), 25, Mode.SWEEP_RIGHT, 1, turn(30)),
        (sweep(Mode.SWEEP_RIGHT, 3, 90), 25, Mode.SWEEP_LEFT, 1, turn(-120)),
        (sweep(Mode.SWEEP_RIGHT, 2, 60), 200, Mode.CLEARING, 0, DRIVE_FORWARD),
        (sweep(Mode.SWEEP_LEFT, 1, -30), 25, Mode.SWEEP_LEFT, 2, turn(-30)),
        (sweep(Mode.SWEEP_LEFT, 3, -90), 25, Mode.SWEEP_RIGHT, 1, turn(120)),
    ],
)
def test_transition_table(state, d, mode, k, action):
    new, act = fsm_step(state, RangeReading(d), NO_LIMIT)
    assert (new.mode, new.k, act) == (mode, k, action)


def test_threshold_is_strict():
    assert fsm_step(AvoidanceState(), 30.0)[1] == DRIVE_FORWARD
    assert fsm_step(AvoidanceState(), 29.999)[1] == turn(30)


def test_target_theta_saved_on_leaving_forward():
    new, _ = fsm_step(AvoidanceState(), 10.0, target_theta=-12.5)
    assert new.saved_target_theta == -12.5


def test_clearing_needs_full_clearance():
    state = AvoidanceState(mode=Mode.CLEARING)
    state, act = fsm_step(state, 200, travelled_cm=25)
    assert act == DRIVE_FORWARD and state.mode is Mode.CLEARING
    state, act = fsm_step(state, 200, travelled_cm=15)
    assert act == RESUME_TARGET and state.mode is Mode.FORWARD


def test_blocked_while_clearing_restarts_sweep():
    new, act = fsm_step(AvoidanceState(mode=Mode.CLEARING), 20)
    assert new.label == "SweepRight(1)" and act == turn(30)


def test_trapped_after_cycle_limit():
    state = AvoidanceState()
    with pytest.raises(TrappedError):
        for _ in range(100):
            state, _ = fsm_step(state, 5.0, AvoidanceConfig(cycle_limit=3))
    assert state.cycles == 2


def test_invalid_readings():
    for bad in (0.0, -3.0, math.nan, math.inf):
        with pytest.raises(SensorError):
            RangeReading(bad)
    with pytest.raises(SensorError):
        RangeReading(500, max_range=400)


def test_state_rejects_bad_step():
    with pytest.raises(ValueError):
        AvoidanceState(mode=Mode.SWEEP_RIGHT, k=4)


def actions(lines):
    return [ln.split()[-1] for ln in lines]


def test_always_blocked_is_periodic():
    acts = actions(run_transcript([25.0] * 40, NO_LIMIT))
    first = ["Turn(+30)"] * 3 + ["Turn(-120)", "Turn(-30)", "Turn(-30)", "Turn(+120)"]
    assert acts[:7] == first
    # the wrap lands in SweepRight(1), so from then on the cycle is six steps
    assert acts[7:13] == ["Turn(+30)", "Turn(+30)", "Turn(-120)", "Turn(-30)", "Turn(-30)", "Turn(+120)"]
    for i in range(13, len(acts)):
        assert acts[i] == acts[i - 6]


def test_right_sweep_then_swing_nets_minus_thirty():
    acts = run_transcript([25.0] * 4, NO_LIMIT)
    total = sum(float(a.split("(")[1].rstrip(")")) for a in actions(acts))
    assert total == -30.0


@pytest.mark.parametrize(
    "name, readings, config",
    [
        ("always_blocked.txt", [25.0] * 15, NO_LIMIT),
        ("always_blocked_trapped.txt", [25.0] * 30, AvoidanceConfig()),
        ("clear_on_second_probe.txt", [25.0, 25.0, 200.0, 200.0], AvoidanceConfig()),
    ],
)
def test_golden_transcripts(name, readings, config):
    text = "\n".join(run_transcript(readings, config)) + "\n"
    assert text.encode() == (GOLDEN / name).read_bytes()


readings = st.lists(st.floats(1, 400), min_size=1, max_size=60)


@given(readings)
def test_clear_reading_never_turns(stream):
    state = AvoidanceState()
    for d in stream:
        before = state
        state, act = fsm_step(state, d, NO_LIMIT)
        if d >= 30:
            assert act.kind is not ActionKind.TURN, before


@given(readings)
def test_scan_offset_bounded_and_matches_turns(stream):
    state = AvoidanceState()
    for d in stream:
        prev = state
        state, act = fsm_step(state, d, NO_LIMIT)
        assert -90 <= state.scan_offset <= 90
        if act.kind is ActionKind.TURN and prev.mode is not Mode.FORWARD and prev.mode is not Mode.CLEARING:
            assert state.scan_offset == pytest.approx(prev.scan_offset + act.degrees)


@given(readings)
def test_deterministic(stream):
    assert run_transcript(stream, NO_LIMIT) == run_transcript(stream, NO_LIMIT)


def test_resume_heading_from_displaced_pose():
    # 50 cm right of the original line, target 300 cm ahead, still facing north
    got = resume_heading(AvoidanceState(), WorldPoint(50, 0), WorldPoint(0, 300), 0.0)
    assert got == pytest.approx(-math.degrees(math.atan2(50, 300)), abs=0.01)
    assert resume_heading(AvoidanceState(), WorldPoint(0, 0), WorldPoint(0, 300), 0.0) == 0.0


def test_resume_heading_target_behind():
    got = resume_heading(AvoidanceState(), WorldPoint(0, 0), WorldPoint(0, -100), 0.0)
    assert got == 180.0


def test_resume_heading_refused_mid_sweep():
    with pytest.raises(ValueError):
        resume_heading(sweep(Mode.SWEEP_RIGHT, 1, 30), WorldPoint(0, 0), WorldPoint(0, 1), 0)
