"""Deterministic 2D robot-navigation workbench.

Lane keeping from camera frames, theta and grid planners, an ultrasound
avoidance state machine, a kinematic simulator and a small TCP protocol
between a planning workstation and the robot.
"""

from .errors import *  # noqa: F401,F403
from .geometry import (
    TURN_RATE_DEG_S,
    Direction,
    ImagePoint,
    SteerCommand,
    WorldPoint,
    steer_from_theta,
    theta_fifo_push,
    theta_multi,
    theta_single,
)
from .pathfind import OccupancyGrid, compare_planners, dijkstra, theta_plan, theta_to_target
from .avoidance import AvoidanceConfig, AvoidanceState, Mode, RangeReading, fsm_step
from .sim import (
    Outcome,
    Scenario,
    WorldState,
    lane_scenario,
    ring_scenario,
    run_mission,
    straight_scenario,
)
from .vision import canny, detect_blobs, extract_lanes, hough_lines, process_frame
from .net import WireMessage, decode, encode, loopback_mission

__version__ = "0.1.0"
