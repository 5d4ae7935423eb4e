"""Deterministic 2D world: kinematics, ultrasound ray casting, synthetic
cameras, and the mission loop tying the other modules together.

The robot is a disc that either turns in place at ``turn_rate`` deg/s or
drives straight at ``forward_speed`` cm/s. Time advances in fixed ``dt``
ticks, with the last partial tick of any command integrated exactly.
"""

from __future__ import annotations

import enum
import json
import math
from dataclasses import asdict, dataclass, field, replace
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .avoidance import ActionKind, AvoidanceConfig, AvoidanceState, Mode, RangeReading, fsm_step, resume_heading
from .avoidance import format_transcript_line
from .errors import ScenarioError, TrappedError
from .geometry import SteerCommand, WorldPoint, steer_from_theta
from .pathfind import theta_to_target
from .vision import OBSTACLE_CODE, ROBOT_CODE, TARGET_CODE, detect_blobs, draw_segment

TESTBED_CM = 304.8  # 10 ft
EPS = 1e-9


@dataclass(frozen=True)
class Circle:
    center: WorldPoint
    radius: float


@dataclass(frozen=True)
class Pose:
    x: float
    y: float
    heading: float = 0.0

    @property
    def point(self) -> WorldPoint:
        return WorldPoint(self.x, self.y)


@dataclass(frozen=True)
class Target:
    position: WorldPoint
    radius: float = 10.0


@dataclass(frozen=True)
class Bounds:
    x_min: float = 0.0
    y_min: float = 0.0
    x_max: float = TESTBED_CM
    y_max: float = TESTBED_CM

    @property
    def width(self) -> float:
        return self.x_max - self.x_min

    @property
    def height(self) -> float:
        return self.y_max - self.y_min


@dataclass(frozen=True)
class SimParams:
    forward_speed: float = 20.0
    turn_rate: float = 23.0
    sensor_max_range: float = 400.0
    obstacle_threshold: float = 30.0
    dt: float = 0.05
    robot_radius: float = 10.0
    clearance_cm: float = 40.0
    cycle_limit: int = 3
    stall_episodes: int = 12
    timeout_s: float = 600.0
    cone_half_angle: float = 10.0
    cone_rays: int = 3


@dataclass(frozen=True)
class CameraModel:
    width: int = 200
    height: int = 150
    focal_px: float = 120.0
    mount_height_cm: float = 20.0
    pitch_deg: float = 25.0
    lane_px: int = 3
    overhead_scale: float = 1.0


@dataclass(frozen=True)
class Scenario:
    start: Pose
    target: Target
    bounds: Bounds = Bounds()
    obstacles: Tuple[Circle, ...] = ()
    lanes: Tuple[Tuple[WorldPoint, ...], ...] = ()
    params: SimParams = SimParams()
    camera: CameraModel = CameraModel()
    name: str = "scenario"

    def validate(self) -> "Scenario":
        p = self.params
        for key, value in asdict(p).items():
            if key == "cycle_limit" or key == "stall_episodes":
                if value < 1:
                    raise ScenarioError(f"params.{key} must be >= 1")
            elif not value > 0:
                raise ScenarioError(f"params.{key} must be positive, got {value}")
        cam = self.camera
        if cam.focal_px <= 0 or cam.overhead_scale <= 0 or cam.width < 5 or cam.height < 5:
            raise ScenarioError("camera focal length, scale and size must be positive")
        b = self.bounds
        if b.width <= 0 or b.height <= 0:
            raise ScenarioError("bounds must have positive extent")
        for name, pt in (("robot", self.start.point), ("target", self.target.position)):
            if not (b.x_min <= pt[0] <= b.x_max and b.y_min <= pt[1] <= b.y_max):
                raise ScenarioError(f"{name} position {tuple(pt)} is outside the world bounds")
        for i, ob in enumerate(self.obstacles):
            if ob.radius <= 0:
                raise ScenarioError(f"obstacles[{i}].radius must be positive")
            if math.dist(ob.center, self.start.point) < ob.radius + p.robot_radius:
                raise ScenarioError(f"robot start overlaps obstacles[{i}]")
            if math.dist(ob.center, self.target.position) < ob.radius:
                raise ScenarioError(f"target lies inside obstacles[{i}]")
        if self.target.radius <= 0:
            raise ScenarioError("target radius must be positive")
        return self

    # -- JSON ---------------------------------------------------------------

    def to_dict(self) -> dict:
        return {
            "name": self.name,
            "bounds": asdict(self.bounds),
            "obstacles": [{"center": list(o.center), "radius": o.radius} for o in self.obstacles],
            "lanes": [[list(pt) for pt in lane] for lane in self.lanes],
            "robot": {"position": [self.start.x, self.start.y], "heading_deg": self.start.heading},
            "target": {"position": list(self.target.position), "radius_cm": self.target.radius},
            "params": asdict(self.params),
            "camera": asdict(self.camera),
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2) + "\n"

    @classmethod
    def from_dict(cls, data: dict) -> "Scenario":
        try:
            robot = data["robot"]
            target = data["target"]
            scenario = cls(
                start=Pose(*map(float, robot["position"]), float(robot.get("heading_deg", 0.0))),
                target=Target(WorldPoint(*map(float, target["position"])), float(target.get("radius_cm", 10.0))),
                bounds=Bounds(**data.get("bounds", {})),
                obstacles=tuple(
                    Circle(WorldPoint(*map(float, o["center"])), float(o["radius"])) for o in data.get("obstacles", [])
                ),
                lanes=tuple(tuple(WorldPoint(*map(float, pt)) for pt in lane) for lane in data.get("lanes", [])),
                params=SimParams(**data.get("params", {})),
                camera=CameraModel(**data.get("camera", {})),
                name=str(data.get("name", "scenario")),
            )
        except KeyError as exc:
            raise ScenarioError(f"missing required field {exc}") from None
        except (TypeError, ValueError) as exc:
            raise ScenarioError(f"invalid scenario field: {exc}") from None
        return scenario.validate()

    @classmethod
    def from_json(cls, text: str, source: str = "<scenario>") -> "Scenario":
        try:
            data = json.loads(text)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{source}:{exc.lineno}:{exc.colno}: {exc.msg}") from None
        if not isinstance(data, dict):
            raise ScenarioError(f"{source}:1:1: scenario must be a JSON object")
        return cls.from_dict(data)

    @classmethod
    def load(cls, path) -> "Scenario":
        with open(path, encoding="utf-8") as fh:
            return cls.from_json(fh.read(), str(path))

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_json())


class Phase(enum.Enum):
    TURNING_TO_TARGET = "TurningToTarget"
    DRIVING_STRAIGHT = "DrivingStraight"
    AVOIDING = "Avoiding"
    DONE = "Done"


@dataclass
class WorldState:
    """Mutable simulation state; the kinematic functions advance it in place."""

    pose: Pose
    clock: float = 0.0
    phase: Phase = Phase.TURNING_TO_TARGET
    collided: bool = False
    odometer: float = 0.0
    trajectory: List[tuple] = field(default_factory=list)

    @classmethod
    def initial(cls, scenario: Scenario) -> "WorldState":
        state = cls(scenario.start)
        state.log()
        return state

    def log(self) -> None:
        p = self.pose
        self.trajectory.append((self.clock, p.x, p.y, p.heading, self.phase.value))


# -- geometry helpers -------------------------------------------------------


def _unit(heading: float) -> Tuple[float, float]:
    rad = math.radians(heading)
    return math.sin(rad), math.cos(rad)


def ray_circle(origin, heading: float, center, radius: float) -> float:
    """Distance along a ray to the first point of a circle (inf on a miss).

    Zero when the origin is on or inside the circle and the ray points
    inward; rays leaving the circle from inside report a miss.
    """
    ux, uy = _unit(heading)
    cx, cy = center[0] - origin[0], center[1] - origin[1]
    b = ux * cx + uy * cy
    c = cx * cx + cy * cy - radius * radius
    if c <= EPS:
        return 0.0 if b > 0 else math.inf
    disc = b * b - c
    if disc < 0 or b <= 0:
        return math.inf
    return b - math.sqrt(disc)


def ray_box(origin, heading: float, bounds: Bounds, inset: float = 0.0) -> float:
    """Distance along a ray to the boundary of the (inset) world rectangle."""
    ux, uy = _unit(heading)
    best = math.inf
    if ux > EPS:
        best = min(best, (bounds.x_max - inset - origin[0]) / ux)
    elif ux < -EPS:
        best = min(best, (bounds.x_min + inset - origin[0]) / ux)
    if uy > EPS:
        best = min(best, (bounds.y_max - inset - origin[1]) / uy)
    elif uy < -EPS:
        best = min(best, (bounds.y_min + inset - origin[1]) / uy)
    return max(best, 0.0)


def contact_distance(pose: Pose, scenario: Scenario) -> float:
    """How far the robot disc can drive along its heading before touching anything."""
    rr = scenario.params.robot_radius
    best = ray_box(pose.point, pose.heading, scenario.bounds, inset=rr)
    for ob in scenario.obstacles:
        best = min(best, ray_circle(pose.point, pose.heading, ob.center, ob.radius + rr))
    return best


def cone_offsets(params: SimParams) -> Tuple[float, ...]:
    if params.cone_rays == 1:
        return (0.0,)
    return tuple(np.linspace(-params.cone_half_angle, params.cone_half_angle, params.cone_rays))


def raycast_ultrasound(state: WorldState, scenario: Scenario, offsets: Optional[Sequence[float]] = None) -> RangeReading:
    """Simulated ultrasound range: nearest hit over a cone of rays, capped at max range."""
    p = scenario.params
    if offsets is None:
        offsets = cone_offsets(p)
    origin = state.pose.point
    best = p.sensor_max_range
    for off in offsets:
        heading = state.pose.heading + off
        best = min(best, ray_box(origin, heading, scenario.bounds))
        for ob in scenario.obstacles:
            best = min(best, ray_circle(origin, heading, ob.center, ob.radius))
    # a zero-length echo is not a valid reading; report the smallest positive one
    return RangeReading(max(best, 1e-6), p.sensor_max_range)


# -- kinematics -------------------------------------------------------------


def _ticks(duration: float, dt: float):
    remaining = duration
    while remaining > EPS:
        step = min(dt, remaining)
        remaining -= step
        yield step


def apply_steer(state: WorldState, cmd: SteerCommand, scenario: Scenario) -> WorldState:
    """Turn in place for ``cmd.duration_s`` at the scenario turn rate."""
    p = scenario.params
    sign = 1.0 if cmd.theta > 0 else -1.0 if cmd.theta < 0 else 0.0
    if sign == 0.0:
        return state
    heading = state.pose.heading
    for step in _ticks(cmd.duration_s, p.dt):
        heading += sign * p.turn_rate * step
        state.clock += step
        state.pose = replace(state.pose, heading=heading % 360.0)
        state.log()
    return state


def _advance(state: WorldState, distance: float, scenario: Scenario) -> float:
    """Move up to ``distance`` cm forward, stopping at contact. Returns cm moved."""
    limit = contact_distance(state.pose, scenario)
    state.collided = limit <= distance
    moved = min(distance, limit)
    if moved > 0:
        ux, uy = _unit(state.pose.heading)
        state.pose = replace(state.pose, x=state.pose.x + ux * moved, y=state.pose.y + uy * moved)
        state.odometer += moved
    return moved


def _drive_tick(state: WorldState, step: float, scenario: Scenario) -> bool:
    """One forward tick; returns False if contact stopped the robot."""
    speed = scenario.params.forward_speed
    want = speed * step
    moved = _advance(state, want, scenario)
    state.clock += moved / speed if moved < want else step
    state.log()
    return moved >= want


def drive_forward(state: WorldState, duration: float, scenario: Scenario) -> WorldState:
    """Drive straight for ``duration`` seconds, halting at first contact.

    A halt sets ``state.collided``; it is a flagged state, not an error.
    """
    if duration < 0:
        raise ValueError("duration must be non-negative")
    state.collided = False
    for step in _ticks(duration, scenario.params.dt):
        if not _drive_tick(state, step, scenario):
            break
    return state


# -- cameras ----------------------------------------------------------------


def world_to_robot(pose: Pose, pt) -> Tuple[float, float]:
    """(forward, right) offsets of a world point in the robot frame."""
    dx, dy = pt[0] - pose.x, pt[1] - pose.y
    s, c = _unit(pose.heading)
    return dx * s + dy * c, dx * c - dy * s


def _clip_segment(p, q, w, h):
    """Liang-Barsky clip of an image-space segment to a slightly padded frame."""
    t0, t1 = 0.0, 1.0
    dx, dy = q[0] - p[0], q[1] - p[1]
    for pk, qk in ((-dx, p[0] + 1), (dx, w - p[0]), (-dy, p[1] + 1), (dy, h - p[1])):
        if pk == 0:
            if qk < 0:
                return None
            continue
        r = qk / pk
        if pk < 0:
            t0 = max(t0, r)
        else:
            t1 = min(t1, r)
        if t0 > t1:
            return None
    return (p[0] + t0 * dx, p[1] + t0 * dy), (p[0] + t1 * dx, p[1] + t1 * dy)


def render_onboard(state: WorldState, scenario: Scenario, camera: Optional[CameraModel] = None) -> np.ndarray:
    """Forward-facing perspective view of the lane lines (white on black)."""
    cam = camera or scenario.camera
    img = np.zeros((cam.height, cam.width), dtype=np.uint8)
    pitch = math.radians(cam.pitch_deg)
    cp, sp = math.cos(pitch), math.sin(pitch)
    hc = cam.mount_height_cm
    cx, cy = (cam.width - 1) / 2, (cam.height - 1) / 2
    near = 1.0

    def depth(fwd):
        return fwd * cp + hc * sp

    def project(fwd, right):
        z = depth(fwd)
        return cx + cam.focal_px * right / z, cy + cam.focal_px * (hc * cp - fwd * sp) / z

    for lane in scenario.lanes:
        pts = [world_to_robot(state.pose, pt) for pt in lane]
        for (f1, r1), (f2, r2) in zip(pts, pts[1:]):
            z1, z2 = depth(f1), depth(f2)
            if z1 < near and z2 < near:
                continue
            if z1 < near or z2 < near:
                t = (near - z1) / (z2 - z1)
                fc, rc = f1 + t * (f2 - f1), r1 + t * (r2 - r1)
                if z1 < near:
                    f1, r1 = fc, rc
                else:
                    f2, r2 = fc, rc
            clipped = _clip_segment(project(f1, r1), project(f2, r2), cam.width, cam.height)
            if clipped is not None:
                draw_segment(img, clipped[0], clipped[1], 255, width=cam.lane_px)
    return img


def overhead_shape(scenario: Scenario) -> Tuple[int, int]:
    s = scenario.camera.overhead_scale
    return int(math.ceil(scenario.bounds.height * s - EPS)), int(math.ceil(scenario.bounds.width * s - EPS))


def world_to_pixel(scenario: Scenario, pt) -> Tuple[float, float]:
    s = scenario.camera.overhead_scale
    rows, _ = overhead_shape(scenario)
    return (pt[0] - scenario.bounds.x_min) * s, rows - (pt[1] - scenario.bounds.y_min) * s


def pixel_to_world(scenario: Scenario, h: float, v: float) -> WorldPoint:
    s = scenario.camera.overhead_scale
    rows, _ = overhead_shape(scenario)
    return WorldPoint(scenario.bounds.x_min + h / s, scenario.bounds.y_min + (rows - v) / s)


def render_overhead(scenario: Scenario, state: Optional[WorldState] = None) -> np.ndarray:
    """Top-down render: obstacles 255, target marker 100, robot marker 200."""
    rows, cols = overhead_shape(scenario)
    img = np.zeros((rows, cols), dtype=np.uint8)
    xs, ys = pixel_to_world(scenario, np.arange(cols)[None, :], np.arange(rows)[:, None])
    pose = state.pose if state is not None else scenario.start

    def disc(center, radius, code):
        img[(xs - center[0]) ** 2 + (ys - center[1]) ** 2 <= radius**2] = code

    for ob in scenario.obstacles:
        disc(ob.center, ob.radius, OBSTACLE_CODE)
    disc(scenario.target.position, scenario.target.radius, TARGET_CODE)
    disc(pose.point, scenario.params.robot_radius, ROBOT_CODE)
    return img


def locate_markers(scenario: Scenario, state: Optional[WorldState] = None) -> Tuple[WorldPoint, WorldPoint]:
    """Robot and target world positions recovered from an overhead render."""
    robot, target = detect_blobs(render_overhead(scenario, state))
    return (pixel_to_world(scenario, *robot.centroid), pixel_to_world(scenario, *target.centroid))


# -- mission ----------------------------------------------------------------


class Outcome(enum.Enum):
    DONE = "Done"
    TRAPPED = "Trapped"
    TIMEOUT = "Timeout"


@dataclass
class MissionReport:
    outcome: Outcome
    elapsed_s: float
    path_length_cm: float
    final_distance_cm: float
    trajectory: List[tuple]
    transcript: List[str]
    initial_theta: float
    signaled: bool = False
    contacts: int = 0

    def trajectory_csv(self) -> str:
        return trajectory_csv(self.trajectory)

    def transcript_text(self) -> str:
        return "".join(line + "\n" for line in self.transcript)


def trajectory_csv(rows: Sequence[tuple]) -> str:
    out = ["t_s,x_cm,y_cm,heading_deg,phase"]
    out += [f"{t:.3f},{x:.3f},{y:.3f},{h:.3f},{ph}" for t, x, y, h, ph in rows]
    return "\n".join(out) + "\n"


def plan_initial_theta(scenario: Scenario) -> float:
    """Workstation side: overhead render -> markers -> turn to target."""
    robot, target = locate_markers(scenario)
    return theta_to_target(robot, scenario.start.heading, target)


def run_mission(
    scenario: Scenario,
    initial_theta: Optional[float] = None,
    on_range: Optional[Callable[[float], None]] = None,
) -> MissionReport:
    """Execute the full navigation loop in simulation.

    Turn toward the target, drive straight while polling the ultrasound each
    tick, hand control to the avoidance state machine whenever the reading
    drops below threshold (or the robot touches something), and re-aim at the
    target after each cleared obstacle. ``on_range`` is called with the
    reading each time avoidance is entered.

    A mission is also declared trapped when ``stall_episodes`` consecutive
    avoidance episodes fail to bring the robot closer to the target.
    """
    scenario.validate()
    p = scenario.params
    cfg = AvoidanceConfig(p.obstacle_threshold, p.clearance_cm, p.cycle_limit)
    target = scenario.target
    state = WorldState.initial(scenario)
    transcript: List[str] = []
    contacts = 0

    robot_est, target_est = locate_markers(scenario, state)
    theta0 = initial_theta if initial_theta is not None else theta_to_target(robot_est, state.pose.heading, target_est)

    def to_target() -> float:
        return math.dist(state.pose.point, target.position)

    def aim(theta: float) -> None:
        state.phase = Phase.TURNING_TO_TARGET
        apply_steer(state, steer_from_theta(theta, p.turn_rate), scenario)
        state.phase = Phase.DRIVING_STRAIGHT

    aim(theta0)
    fsm = AvoidanceState()
    travelled: Optional[float] = None
    best_distance = to_target()
    stalled = 0
    outcome = Outcome.TIMEOUT

    while state.clock < p.timeout_s:
        if to_target() <= target.radius:
            outcome = Outcome.DONE
            break
        reading = raycast_ultrasound(state, scenario)
        d = reading.distance_cm
        if state.collided:
            contacts += 1
            # touching an obstacle is treated as a blocked echo
            d = min(d, p.obstacle_threshold * 0.5)
        blocked = d < p.obstacle_threshold

        if fsm.mode is Mode.FORWARD and not blocked:
            state.phase = Phase.DRIVING_STRAIGHT
            _drive_tick(state, p.dt, scenario)
            continue

        if fsm.mode is Mode.FORWARD and on_range is not None:
            on_range(d)
        target_theta = theta_to_target(state.pose.point, state.pose.heading, target_est)
        try:
            new_fsm, action = fsm_step(fsm, RangeReading(d, max(d, p.sensor_max_range)), cfg,
                                       target_theta=target_theta, travelled_cm=travelled)
        except TrappedError:
            transcript.append(f"{state.clock:.3f} {fsm.label} {d:.1f} Trapped")
            outcome = Outcome.TRAPPED
            break
        transcript.append(format_transcript_line(state.clock, fsm, d, action))
        fsm, travelled = new_fsm, None

        if action.kind is ActionKind.TURN:
            state.phase = Phase.AVOIDING
            state.collided = False
            apply_steer(state, steer_from_theta(action.degrees, p.turn_rate), scenario)
        elif action.kind is ActionKind.DRIVE_FORWARD:
            state.phase = Phase.AVOIDING
            state.collided = False
            travelled = 0.0
            while travelled < p.clearance_cm - EPS and state.clock < p.timeout_s:
                if to_target() <= target.radius:
                    break
                if raycast_ultrasound(state, scenario).distance_cm < p.obstacle_threshold:
                    break
                step = min(p.dt, (p.clearance_cm - travelled) / p.forward_speed)
                before = state.odometer
                ok = _drive_tick(state, step, scenario)
                travelled += state.odometer - before
                if not ok:
                    break
        else:
            robot_est, _ = locate_markers(scenario, state)
            aim(resume_heading(fsm, robot_est, target_est, state.pose.heading))
            if to_target() < best_distance - 1.0:
                best_distance = to_target()
                stalled = 0
            else:
                stalled += 1
                if stalled >= p.stall_episodes:
                    transcript.append(f"{state.clock:.3f} {fsm.label} {d:.1f} Trapped")
                    outcome = Outcome.TRAPPED
                    break

    if outcome is Outcome.DONE:
        state.phase = Phase.DONE
        state.log()
    return MissionReport(
        outcome=outcome,
        elapsed_s=state.clock,
        path_length_cm=state.odometer,
        final_distance_cm=to_target(),
        trajectory=state.trajectory,
        transcript=transcript,
        initial_theta=theta0,
        signaled=outcome is Outcome.DONE,
        contacts=contacts,
    )


def min_clearance(trajectory: Sequence[tuple], scenario: Scenario) -> float:
    """Smallest gap between the robot disc and any obstacle over a trajectory."""
    rr = scenario.params.robot_radius
    best = math.inf
    for _, x, y, _, _ in trajectory:
        for ob in scenario.obstacles:
            best = min(best, math.dist((x, y), ob.center) - ob.radius - rr)
    return best


# -- stock scenarios --------------------------------------------------------


def straight_scenario(obstacle_radius: Optional[float] = None, name: str = "straight") -> Scenario:
    """Robot 300 cm south of the target, optionally with one obstacle midway."""
    obstacles = ()
    if obstacle_radius is not None:
        obstacles = (Circle(WorldPoint(200.0, 200.0), obstacle_radius),)
    return Scenario(
        start=Pose(200.0, 50.0, 0.0),
        target=Target(WorldPoint(200.0, 350.0), 5.0),
        bounds=Bounds(0.0, 0.0, 400.0, 400.0),
        obstacles=obstacles,
        name=name,
    ).validate()


def ring_scenario(ring_radius: float = 60.0, count: int = 12, obstacle_radius: float = 18.0) -> Scenario:
    """Target sealed inside a closed ring of obstacles."""
    cx, cy = 200.0, 250.0
    obstacles = tuple(
        Circle(WorldPoint(cx + ring_radius * math.sin(2 * math.pi * i / count),
                          cy + ring_radius * math.cos(2 * math.pi * i / count)), obstacle_radius)
        for i in range(count)
    )
    return Scenario(
        start=Pose(200.0, 50.0, 0.0),
        target=Target(WorldPoint(cx, cy), 5.0),
        bounds=Bounds(0.0, 0.0, 400.0, 400.0),
        obstacles=obstacles,
        name="ring",
    ).validate()


def lane_scenario(half_width: float = 20.0, yaw_deg: float = 0.0, offset_cm: float = 0.0) -> Scenario:
    """Testbed with a straight road running north; robot on the road centre.

    ``yaw_deg`` rotates the robot counter-clockwise (to the left), so the
    compass heading is ``-yaw_deg``. ``offset_cm`` shifts it east.
    """
    cx = TESTBED_CM / 2
    lanes = (
        (WorldPoint(cx - half_width, 0.0), WorldPoint(cx - half_width, TESTBED_CM)),
        (WorldPoint(cx + half_width, 0.0), WorldPoint(cx + half_width, TESTBED_CM)),
    )
    return Scenario(
        start=Pose(cx + offset_cm, 40.0, (-yaw_deg) % 360.0),
        target=Target(WorldPoint(cx, 280.0), 10.0),
        lanes=lanes,
        name="lane",
    ).validate()
