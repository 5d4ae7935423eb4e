"""Command-line entry points.

Exit status: 0 success, 1 domain failure (robot did not arrive, goal
unreachable, lane lost), 2 usage or input error.
"""

from __future__ import annotations

import argparse
import dataclasses
import json
import logging
import os
import re
import sys
from pathlib import Path

from . import net
from .errors import LaneLostError, PGMError, ScenarioError, TransportError, WaypathError
from .geometry import new_history, theta_fifo_push, theta_multi
from .pathfind import OccupancyGrid, compare_planners
from .pgm import read_pgm, write_pgm
from .plot import mission_svg
from .sim import Outcome, Scenario, WorldState, lane_scenario, render_onboard
from .vision import draw_overlay, process_frame

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


def _out_dir(path) -> Path:
    out = Path(path)
    try:
        out.mkdir(parents=True, exist_ok=True)
    except OSError as exc:
        raise UsageError(f"cannot create output directory {out}: {exc}") from None
    if not os.access(out, os.W_OK):
        raise UsageError(f"output directory {out} is not writable")
    return out


def _write(path: Path, text: str) -> None:
    with open(path, "w", encoding="utf-8", newline="\n") as fh:
        fh.write(text)


def load_scenario(args) -> Scenario:
    if not args.scenario:
        raise UsageError("--scenario is required")
    path = Path(args.scenario)
    if not path.exists():
        raise UsageError(f"scenario not found: {path}")
    scenario = Scenario.load(path)
    overrides = {}
    if getattr(args, "speed", None) is not None:
        overrides["forward_speed"] = args.speed
    if getattr(args, "dt", None) is not None:
        overrides["dt"] = args.dt
    if overrides:
        scenario = dataclasses.replace(scenario, params=dataclasses.replace(scenario.params, **overrides)).validate()
    return scenario


def write_mission(out: Path, scenario: Scenario, report, session_lines=()) -> None:
    _write(out / "trajectory.csv", report.trajectory_csv())
    _write(out / "transcript.txt", report.transcript_text())
    _write(out / "mission.svg", mission_svg(scenario, report.trajectory))
    summary = {
        "scenario": scenario.name,
        "outcome": report.outcome.value,
        "signaled": report.signaled,
        "initial_theta_deg": round(report.initial_theta, 6),
        "elapsed_s": round(report.elapsed_s, 6),
        "path_length_cm": round(report.path_length_cm, 6),
        "final_distance_cm": round(report.final_distance_cm, 6),
    }
    _write(out / "report.json", json.dumps(summary, indent=2) + "\n")
    if session_lines:
        _write(out / "session.log", "".join(ln + "\n" for ln in session_lines))


def _mission_line(report) -> str:
    return (f"outcome={report.outcome.value} elapsed_s={report.elapsed_s:.2f} "
            f"path_length_cm={report.path_length_cm:.1f} final_distance_cm={report.final_distance_cm:.2f}")


def cmd_mission(args) -> int:
    scenario = load_scenario(args)
    out = _out_dir(args.out)
    if args.no_net:
        from .sim import run_mission

        report, lines = run_mission(scenario), []
    else:
        session, client = net.loopback_mission(scenario)
        report = client.mission
        if report is None:
            print(f"error: robot session failed: {client.error}", file=sys.stderr)
            return EXIT_FAIL
        lines = [f"server {ln}" for ln in session.transcript] + [f"robot {ln}" for ln in client.transcript]
    write_mission(out, scenario, report, lines)
    print(_mission_line(report))
    return EXIT_OK if report.outcome is Outcome.DONE else EXIT_FAIL


def _synthetic_frames(args):
    if not args.multi:
        yaws = [args.yaw]
    else:
        yaws = [args.yaw + i * args.drift for i in range(args.frames)]
    frames = []
    for yaw in yaws:
        scenario = lane_scenario(yaw_deg=yaw)
        frames.append(render_onboard(WorldState.initial(scenario), scenario))
    return frames


def cmd_lane(args) -> int:
    out = _out_dir(args.out)
    if args.synthetic:
        frames = _synthetic_frames(args)
    else:
        if not args.images:
            raise UsageError("give one or more PGM images or --synthetic")
        frames = []
        for path in args.images:
            try:
                frames.append(read_pgm(path))
            except FileNotFoundError:
                raise UsageError(f"image not found: {path}") from None
            except PGMError as exc:
                raise UsageError(f"{path}: {exc}") from None
    if args.multi and len(frames) < 2:
        raise UsageError("--multi needs at least two frames")

    history = new_history()
    previous = None
    result = None
    for i, img in enumerate(frames):
        result = process_frame(img, previous=previous)
        previous = result.lanes
        theta_fifo_push(history, result.lanes.midline)
        suffix = f"_{i:03d}" if len(frames) > 1 else ""
        write_pgm(out / f"edges{suffix}.pgm", result.edges)
        write_pgm(out / f"overlay{suffix}.pgm", draw_overlay(img, result))
    print(f"theta_deg={result.theta:.2f}")
    if args.multi:
        prev, curr = history
        print(f"theta_multi_deg={theta_multi(prev.top, prev.bottom, curr.top):.2f}")
    return EXIT_OK


_SIZE = re.compile(r"^(\d+)x(\d+)$")


def cmd_bench(args) -> int:
    out = _out_dir(args.out)
    if args.grid:
        try:
            grid = OccupancyGrid.load(args.grid)
        except FileNotFoundError:
            raise UsageError(f"grid not found: {args.grid}") from None
        except ValueError as exc:
            raise UsageError(f"{args.grid}: {exc}") from None
    elif args.random:
        m = _SIZE.match(args.random)
        if not m:
            raise UsageError(f"--random expects COLSxROWS, got {args.random!r}")
        cols, rows = int(m.group(1)), int(m.group(2))
        if cols < 1 or rows < 1:
            raise UsageError("grid must be at least 1x1")
        corners = ((0, 0), (cols - 1, rows - 1))
        grid = OccupancyGrid.random(cols, rows, args.density, args.seed, keep_free=corners)
    else:
        raise UsageError("give --grid FILE or --random COLSxROWS")
    if args.trials < 1:
        raise UsageError("--trials must be >= 1")
    source, goal = (0, 0), (grid.cols - 1, grid.rows - 1)
    report = compare_planners(grid, source, goal, args.trials)
    _write(out / "bench.json", report.to_json())
    print(report.table())
    if not report.ok:
        print("dijkstra: goal unreachable", file=sys.stderr)
        return EXIT_FAIL
    return EXIT_OK


def cmd_serve(args) -> int:
    from .sim import plan_initial_theta

    scenario = load_scenario(args)
    port = args.port if args.port is not None else net.default_port()
    listener = net.listen(args.host, port)
    print(f"listening on {args.host}:{listener.getsockname()[1]}", flush=True)

    def report(session):
        print(f"session outcome={session.outcome} theta={session.theta}"
              + (f" error={session.error}" if session.error else ""), flush=True)

    try:
        net.serve_planner(listener, lambda: plan_initial_theta(scenario), max_sessions=args.sessions,
                          on_session=report)
    except KeyboardInterrupt:
        pass
    finally:
        listener.close()
    return EXIT_OK


def cmd_robot(args) -> int:
    scenario = load_scenario(args)
    out = _out_dir(args.out)
    port = args.port if args.port is not None else net.default_port()
    try:
        result = net.run_robot_client((args.host, port), net.SimExecutor(scenario))
    except TransportError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    if result.mission is None:
        print(f"error: {result.outcome}: {result.error}", file=sys.stderr)
        return EXIT_FAIL
    write_mission(out, scenario, result.mission, [f"robot {ln}" for ln in result.transcript])
    print(_mission_line(result.mission))
    return EXIT_OK if result.outcome == "completed" else EXIT_FAIL


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="waypath", description="Robot navigation workbench")
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, scenario=True, out=True):
        if scenario:
            p.add_argument("--scenario", help="scenario JSON file")
            p.add_argument("--speed", type=float, help="forward speed override (cm/s)")
            p.add_argument("--dt", type=float, help="simulation timestep override (s)")
        if out:
            p.add_argument("--out", default="out", help="output directory")

    p = sub.add_parser("mission", help="run a full mission in simulation")
    common(p)
    p.add_argument("--no-net", action="store_true", help="skip the loopback socket session")
    p.set_defaults(func=cmd_mission)

    p = sub.add_parser("lane", help="run the lane-keeping pipeline")
    common(p, scenario=False)
    p.add_argument("images", nargs="*", help="PGM frames, in order")
    p.add_argument("--synthetic", action="store_true", help="render frames from the built-in lane testbed")
    p.add_argument("--multi", action="store_true", help="also report the two-frame theta")
    p.add_argument("--yaw", type=float, default=0.0, help="synthetic robot yaw, counter-clockwise degrees")
    p.add_argument("--drift", type=float, default=2.0, help="synthetic yaw change per frame with --multi")
    p.add_argument("--frames", type=int, default=3, help="synthetic frame count with --multi")
    p.set_defaults(func=cmd_lane)

    p = sub.add_parser("bench", help="compare theta and Dijkstra planners")
    common(p, scenario=False)
    p.add_argument("--grid", help="grid text file")
    p.add_argument("--random", metavar="COLSxROWS", help="generate a random grid")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--density", type=float, default=0.2, help="blocked-cell fraction for --random")
    p.add_argument("--trials", type=int, default=100)
    p.set_defaults(func=cmd_bench)

    p = sub.add_parser("serve", help="run the workstation planner server")
    common(p, out=False)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, help=f"TCP port (default ${net.PORT_ENV} or {net.DEFAULT_PORT})")
    p.add_argument("--sessions", type=int, default=None, help="exit after this many sessions")
    p.set_defaults(func=cmd_serve)

    p = sub.add_parser("robot", help="run the simulated robot client")
    common(p)
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, help=f"TCP port (default ${net.PORT_ENV} or {net.DEFAULT_PORT})")
    p.set_defaults(func=cmd_robot)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING, format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ScenarioError as exc:
        print(f"error: scenario: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except LaneLostError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL
    except WaypathError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
