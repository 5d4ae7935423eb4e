"""Theta-based direct planning, grid Dijkstra, and a planner comparator.

Both planners report an elementary-operation count alongside wall time.
For Dijkstra that is priority-queue pushes + pops + edge relaxations; for
the theta planner it is the fixed number of arithmetic steps it performs.
Counts are deterministic, unlike profiler call counts or timings.
"""

from __future__ import annotations

import heapq
import json
import math
import time
from dataclasses import dataclass
from typing import List, Optional, Tuple

import numpy as np

from .errors import UnreachableError, ZeroBearingError
from .geometry import WorldPoint, normalize_deg

Cell = Tuple[int, int]  # (col, row); row 0 is the north edge

SQRT2 = math.sqrt(2.0)

_MOVES = [
    (-1, -1, SQRT2), (0, -1, 1.0), (1, -1, SQRT2),
    (-1, 0, 1.0), (1, 0, 1.0),
    (-1, 1, SQRT2), (0, 1, 1.0), (1, 1, SQRT2),
]


def theta_to_target(robot: WorldPoint, heading_deg: float, target: WorldPoint) -> float:
    """Signed smallest turn (degrees, in (-180, 180]) to face ``target``.

    ``heading_deg`` is compass style: 0 = +y, clockwise positive.
    """
    dx = target[0] - robot[0]
    dy = target[1] - robot[1]
    if dx == 0 and dy == 0:
        raise ZeroBearingError("robot and target coincide")
    return normalize_deg(math.degrees(math.atan2(dx, dy)) - heading_deg)


@dataclass
class OccupancyGrid:
    cols: int
    rows: int
    cell_size: float
    blocked: np.ndarray = None  # bool, shape (rows, cols)

    def __post_init__(self):
        if self.cols < 1 or self.rows < 1:
            raise ValueError(f"grid must be at least 1x1, got {self.cols}x{self.rows}")
        if not self.cell_size > 0:
            raise ValueError("cell_size must be positive")
        if self.blocked is None:
            self.blocked = np.zeros((self.rows, self.cols), dtype=bool)
        self.blocked = np.asarray(self.blocked, dtype=bool)
        if self.blocked.shape != (self.rows, self.cols):
            raise ValueError(f"blocked mask shape {self.blocked.shape} != ({self.rows}, {self.cols})")

    def in_bounds(self, cell: Cell) -> bool:
        return 0 <= cell[0] < self.cols and 0 <= cell[1] < self.rows

    def is_free(self, cell: Cell) -> bool:
        return self.in_bounds(cell) and not self.blocked[cell[1], cell[0]]

    def center(self, cell: Cell) -> WorldPoint:
        c, r = cell
        return WorldPoint((c + 0.5) * self.cell_size, (self.rows - r - 0.5) * self.cell_size)

    def to_text(self) -> str:
        lines = [f"{self.cols} {self.rows} {self.cell_size:g}"]
        lines += ["".join("#" if b else "." for b in row) for row in self.blocked]
        return "\n".join(lines) + "\n"

    @classmethod
    def from_text(cls, text: str) -> "OccupancyGrid":
        lines = [ln.rstrip("\r") for ln in text.splitlines()]
        if not lines:
            raise ValueError("empty grid file")
        try:
            cols, rows, size = lines[0].split()
            cols, rows, size = int(cols), int(rows), float(size)
        except ValueError:
            raise ValueError(f"line 1: expected 'cols rows cell_size_cm', got {lines[0]!r}") from None
        body = lines[1 : 1 + rows]
        if len(body) != rows:
            raise ValueError(f"expected {rows} grid rows, found {len(body)}")
        blocked = np.zeros((rows, cols), dtype=bool)
        for r, row in enumerate(body):
            if len(row) != cols:
                raise ValueError(f"line {r + 2}: expected {cols} cells, got {len(row)}")
            for c, ch in enumerate(row):
                if ch not in ".#":
                    raise ValueError(f"line {r + 2}, column {c + 1}: unexpected {ch!r}")
                blocked[r, c] = ch == "#"
        return cls(cols, rows, size, blocked)

    @classmethod
    def load(cls, path) -> "OccupancyGrid":
        with open(path, encoding="utf-8") as fh:
            return cls.from_text(fh.read())

    def save(self, path) -> None:
        with open(path, "w", encoding="utf-8", newline="\n") as fh:
            fh.write(self.to_text())

    @classmethod
    def random(cls, cols: int, rows: int, density: float, seed: int, cell_size: float = 1.0,
               keep_free: Tuple[Cell, ...] = ()) -> "OccupancyGrid":
        rng = np.random.default_rng(seed)
        blocked = rng.random((rows, cols)) < density
        for c, r in keep_free:
            blocked[r, c] = False
        return cls(cols, rows, cell_size, blocked)


@dataclass
class PlanResult:
    path: List[WorldPoint]
    cost: float
    ops: int
    wall_time: float = 0.0
    turn: Optional[float] = None


def dijkstra(grid: OccupancyGrid, source: Cell, goal: Cell, corner_rule: str = "strict") -> PlanResult:
    """Minimum-cost 8-connected path between two cells.

    Orthogonal steps cost one cell, diagonal steps sqrt(2). With
    ``corner_rule="strict"`` a diagonal needs both orthogonal cells beside it
    free; ``"gap"`` only forbids squeezing between two blocked cells. Queue
    entries are ``(cost, row * cols + col)`` so ties resolve to the lowest
    cell index and paths are reproducible.
    """
    t0 = time.perf_counter()
    if corner_rule not in ("strict", "gap"):
        raise ValueError(f"unknown corner_rule {corner_rule!r}")
    for name, cell in (("source", source), ("goal", goal)):
        if not grid.in_bounds(cell):
            raise ValueError(f"{name} cell {cell} is outside the {grid.cols}x{grid.rows} grid")
        if not grid.is_free(cell):
            raise UnreachableError(f"{name} cell {cell} is blocked")

    cols, rows = grid.cols, grid.rows
    free = (~grid.blocked).ravel().tolist()
    strict = corner_rule == "strict"
    src = source[1] * cols + source[0]
    dst = goal[1] * cols + goal[0]
    dist = [math.inf] * (cols * rows)
    parent = [-1] * (cols * rows)
    done = bytearray(cols * rows)
    dist[src] = 0.0
    heap = [(0.0, src)]
    ops = 1
    while heap:
        d, idx = heapq.heappop(heap)
        ops += 1
        if done[idx]:
            continue
        done[idx] = 1
        if idx == dst:
            break
        r, c = divmod(idx, cols)
        for dc, dr, w in _MOVES:
            nc, nr = c + dc, r + dr
            if nc < 0 or nc >= cols or nr < 0 or nr >= rows:
                continue
            nidx = nr * cols + nc
            if not free[nidx] or done[nidx]:
                continue
            if dc and dr:
                side_a, side_b = free[r * cols + nc], free[nr * cols + c]
                if (strict and not (side_a and side_b)) or not (side_a or side_b):
                    continue
            ops += 1
            nd = d + w
            if nd < dist[nidx]:
                dist[nidx] = nd
                parent[nidx] = idx
                heapq.heappush(heap, (nd, nidx))
                ops += 1
    else:
        raise UnreachableError(f"goal {goal} is unreachable from {source}")

    cells = []
    idx = dst
    while idx != -1:
        r, c = divmod(idx, cols)
        cells.append((c, r))
        idx = parent[idx]
    cells.reverse()
    path = [grid.center(cell) for cell in cells]
    return PlanResult(path, dist[dst] * grid.cell_size, ops, time.perf_counter() - t0)


def theta_plan(robot: WorldPoint, heading: float, target: WorldPoint) -> PlanResult:
    """Straight-line plan: one bearing computation and one distance."""
    t0 = time.perf_counter()
    dx = target[0] - robot[0]                       # 1
    dy = target[1] - robot[1]                       # 2
    if dx == 0 and dy == 0:
        raise ZeroBearingError("robot and target coincide")
    bearing = math.degrees(math.atan2(dx, dy))      # 3, 4
    turn = normalize_deg(bearing - heading)         # 5, 6
    cost = math.hypot(dx, dy)                       # 7
    return PlanResult([WorldPoint(*robot), WorldPoint(*target)], cost, THETA_PLAN_OPS,
                      time.perf_counter() - t0, turn)


#: Arithmetic steps counted in :func:`theta_plan`.
THETA_PLAN_OPS = 7


@dataclass
class PlannerStats:
    planner: str
    mean_time_s: Optional[float]
    mean_ops: Optional[float]
    cost: Optional[float]
    reachable: bool = True


@dataclass
class ComparisonReport:
    theta: PlannerStats
    dijkstra: PlannerStats
    speedup: Optional[float]
    ops_ratio: Optional[float]
    grid_size: Tuple[int, int] = (0, 0)
    source: Cell = (0, 0)
    goal: Cell = (0, 0)
    trials: int = 0

    @property
    def ok(self) -> bool:
        return self.dijkstra.reachable

    def to_dict(self) -> dict:
        """JSON-ready report; wall-clock fields live under ``volatile``."""
        stable = {
            "grid": {"cols": self.grid_size[0], "rows": self.grid_size[1]},
            "source": list(self.source),
            "goal": list(self.goal),
            "trials": self.trials,
            "planners": [
                {"planner": s.planner, "mean_ops": s.mean_ops, "cost_cm": s.cost, "reachable": s.reachable}
                for s in (self.theta, self.dijkstra)
            ],
            "ops_ratio": self.ops_ratio,
        }
        stable["volatile"] = {
            "planners": [{"planner": s.planner, "mean_time_s": s.mean_time_s} for s in (self.theta, self.dijkstra)],
            "speedup": self.speedup,
        }
        return stable

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=False) + "\n"

    def table(self) -> str:
        rows = [f"{'planner':<10} {'mean_time_s':>14} {'mean_ops':>12} {'cost_cm':>12}"]
        for s in (self.theta, self.dijkstra):
            if not s.reachable:
                rows.append(f"{s.planner:<10} {'-':>14} {'-':>12} {'unreachable':>12}")
                continue
            rows.append(f"{s.planner:<10} {s.mean_time_s:>14.3e} {s.mean_ops:>12.1f} {s.cost:>12.3f}")
        if self.ok:
            rows.append(f"speedup={self.speedup:.1f} ops_ratio={self.ops_ratio:.1f}")
        return "\n".join(rows)


def compare_planners(grid: OccupancyGrid, source: Cell, goal: Cell, trials: int = 100) -> ComparisonReport:
    """Run both planners ``trials`` times between the two cell centres.

    ``speedup`` is Dijkstra mean time over theta mean time and ``ops_ratio``
    the same for operation counts. When source equals goal both planners
    are trivially done and both ratios are reported as 1.
    """
    if trials < 1:
        raise ValueError("trials must be >= 1")
    start, end = grid.center(source), grid.center(goal)
    same = tuple(source) == tuple(goal)

    theta_times, theta_ops, theta_cost = [], [], 0.0
    for _ in range(trials):
        if same:
            t0 = time.perf_counter()
            res = PlanResult([start], 0.0, 0, 0.0)
            res.wall_time = time.perf_counter() - t0
        else:
            res = theta_plan(start, 0.0, end)
        theta_times.append(res.wall_time)
        theta_ops.append(res.ops)
        theta_cost = res.cost

    dij_times, dij_ops, dij_cost, reachable = [], [], None, True
    for _ in range(trials):
        try:
            res = dijkstra(grid, source, goal)
        except UnreachableError:
            reachable = False
            break
        dij_times.append(res.wall_time)
        dij_ops.append(res.ops)
        dij_cost = res.cost

    theta = PlannerStats("theta", float(np.mean(theta_times)), float(np.mean(theta_ops)), theta_cost)
    if reachable:
        dij = PlannerStats("dijkstra", float(np.mean(dij_times)), float(np.mean(dij_ops)), dij_cost)
    else:
        dij = PlannerStats("dijkstra", None, None, None, reachable=False)

    if same:
        speedup = ops_ratio = 1.0
    elif reachable:
        speedup = dij.mean_time_s / theta.mean_time_s if theta.mean_time_s > 0 else math.inf
        ops_ratio = dij.mean_ops / theta.mean_ops
    else:
        speedup = ops_ratio = None
    return ComparisonReport(theta, dij, speedup, ops_ratio, (grid.cols, grid.rows), tuple(source), tuple(goal), trials)
