"""Byte-stable SVG rendering of a scenario and a trajectory."""

from __future__ import annotations

from typing import Sequence

from .sim import Scenario


def _f(value: float) -> str:
    return f"{value:.2f}"


def mission_svg(scenario: Scenario, trajectory: Sequence[tuple] = (), scale: float = 2.0) -> str:
    b = scenario.bounds
    width, height = b.width * scale, b.height * scale

    def px(x, y):
        return _f((x - b.x_min) * scale), _f((b.y_max - y) * scale)

    out = [
        '<?xml version="1.0" encoding="UTF-8"?>',
        f'<svg xmlns="http://www.w3.org/2000/svg" width="{_f(width)}" height="{_f(height)}" '
        f'viewBox="0 0 {_f(width)} {_f(height)}">',
        f'<rect x="0" y="0" width="{_f(width)}" height="{_f(height)}" fill="#ffffff" stroke="#000000" stroke-width="2"/>',
    ]
    for lane in scenario.lanes:
        pts = " ".join(",".join(px(*p)) for p in lane)
        out.append(f'<polyline points="{pts}" fill="none" stroke="#999999" stroke-width="3"/>')
    for ob in scenario.obstacles:
        cx, cy = px(*ob.center)
        out.append(f'<circle cx="{cx}" cy="{cy}" r="{_f(ob.radius * scale)}" fill="#555555"/>')
    tx, ty = px(*scenario.target.position)
    out.append(f'<circle cx="{tx}" cy="{ty}" r="{_f(scenario.target.radius * scale)}" fill="#2e8b57"/>')
    sx, sy = px(scenario.start.x, scenario.start.y)
    out.append(f'<circle cx="{sx}" cy="{sy}" r="{_f(scenario.params.robot_radius * scale)}" '
               f'fill="none" stroke="#1f4e9e" stroke-width="1.5"/>')
    if trajectory:
        pts = []
        last = None
        for row in trajectory:
            p = px(row[1], row[2])
            if p != last:
                pts.append(",".join(p))
                last = p
        out.append(f'<polyline points="{" ".join(pts)}" fill="none" stroke="#c0392b" stroke-width="1.5"/>')
    out.append("</svg>")
    return "\n".join(out) + "\n"
