"""Waypoint generation for the eight maneuver patterns.

Plans are laid out in a local level frame anchored at the vehicle pose
current when the command is accepted: x along the reference heading, y to
port of it, depth positive down.  Patterns with their own heading
parameter (straight legs, hover) use that absolute heading instead of the
anchor yaw.  Curved paths are discretized every 15 degrees of arc;
straight segments carry endpoints only.

Closed plans (square, circle, box orbit) list each vertex once; the
``closed`` flag tells the follower to run one more leg back to the first
waypoint, so the traversed path ends exactly where it started.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .codec import CCW, MissionCommand, PatternType, QuantTable

ANGULAR_STEP_DEG = 15.0
DEFAULT_ROW_SPACING = 1.0


class DegenerateGeometryError(ValueError):
    """Command decodes fine but describes an untraversable pattern."""


@dataclass(frozen=True)
class Pose:
    x: float = 0.0
    y: float = 0.0
    yaw: float = 0.0       # radians, 0 along +x


@dataclass(frozen=True)
class Waypoint:
    x: float
    y: float
    depth: float
    speed: float
    heading_hint: float | None = None


@dataclass(frozen=True)
class WaypointPlan:
    pattern: PatternType
    waypoints: tuple[Waypoint, ...]
    closed: bool
    est_duration: float
    hold_s: float = 0.0    # station-keep time, nonzero for hover only


def _place(origin_x, origin_y, yaw, pts, depths, speed, heading_hint=None):
    c, s = math.cos(yaw), math.sin(yaw)
    out = []
    for (lx, ly), depth in zip(pts, depths):
        out.append(Waypoint(origin_x + lx * c - ly * s,
                            origin_y + lx * s + ly * c,
                            depth, speed, heading_hint))
    return out


def _arc_points(radius_fn, total_deg, direction):
    """Sample an arc every ANGULAR_STEP_DEG, vehicle starting at the local
    origin heading along +x, turn center abeam of it."""
    sign = 1.0 if direction == CCW else -1.0
    steps = int(round(total_deg / ANGULAR_STEP_DEG))
    pts = []
    for i in range(steps + 1):
        t = math.radians(i * ANGULAR_STEP_DEG)
        r = radius_fn(i / steps if steps else 0.0)
        theta = sign * (t - math.pi / 2.0)
        pts.append((r * math.cos(theta), sign * r + r * math.sin(theta)))
    return pts


def estimate_duration(plan: WaypointPlan) -> float:
    """Traversal time: 3D path length over per-leg speed, plus hold time.

    The closing leg of a closed plan is included.
    """
    wps = list(plan.waypoints)
    if plan.closed and len(wps) > 1:
        wps.append(wps[0])
    total = 0.0
    for a, b in zip(wps, wps[1:]):
        d = math.dist((a.x, a.y, a.depth), (b.x, b.y, b.depth))
        if d == 0.0:
            continue
        if b.speed <= 0.0:
            raise DegenerateGeometryError("zero speed on a moving pattern")
        total += d / b.speed
    return total + plan.hold_s


def generate_waypoints(cmd: MissionCommand, origin: Pose, table: QuantTable,
                       row_spacing: float = DEFAULT_ROW_SPACING) -> WaypointPlan:
    """Expand a decoded command into a waypoint plan anchored at ``origin``."""
    p = cmd.physical(table)
    ox, oy, yaw = origin.x, origin.y, origin.yaw
    pat = cmd.pattern

    if pat is PatternType.STRAIGHT:
        speed, depth = p["cruise_speed"], p["target_depth"]
        length = speed * p["duration"]
        if length <= 0.0:
            raise DegenerateGeometryError("straight leg has zero length")
        hdg = math.radians(p["heading"])
        wps = _place(ox, oy, hdg, [(0.0, 0.0), (length, 0.0)],
                     [depth, depth], speed, heading_hint=hdg)
        plan = WaypointPlan(pat, tuple(wps), False, 0.0)

    elif pat is PatternType.SQUARE:
        speed, depth, side = p["cruise_speed"], p["target_depth"], p["side_span"]
        if side <= 0.0:
            raise DegenerateGeometryError("square side must be positive")
        sign = 1.0 if p["direction"] == CCW else -1.0
        corners = [(0.0, 0.0), (side, 0.0), (side, sign * side), (0.0, sign * side)]
        wps = _place(ox, oy, yaw, corners, [depth] * 4, speed)
        plan = WaypointPlan(pat, tuple(wps), True, 0.0)

    elif pat is PatternType.LAWNMOWER:
        speed, depth = p["cruise_speed"], p["target_depth"]
        width, height, laps = p["grid_width"], p["grid_height"], int(p["laps"])
        if width <= 0.0 or height <= 0.0:
            raise DegenerateGeometryError("lawnmower grid must have positive extent")
        if laps < 1:
            raise DegenerateGeometryError("lawnmower needs at least one lap")
        rows = max(2, int(round(height / row_spacing)) + 1)
        spacing = height / (rows - 1)
        pts = []
        for lap in range(laps):
            for j in range(rows):
                y = j * spacing
                xs = (0.0, width) if j % 2 == 0 else (width, 0.0)
                pts.append((xs[0], y))
                pts.append((xs[1], y))
        wps = _place(ox, oy, yaw, pts, [depth] * len(pts), speed)
        plan = WaypointPlan(pat, tuple(wps), False, 0.0)

    elif pat is PatternType.CIRCLE:
        speed, depth, radius = p["cruise_speed"], p["target_depth"], p["radius"]
        if radius <= 0.0:
            raise DegenerateGeometryError("circle radius must be positive")
        pts = _arc_points(lambda f: radius, 360.0, p["direction"])[:-1]
        wps = _place(ox, oy, yaw, pts, [depth] * len(pts), speed)
        plan = WaypointPlan(pat, tuple(wps), True, 0.0)

    elif pat is PatternType.SPIRAL:
        speed, depth = p["cruise_speed"], p["target_depth"]
        r0, r1, loops = p["initial_radius"], p["final_radius"], int(p["loops"])
        if loops < 1:
            raise DegenerateGeometryError("spiral needs at least one loop")
        if r0 <= 0.0 and r1 <= 0.0:
            raise DegenerateGeometryError("spiral radii must not both be zero")
        sign = 1.0 if p["direction"] == CCW else -1.0
        steps = int(round(loops * 360.0 / ANGULAR_STEP_DEG))
        pts = []
        for i in range(steps + 1):
            r = r0 + (r1 - r0) * (i / steps)
            theta = sign * math.radians(i * ANGULAR_STEP_DEG)
            pts.append((r * math.cos(theta), r * math.sin(theta)))
        wps = _place(ox, oy, yaw, pts, [depth] * len(pts), speed)
        plan = WaypointPlan(pat, tuple(wps), False, 0.0)

    elif pat is PatternType.HELIX:
        speed, radius = p["cruise_speed"], p["radius"]
        d0, d1, turns = p["start_depth"], p["end_depth"], int(p["turns"])
        if radius <= 0.0:
            raise DegenerateGeometryError("helix radius must be positive")
        if turns < 1:
            raise DegenerateGeometryError("helix needs at least one turn")
        pts = _arc_points(lambda f: radius, turns * 360.0, p["direction"])
        n = len(pts)
        depths = [d0 + (d1 - d0) * (i / (n - 1)) for i in range(n)]
        wps = _place(ox, oy, yaw, pts, depths, speed)
        plan = WaypointPlan(pat, tuple(wps), False, 0.0)

    elif pat is PatternType.HOVER:
        depth, hold = p["target_depth"], p["duration"]
        hdg = math.radians(p["heading"])
        wp = Waypoint(ox, oy, depth, 0.0, heading_hint=hdg)
        plan = WaypointPlan(pat, (wp,), False, 0.0, hold_s=hold)

    elif pat is PatternType.BOX_ORBIT:
        speed, depth, radius = p["cruise_speed"], p["target_depth"], p["radius"]
        laps = int(p["laps"])
        if radius <= 0.0:
            raise DegenerateGeometryError("box orbit radius must be positive")
        if laps < 1:
            raise DegenerateGeometryError("box orbit needs at least one lap")
        sign = 1.0 if p["direction"] == CCW else -1.0
        corners = [(radius, 0.0), (0.0, sign * radius),
                   (-radius, 0.0), (0.0, -sign * radius)]
        pts = corners * laps
        wps = _place(ox, oy, yaw, pts, [depth] * len(pts), speed)
        plan = WaypointPlan(pat, tuple(wps), True, 0.0)

    else:
        raise DegenerateGeometryError(f"no geometry for pattern {pat}")

    duration = estimate_duration(plan)
    return WaypointPlan(plan.pattern, plan.waypoints, plan.closed, duration, plan.hold_s)
