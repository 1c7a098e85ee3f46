"""Reduced 4-DOF rigid-body dynamics for a small survey submersible.

State carries position (x, y east/north-style level frame, z positive
down), roll and yaw angles, and body rates (u surge, w heave, p roll,
r yaw).  Sway and pitch are frozen at zero: the vehicles this models are
passively stiff in pitch and have no lateral actuation, so the
interesting couplings are surge/yaw steering, heave against buoyancy and
the roll channel whose passive stability depends on the metacentric
offset h (positive when the center of gravity sits below the center of
buoyancy; the restoring couple is W h sin(roll)).

Integration is semi-implicit Euler at a fixed 10 ms step: velocities
update from forces first, positions then advance with the new
velocities.  Drag is quadratic per axis with hand-set coefficients; the
coefficients and per-config thrust constants are calibration values
chosen to land the shipped configs in the measured-rate regimes, not
identified hydrodynamics.  Yaw is kept unwrapped so rate metrics can
difference it; guidance wraps angle errors itself.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

import numpy as np
import yaml

DT = 0.01


@dataclass(frozen=True)
class Thruster:
    name: str
    position: tuple[float, float, float]     # m, body frame from CG
    direction: tuple[float, float, float]    # unit thrust direction
    max_thrust_n: float


@dataclass(frozen=True)
class VehicleParams:
    name: str
    mass_kg: float
    displaced_volume_m3: float
    metacentric_offset_m: float              # h; positive = CG below CB
    roll_inertia: float                      # kg m^2
    yaw_inertia: float                       # kg m^2
    drag: dict                               # axis -> N/(m/s)^2 or N m/(rad/s)^2
    thrusters: tuple[Thruster, ...]
    heave_efficiency: float = 1.0            # wash losses on vertical thrust
    gravity: float = 9.81
    water_density: float = 1000.0

    @property
    def weight_n(self) -> float:
        return self.mass_kg * self.gravity

    @property
    def buoyancy_n(self) -> float:
        return self.water_density * self.displaced_volume_m3 * self.gravity


@dataclass(frozen=True)
class ControlGains:
    depth_kp: float
    depth_kd: float
    roll_kp: float
    roll_kd: float
    yaw_kp: float
    yaw_kd: float
    speed_kp: float


@dataclass(frozen=True)
class VehicleConfig:
    params: VehicleParams
    gains: ControlGains


@dataclass(frozen=True)
class VehicleState:
    x: float = 0.0
    y: float = 0.0
    z: float = 0.0          # depth, positive down
    roll: float = 0.0       # rad, unwrapped
    yaw: float = 0.0        # rad, unwrapped
    u: float = 0.0          # surge, m/s
    w: float = 0.0          # heave, m/s, positive down
    p: float = 0.0          # roll rate, rad/s
    r: float = 0.0          # yaw rate, rad/s
    t: float = 0.0


def load_vehicle_config(name: str | Path) -> VehicleConfig:
    """Load a vehicle config by packaged name ('cfg1'..'cfg3') or path."""
    p = Path(name)
    if p.suffix in (".yaml", ".yml") and p.exists():
        text = p.read_text()
    else:
        text = resources.files("sublink.configs").joinpath(
            f"vehicles/{name}.yaml").read_text()
    doc = yaml.safe_load(text)
    thrusters = tuple(
        Thruster(d["name"], tuple(float(v) for v in d["pos"]),
                 tuple(float(v) for v in d["dir"]), float(d["max_thrust_n"]))
        for d in doc["thrusters"])
    params = VehicleParams(
        name=str(doc["name"]),
        mass_kg=float(doc["mass_kg"]),
        displaced_volume_m3=float(doc["displaced_volume_m3"]),
        metacentric_offset_m=float(doc["metacentric_offset_m"]),
        roll_inertia=float(doc["roll_inertia"]),
        yaw_inertia=float(doc["yaw_inertia"]),
        drag={k: float(v) for k, v in doc["drag"].items()},
        thrusters=thrusters,
        heave_efficiency=float(doc.get("heave_efficiency", 1.0)),
    )
    g = doc["gains"]
    gains = ControlGains(
        depth_kp=float(g["depth_kp"]), depth_kd=float(g["depth_kd"]),
        roll_kp=float(g["roll_kp"]), roll_kd=float(g["roll_kd"]),
        yaw_kp=float(g["yaw_kp"]), yaw_kd=float(g["yaw_kd"]),
        speed_kp=float(g["speed_kp"]))
    return VehicleConfig(params=params, gains=gains)


# ---------------------------------------------------------------------------
# actuation geometry

def controllability_matrix(params: VehicleParams) -> np.ndarray:
    """6xN matrix whose column i is [f_i; r_i x f_i] for unit thrust."""
    cols = []
    for th in params.thrusters:
        f = np.asarray(th.direction, dtype=float)
        r = np.asarray(th.position, dtype=float)
        cols.append(np.concatenate([f, np.cross(r, f)]))
    return np.column_stack(cols)


def controllability_rank(params: VehicleParams, tol: float = 1e-9) -> int:
    """Numerical rank: singular values above tol times the largest."""
    mat = controllability_matrix(params)
    s = np.linalg.svd(mat, compute_uv=False)
    if s.size == 0 or s[0] == 0.0:
        return 0
    return int(np.sum(s > tol * s[0]))


def restoring_moment(params: VehicleParams, theta: float) -> float:
    """Passive roll couple W h sin(theta).

    Positive h makes the couple oppose the displacement (the stepper
    subtracts it); negative h turns it into positive feedback and the
    upright attitude is unstable.
    """
    return params.weight_n * params.metacentric_offset_m * math.sin(theta)


def heave_thruster_indices(params: VehicleParams) -> list[int]:
    return [i for i, th in enumerate(params.thrusters) if abs(th.direction[2]) > 0.7]


def surge_thruster_indices(params: VehicleParams) -> list[int]:
    return [i for i, th in enumerate(params.thrusters) if abs(th.direction[0]) > 0.7]


def clip_allocation(params: VehicleParams, alloc: np.ndarray) -> np.ndarray:
    limits = np.array([th.max_thrust_n for th in params.thrusters])
    return np.clip(alloc, -limits, limits)


def thrust_wrench(params: VehicleParams, alloc: np.ndarray):
    """Net (surge force, heave force, roll moment, yaw moment) from the
    per-thruster allocation, after wash losses on vertical thrusters."""
    f_surge = f_heave = m_roll = m_yaw = 0.0
    for th, f in zip(params.thrusters, alloc):
        eff = params.heave_efficiency if abs(th.direction[2]) > 0.7 else 1.0
        fx, fy, fz = (eff * f * d for d in th.direction)
        rx, ry, rz = th.position
        f_surge += fx
        f_heave += fz
        m_roll += ry * fz - rz * fy
        m_yaw += rx * fy - ry * fx
    return f_surge, f_heave, m_roll, m_yaw


# ---------------------------------------------------------------------------
# dynamics

def step_dynamics(state: VehicleState, alloc: np.ndarray,
                  params: VehicleParams, dt: float = DT) -> VehicleState:
    alloc = clip_allocation(params, np.asarray(alloc, dtype=float))
    f_surge, f_heave, m_roll, m_yaw = thrust_wrench(params, alloc)
    drag = params.drag
    net_down = params.weight_n - params.buoyancy_n

    du = (f_surge - drag["surge"] * state.u * abs(state.u)) / params.mass_kg
    dw = (f_heave + net_down - drag["heave"] * state.w * abs(state.w)) / params.mass_kg
    dp = (m_roll - restoring_moment(params, state.roll)
          - drag["roll"] * state.p * abs(state.p)) / params.roll_inertia
    dr = (m_yaw - drag["yaw"] * state.r * abs(state.r)) / params.yaw_inertia

    u = state.u + du * dt
    w = state.w + dw * dt
    p = state.p + dp * dt
    r = state.r + dr * dt

    x = state.x + u * math.cos(state.yaw) * dt
    y = state.y + u * math.sin(state.yaw) * dt
    z = state.z + w * dt
    roll = state.roll + p * dt
    yaw = state.yaw + r * dt
    if z < 0.0:
        # the hull floats at the surface rather than leaving the water
        z = 0.0
        w = max(w, 0.0)
    return VehicleState(x=x, y=y, z=z, roll=roll, yaw=yaw,
                        u=u, w=w, p=p, r=r, t=state.t + dt)


# ---------------------------------------------------------------------------
# control

def pd_depth_control(state: VehicleState, target_depth: float,
                     gains: ControlGains, params: VehicleParams) -> np.ndarray:
    """PD depth hold on the vertical thrusters.

    Total downward command is kp * error - kd * heave + buoyancy trim, so
    at depth with zero heave the thrusters counteract exactly the net
    buoyancy.  A parallel PD on roll splits differentially across the
    vertical pair when the geometry offers a lever arm; a single centered
    thruster just gets the collective.  Output is clipped per thruster.
    """
    idx = heave_thruster_indices(params)
    alloc = np.zeros(len(params.thrusters))
    if not idx:
        return alloc
    err = target_depth - state.z
    f_total = gains.depth_kp * err - gains.depth_kd * state.w \
        + (params.buoyancy_n - params.weight_n)
    m_roll = -gains.roll_kp * state.roll - gains.roll_kd * state.p
    rows = []
    for i in idx:
        th = params.thrusters[i]
        rows.append([th.direction[2],
                     th.position[1] * th.direction[2] - th.position[2] * th.direction[1]])
    a = np.asarray(rows).T                      # [heave; roll] per unit thrust
    sol, *_ = np.linalg.lstsq(a, np.array([f_total, m_roll]), rcond=None)
    for i, f in zip(idx, sol):
        alloc[i] = f
    return clip_allocation(params, alloc)


def allocate_surge_yaw(params: VehicleParams, f_surge: float,
                       m_yaw: float) -> np.ndarray:
    """Split a surge force and yaw moment across the surge pair."""
    idx = surge_thruster_indices(params)
    alloc = np.zeros(len(params.thrusters))
    if not idx:
        return alloc
    rows = []
    for i in idx:
        th = params.thrusters[i]
        rows.append([th.direction[0],
                     th.position[0] * th.direction[1] - th.position[1] * th.direction[0]])
    a = np.asarray(rows).T
    sol, *_ = np.linalg.lstsq(a, np.array([f_surge, m_yaw]), rcond=None)
    for i, f in zip(idx, sol):
        alloc[i] = f
    return clip_allocation(params, alloc)


def maneuver_metrics(log: list[VehicleState]) -> dict:
    """Average yaw rate (deg/s) and heave rate (mm/s) over a state log."""
    if len(log) < 2:
        raise ValueError("need at least two states")
    dt_total = log[-1].t - log[0].t
    if dt_total <= 0.0:
        raise ValueError("log must span positive time")
    return {
        "yaw_rate_deg_s": math.degrees(log[-1].yaw - log[0].yaw) / dt_total,
        "heave_rate_mm_s": 1000.0 * (log[-1].z - log[0].z) / dt_total,
    }
