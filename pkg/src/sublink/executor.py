"""Mission state machine: packets in, trajectory out.

The executor owns a simulated vehicle and at most one active waypoint
plan.  Commands arrive as raw 100-bit packets, possibly corrupted; every
submission runs the full receive pipeline (sync scan, FEC decode,
payload checks, geometry generation) and is logged with a disposition:

  clean        accepted, codeword arrived intact
  corrected    accepted after FEC repaired 1..t bit errors
  fec_fail     sync found but the decoder refused the codeword
  frame_fail   no sync candidate in the packet at all
  malformed    decoded fine but the content was unusable

Acceptance replaces the current plan wherever the vehicle is: the new
pattern anchors at the accept-time pose.  A rejected packet parks the
phase at command_rejected for one tick so observers can see the refusal,
then the previous phase resumes.  The command log keeps one entry per
submission that produced at least one sync candidate; frame_fail
attempts appear only in the disposition log, since there is nothing to
attribute them to.

Guidance is a plain waypoint chaser: proportional heading to the active
waypoint with rate damping, quadratic feedforward plus a proportional
term on speed, and the PD depth hold from the vehicle module.  One tick
advances the world by the fixed dynamics step.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from . import bch, channel, codec, framing, patterns, vehicle

IDLE = "idle"
EXECUTING = "executing"
RE_TASKED = "re_tasked"
COMPLETED = "completed"
COMMAND_REJECTED = "command_rejected"

FEC_FAIL = "fec_fail"
FRAME_FAIL = "frame_fail"
MALFORMED = "malformed"

ARRIVAL_RADIUS_M = 0.3

TRAJECTORY_HEADER = "t,phase,x,y,z,yaw,wp_index,plan_id"


def wrap_angle(a: float) -> float:
    """Fold an angle into (-pi, pi]."""
    return -((-a + math.pi) % (2.0 * math.pi) - math.pi)


@dataclass
class Disposition:
    t: float
    disposition: str
    detail: str
    pattern: str | None = None
    plan_id: int | None = None
    corrected_positions: tuple = ()

    def as_dict(self) -> dict:
        return {
            "t": round(self.t, 6),
            "disposition": self.disposition,
            "detail": self.detail,
            "pattern": self.pattern,
            "plan_id": self.plan_id,
            "corrected_positions": list(self.corrected_positions),
        }


class MissionExecutor:
    def __init__(self, vehicle_name: str = "cfg3", table=None, code=None,
                 initial_state: vehicle.VehicleState | None = None):
        cfg = vehicle.load_vehicle_config(vehicle_name)
        self.params = cfg.params
        self.gains = cfg.gains
        self.table = table if table is not None else codec.load_table()
        self.code = code if code is not None else bch.build_code(t=2)
        self.state = initial_state or vehicle.VehicleState()
        self.phase = IDLE
        self.plan: patterns.WaypointPlan | None = None
        self.plan_id = 0
        self.wp_index = 0
        self.plan_accept_t = 0.0
        self.command_log: list[Disposition] = []
        self.dispositions: list[Disposition] = []
        self.trajectory: list[str] = []
        self._resume_phase = IDLE

    # -- command path ------------------------------------------------------

    def submit_packet(self, packet: np.ndarray) -> Disposition:
        """Run one packet through sync, FEC and the codec.

        Sync may yield several candidate codewords; the first one that
        survives the whole pipeline wins.  When none survive, the
        disposition reports the first candidate's failure so the log
        tells the operator what went wrong earliest in the packet.
        """
        candidates = framing.deframe(packet)
        if not candidates:
            d = Disposition(self.state.t, FRAME_FAIL, "no sync candidate")
            self.dispositions.append(d)
            self._reject()
            return d

        first_failure = None
        for _offset, cand in candidates:
            result = bch.decode(self.code, cand)
            if result.status == bch.FAILURE:
                failure = Disposition(self.state.t, FEC_FAIL,
                                      "decoder refused codeword")
                first_failure = first_failure or failure
                continue
            try:
                payload = codec.message_to_payload(result.message)
                cmd = codec.decode_payload(payload)
                plan = patterns.generate_waypoints(
                    cmd, patterns.Pose(self.state.x, self.state.y,
                                       self.state.yaw),
                    self.table)
            except codec.CommandCodecError as exc:
                failure = Disposition(self.state.t, MALFORMED, str(exc))
                first_failure = first_failure or failure
                continue
            except patterns.DegenerateGeometryError as exc:
                failure = Disposition(self.state.t, MALFORMED,
                                      f"degenerate geometry: {exc}")
                first_failure = first_failure or failure
                continue
            return self._accept(result, cmd, plan)

        self.command_log.append(first_failure)
        self.dispositions.append(first_failure)
        self._reject()
        return first_failure

    def _accept(self, result: bch.DecodeResult, cmd: codec.MissionCommand,
                plan: patterns.WaypointPlan) -> Disposition:
        self.plan = plan
        self.plan_id += 1
        self.wp_index = 0
        self.plan_accept_t = self.state.t
        name = plan.pattern.name.lower()
        d = Disposition(self.state.t,
                        "clean" if result.status == bch.CLEAN else "corrected",
                        f"accepted {name}",
                        pattern=name, plan_id=self.plan_id,
                        corrected_positions=result.corrected_positions)
        self.command_log.append(d)
        self.dispositions.append(d)
        if self.phase == IDLE:
            self.phase = EXECUTING
        else:
            self.phase = RE_TASKED
        return d

    def _reject(self) -> None:
        if self.phase != COMMAND_REJECTED:
            self._resume_phase = self.phase
        self.phase = COMMAND_REJECTED

    # -- guidance ----------------------------------------------------------

    def _target_waypoint(self):
        wps = self.plan.waypoints
        if self.wp_index < len(wps):
            return wps[self.wp_index]
        return wps[0]      # closing leg of a closed plan

    def _sequence_length(self) -> int:
        return len(self.plan.waypoints) + (1 if self.plan.closed else 0)

    def tick(self) -> vehicle.VehicleState:
        """Advance the world by one dynamics step and log the new row."""
        if self.phase == COMMAND_REJECTED:
            self.phase = self._resume_phase
        elif self.phase == RE_TASKED:
            self.phase = EXECUTING

        if self.phase == EXECUTING:
            alloc = self._steer()
        else:
            alloc = self._station_keep()
        self.state = vehicle.step_dynamics(self.state, alloc, self.params)
        self._log_row()
        return self.state

    def _steer(self) -> np.ndarray:
        st, g, p = self.state, self.gains, self.params
        wp = self._target_waypoint()
        dx, dy = wp.x - st.x, wp.y - st.y
        dist = math.hypot(dx, dy)

        holding = self.plan.hold_s > 0.0
        if holding:
            # station-hold command: sit on the point until the clock runs out
            if st.t - self.plan_accept_t >= self.plan.est_duration:
                self.phase = COMPLETED
                return self._station_keep()
            heading = wp.heading_hint if wp.heading_hint is not None \
                else st.yaw
            if dist < ARRIVAL_RADIUS_M:
                v_cmd = 0.0
            else:
                heading = math.atan2(dy, dx)
                v_cmd = 0.3
        else:
            if dist < ARRIVAL_RADIUS_M:
                self.wp_index += 1
                if self.wp_index >= self._sequence_length():
                    self.phase = COMPLETED
                    return self._station_keep()
                wp = self._target_waypoint()
                dx, dy = wp.x - st.x, wp.y - st.y
            heading = math.atan2(dy, dx)
            v_cmd = wp.speed

        err = wrap_angle(heading - st.yaw)
        m_yaw = g.yaw_kp * err - g.yaw_kd * st.r
        f_surge = p.drag["surge"] * v_cmd * abs(v_cmd) + g.speed_kp * (v_cmd - st.u)
        alloc = vehicle.allocate_surge_yaw(p, f_surge, m_yaw)
        alloc = alloc + vehicle.pd_depth_control(st, wp.depth, g, p)
        return vehicle.clip_allocation(p, alloc)

    def _station_keep(self) -> np.ndarray:
        """Zero speed, hold current depth target (last waypoint or surface)."""
        st, g, p = self.state, self.gains, self.params
        depth = self.plan.waypoints[-1].depth if self.plan else st.z
        alloc = vehicle.allocate_surge_yaw(p, g.speed_kp * (0.0 - st.u),
                                           -g.yaw_kd * st.r)
        alloc = alloc + vehicle.pd_depth_control(st, depth, g, p)
        return vehicle.clip_allocation(p, alloc)

    def _log_row(self) -> None:
        st = self.state
        self.trajectory.append(
            f"{st.t:.2f},{self.phase},{st.x:.6f},{st.y:.6f},{st.z:.6f},"
            f"{st.yaw:.6f},{self.wp_index},{self.plan_id}")

    def run(self, seconds: float) -> None:
        for _ in range(int(round(seconds / vehicle.DT))):
            self.tick()

    def trajectory_csv(self) -> str:
        return "\n".join([TRAJECTORY_HEADER, *self.trajectory]) + "\n"


# ---------------------------------------------------------------------------
# scripted missions

@dataclass
class MissionReport:
    trajectory_csv: str
    command_log: list[dict]
    dispositions: list[dict]
    final_state: vehicle.VehicleState
    plan_ids: list[int] = field(default_factory=list)


def build_packet(pattern: str, params: dict, table, code) -> np.ndarray:
    """Physical command values to a clean 100-bit packet."""
    ptype = codec.PatternType[pattern.upper()]
    cmd = codec.MissionCommand.from_physical(ptype, params, table)
    payload = codec.encode_command(cmd)
    message = codec.payload_to_message(payload)
    return framing.frame(bch.encode(code, message))


def run_scripted_mission(schedule: list[dict], duration: float,
                         vehicle_name: str = "cfg3", seed: int = 0,
                         ber: float = 0.0) -> MissionReport:
    """Drive an executor from a list of timed uplink events.

    Each event holds 't' plus either 'packet_hex' (raw 25-char packet)
    or 'pattern' and 'params'.  Optional 'flip_bits' lists codeword bit
    positions to invert after framing, before any random channel noise.
    Channel noise for event i uses a sub-seed of (seed, i) so the whole
    mission replays byte-identically from the same arguments.
    """
    ex = MissionExecutor(vehicle_name=vehicle_name)
    events = sorted(schedule, key=lambda e: float(e["t"]))
    pending = list(events)
    n_ticks = int(round(duration / vehicle.DT))
    tx_index = 0
    for _ in range(n_ticks):
        while pending and ex.state.t >= float(pending[0]["t"]) - 1e-9:
            event = pending.pop(0)
            if "packet_hex" in event:
                packet = framing.hex_to_packet(event["packet_hex"])
            else:
                packet = build_packet(event["pattern"], event["params"],
                                      ex.table, ex.code)
            for pos in event.get("flip_bits", ()):
                col = framing.HEADER_BITS + int(pos)
                packet[col] ^= 1
            if ber > 0.0:
                model = channel.ChannelModel(
                    ber=ber, seed=channel.derive_seed(seed, tx_index))
                packet = model.apply_noise(packet)
            tx_index += 1
            ex.submit_packet(packet)
        ex.tick()
    return MissionReport(
        trajectory_csv=ex.trajectory_csv(),
        command_log=[d.as_dict() for d in ex.command_log],
        dispositions=[d.as_dict() for d in ex.dispositions],
        final_state=ex.state,
        plan_ids=[d.plan_id for d in ex.command_log if d.plan_id],
    )
