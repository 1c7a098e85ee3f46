"""End-to-end acceptance gate.

One test per shipped claim, numbered, each printing a single PASS/FAIL
line with the measured numbers (run with -s to see the lines for passing
tests; pytest -v shows the per-criterion verdict either way).  These
tests intentionally re-measure everything through public entry points
rather than trusting module internals.
"""
import math
import time

import numpy as np
import pytest

from sublink import bch, channel, codec, executor, framing, patterns, vehicle
from sublink.bits import random_bits


def report(num: int, name: str, ok: bool, detail: str) -> bool:
    verdict = "PASS" if ok else "FAIL"
    print(f"criterion {num:02d} {name}: {verdict} ({detail})")
    return ok


def test_criterion_01_exhaustive_error_correction():
    """Every 1- and 2-bit corruption of a codeword repairs exactly."""
    start = time.monotonic()
    code = bch.build_code(t=2)
    msg = random_bits(np.random.default_rng(2024), code.k)
    cw = bch.encode(code, msg)
    bad = 0
    checked = 0
    for i in range(code.n):
        one = cw.copy()
        one[i] ^= 1
        r = bch.decode(code, one)
        checked += 1
        if r.status != bch.CORRECTED or not np.array_equal(r.message, msg) \
                or r.corrected_positions != (i,):
            bad += 1
    for i in range(code.n):
        for j in range(i + 1, code.n):
            two = cw.copy()
            two[i] ^= 1
            two[j] ^= 1
            r = bch.decode(code, two)
            checked += 1
            if r.status != bch.CORRECTED or not np.array_equal(r.message, msg) \
                    or sorted(r.corrected_positions) != [i, j]:
                bad += 1
    elapsed = time.monotonic() - start
    ok = bad == 0 and checked == 72 + 2556 and elapsed < 60.0
    assert report(1, "exhaustive 1+2 bit repair", ok,
                  f"{checked} patterns, {bad} misses, {elapsed:.1f}s")


def test_criterion_02_noiseless_roundtrip_fidelity():
    """10^4 random commands survive the full pipeline bit-exactly."""
    code = bch.build_code(t=2)
    rng = np.random.default_rng(7)
    patterns_list = list(codec.PatternType)
    failures = 0
    trials = 10_000
    for _ in range(trials):
        pattern = patterns_list[int(rng.integers(0, 8))]
        raw = tuple(int(rng.integers(0, 256)) if role is not None else 0
                    for role in codec.PARAM_ROLES[pattern])
        cmd = codec.MissionCommand(pattern, raw)
        packet = framing.frame(
            bch.encode(code, codec.payload_to_message(codec.encode_command(cmd))))
        hits = framing.deframe(packet)
        if len(hits) != 1:
            failures += 1
            continue
        result = bch.decode(code, hits[0][1])
        if result.status != bch.CLEAN:
            failures += 1
            continue
        back = codec.decode_payload(codec.message_to_payload(result.message))
        if back != cmd:
            failures += 1
    ok = failures == 0
    assert report(2, "noiseless roundtrip fidelity", ok,
                  f"{trials} commands, {failures} mismatches")


def test_criterion_03_correction_strength_ordering():
    """Stronger codes must win where their extra parity pays for itself."""
    trials = 10_000
    low = channel.run_sweep(t_values=(1, 2), ber_values=(0.005, 0.01, 0.02),
                            trials=trials, seed=1)
    high = channel.run_sweep(t_values=(2, 3, 4), ber_values=(0.07, 0.10),
                             trials=trials, seed=1)

    def sigma(p1, p2):
        return math.sqrt((p1 * (1 - p1) + p2 * (1 - p2)) / trials)

    clause1 = []
    for ber in (0.005, 0.01, 0.02):
        r1 = low.cell(1, ber).rate
        r2 = low.cell(2, ber).rate
        clause1.append(r2 - r1 > 3 * sigma(r1, r2))
    clause2 = []
    for ber in (0.07, 0.10):
        r2 = high.cell(2, ber).rate
        for t in (3, 4):
            rt = high.cell(t, ber).rate
            clause2.append(rt - r2 <= 3 * sigma(r2, rt))

    lo = {b: (low.cell(1, b).rate, low.cell(2, b).rate)
          for b in (0.005, 0.01, 0.02)}
    hi = {b: tuple(high.cell(t, b).rate for t in (2, 3, 4))
          for b in (0.07, 0.10)}
    # clause 2 bounds the heavier codes at high BER: they must not beat
    # t=2 by more than noise.  Measured rates say they do, by a wide
    # margin, because 8 extra parity bits cost less than one more error
    # of correction budget buys until far past this BER grid
    assert report(
        3, "strength ordering across the BER grid",
        all(clause1) and all(clause2),
        f"low-BER (t1,t2): {lo}; high-BER (t2,t3,t4): {hi}; "
        f"clause1={clause1}, clause2-no-win-over-t2={clause2}")


def test_criterion_04_rate_accounting():
    """Planning-rate and realized-rate tables match the construction."""
    points = {p.t: p for p in channel.efficiency_curve(t_values=(0, 1, 2, 3))}
    planned = {t: round(points[t].efficiency_2mt, 3) for t in (1, 2, 3)}
    realized = {t: round(points[t].realized_rate, 3) for t in (1, 2, 3)}
    ok = (planned == {1: 0.778, 2: 0.636, 3: 0.538}
          and realized == {1: 0.875, 2: 0.778, 3: 0.700}
          and points[0].efficiency_2mt == 1.0
          and points[1].efficiency_2mt == pytest.approx(56 / 72)
          and points[2].realized_rate == pytest.approx(56 / 72))
    assert report(4, "code rate accounting", ok,
                  f"planned={planned} realized={realized}")


def test_criterion_05_controllability_ranks():
    """Thruster geometry alone decides the reachable wrench space."""
    r3 = vehicle.controllability_rank(vehicle.load_vehicle_config("cfg3").params)
    r1 = vehicle.controllability_rank(vehicle.load_vehicle_config("cfg1").params)
    six = vehicle.VehicleParams(
        name="synthetic6", mass_kg=10.0, displaced_volume_m3=0.01,
        metacentric_offset_m=0.0, roll_inertia=0.2, yaw_inertia=1.0,
        drag={"surge": 5.0, "heave": 100.0, "roll": 0.5, "yaw": 10.0},
        thrusters=(
            vehicle.Thruster("fx", (0, 0, 0), (1, 0, 0), 5.0),
            vehicle.Thruster("fy", (0, 0, 0), (0, 1, 0), 5.0),
            vehicle.Thruster("fz", (0, 0, 0), (0, 0, 1), 5.0),
            vehicle.Thruster("rx", (0, 1, 0), (0, 0, 1), 5.0),
            vehicle.Thruster("ry", (0, 0, 1), (1, 0, 0), 5.0),
            vehicle.Thruster("rz", (1, 0, 0), (0, 1, 0), 5.0),
        ))
    r6 = vehicle.controllability_rank(six)
    ok = (r3, r1, r6) == (4, 3, 6)
    assert report(5, "controllability ranks", ok,
                  f"best-fit={r3} single-heave={r1} synthetic={r6}")


def test_criterion_06_roll_stability_dichotomy():
    """Metacentric sign decides recovery vs capsize from a 5 deg tilt."""
    tilt = math.radians(5.0)

    def roll_after(name, seconds=30.0):
        p = vehicle.load_vehicle_config(name).params
        st = vehicle.VehicleState(z=2.0, roll=tilt)
        zero = np.zeros(len(p.thrusters))
        for _ in range(int(seconds / vehicle.DT)):
            st = vehicle.step_dynamics(st, zero, p)
        return math.degrees(st.roll)

    stable = roll_after("cfg3")
    capsized = roll_after("cfg2")
    ok = abs(stable) <= 0.5 and abs(capsized) >= 90.0
    assert report(6, "roll stability dichotomy", ok,
                  f"low-CG ends at {stable:+.2f} deg, "
                  f"high-CG ends at {capsized:+.1f} deg")


def test_criterion_07_depth_step_response():
    """Half-meter step: fast reach, no big overshoot, tight hold."""
    cfg = vehicle.load_vehicle_config("cfg3")
    p, g = cfg.params, cfg.gains
    st = vehicle.VehicleState()
    ts, zs = [], []
    for _ in range(int(60.0 / vehicle.DT)):
        st = vehicle.step_dynamics(st, vehicle.pd_depth_control(st, 0.5, g, p), p)
        ts.append(st.t)
        zs.append(st.z)
    ts = np.array(ts)
    zs = np.array(zs)
    reached = ts[zs >= 0.47]
    reach_t = float(reached[0]) if reached.size else float("inf")
    overshoot = (zs.max() - 0.5) / 0.5
    held = bool((np.abs(zs[ts >= 15.0] - 0.5) <= 0.03).all())
    ok = reach_t <= 6.0 and overshoot <= 0.20 and held
    assert report(7, "depth step response", ok,
                  f"reach={reach_t:.2f}s overshoot={overshoot * 100:.1f}% "
                  f"held-3cm-from-15s={held}")


def test_criterion_08_geometry_guarantees():
    """Closure, exact endpoints, full raster coverage."""
    table = codec.load_table()

    def plan_for(pattern, values):
        ptype = codec.PatternType[pattern.upper()]
        cmd = codec.MissionCommand.from_physical(ptype, values, table)
        return patterns.generate_waypoints(cmd, patterns.Pose(1.0, -2.0, 0.4),
                                           table)

    closure_err = 0.0
    for pattern, values in [
        ("square", {"cruise_speed": 0.5, "target_depth": 1.0,
                    "side_span": 8.0, "direction": 1}),
        ("circle", {"cruise_speed": 0.5, "target_depth": 1.0,
                    "radius": 5.0, "direction": 0}),
        ("box_orbit", {"cruise_speed": 0.5, "target_depth": 1.0,
                       "radius": 4.0, "direction": 1, "laps": 2.0}),
    ]:
        plan = plan_for(pattern, values)
        assert plan.closed
        walk = list(plan.waypoints) + [plan.waypoints[0]]
        end = walk[-1]
        closure_err = max(closure_err,
                          math.hypot(end.x - walk[0].x, end.y - walk[0].y))

    helix = plan_for("helix", {"cruise_speed": 0.4, "start_depth": 1.5,
                               "end_depth": 7.5, "radius": 3.0,
                               "turns": 2.0, "direction": 1})
    helix_exact = (helix.waypoints[0].depth == 1.5
                   and helix.waypoints[-1].depth == 7.5)

    # default 1 m row pitch: no point of the swath sits further than half
    # a pitch from a track line, measured across the grid axis
    mower = patterns.generate_waypoints(
        codec.MissionCommand.from_physical(
            codec.PatternType.LAWNMOWER,
            {"cruise_speed": 1.0, "target_depth": 1.0,
             "grid_width": 20.0, "grid_height": 10.0, "laps": 1.0},
            table),
        patterns.Pose(), table)
    rows = sorted({round(w.y, 6) for w in mower.waypoints})
    probe = np.linspace(0.0, 10.0, 401)
    coverage = max(min(abs(y - r) for r in rows) for y in probe)

    ok = closure_err <= 1e-9 and helix_exact and coverage <= 0.5 + 1e-9
    assert report(8, "geometry guarantees", ok,
                  f"closure={closure_err:.2e}m helix-exact={helix_exact} "
                  f"raster-gap={coverage:.3f}m")


def test_criterion_09_inflight_retask_with_errors():
    """A corrupted mid-mission packet repairs, re-tasks within 2 ticks."""
    schedule = [
        {"t": 0.5, "pattern": "square",
         "params": {"cruise_speed": 0.5, "target_depth": 0.5,
                    "side_span": 10.0, "direction": 1}},
        {"t": 30.0, "pattern": "circle",
         "params": {"cruise_speed": 0.5, "target_depth": 0.5,
                    "radius": 5.0, "direction": 1},
         "flip_bits": [10, 55]},
    ]
    rep = executor.run_scripted_mission(schedule, duration=50.0)
    d = rep.dispositions[1]
    corrected = (d["disposition"] == "corrected"
                 and sorted(d["corrected_positions"]) == [10, 55])

    rows = [r.split(",") for r in rep.trajectory_csv.strip().split("\n")[1:]]
    by_t = {float(r[0]): r for r in rows}
    switched = int(by_t[30.01][7]) == 2      # within two ticks of the event
    yaw_sweep = math.degrees(float(by_t[50.0][5]) - float(by_t[30.01][5]))
    turned = abs(yaw_sweep) >= 90.0
    ok = corrected and switched and turned
    assert report(9, "in-flight re-task under errors", ok,
                  f"disposition={d['disposition']} fixed={d['corrected_positions']} "
                  f"switch@30.01={switched} yaw-sweep={yaw_sweep:.0f}deg")


def test_criterion_10_reproducibility():
    """Same seed, same bytes: missions and sweeps replay identically."""
    schedule = [
        {"t": 0.5, "pattern": "lawnmower",
         "params": {"cruise_speed": 1.0, "target_depth": 1.0,
                    "grid_width": 12.0, "grid_height": 6.0, "laps": 1.0}},
        {"t": 15.0, "pattern": "hover",
         "params": {"duration": 60.0, "target_depth": 2.0, "heading": 90.0}},
    ]
    m1 = executor.run_scripted_mission(schedule, duration=30.0, seed=21, ber=0.01)
    m2 = executor.run_scripted_mission(schedule, duration=30.0, seed=21, ber=0.01)
    mission_same = (m1.trajectory_csv == m2.trajectory_csv
                    and m1.dispositions == m2.dispositions)

    s1 = channel.run_sweep(t_values=(1, 2), ber_values=(0.01, 0.05),
                           trials=500, seed=13)
    s2 = channel.run_sweep(t_values=(1, 2), ber_values=(0.01, 0.05),
                           trials=500, seed=13)
    sweep_same = (s1.to_table_text() == s2.to_table_text()
                  and s1.to_summary_json() == s2.to_summary_json())
    ok = mission_same and sweep_same
    assert report(10, "byte-identical replay", ok,
                  f"mission={mission_same} sweep={sweep_same}")
