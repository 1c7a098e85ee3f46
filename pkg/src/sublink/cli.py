"""Command line front end.

Five subcommands: encode a mission command into a packet, decode a
packet dump back into a command, run the noisy-channel sweep, replay a
scripted mission against the simulated vehicle, and serve the operator
gateway.  Everything here is argument plumbing; the work happens in the
library modules.
"""
from __future__ import annotations

import argparse
import json
import sys
from pathlib import Path

from . import bch, channel, codec, executor, framing, service
from .bits import bits_to_hex


def _parse_set(pairs: list[str]) -> dict[str, float]:
    out = {}
    for pair in pairs:
        role, eq, value = pair.partition("=")
        if not eq:
            raise SystemExit(f"--set wants role=value, got {pair!r}")
        try:
            out[role.strip()] = float(value)
        except ValueError:
            raise SystemExit(f"--set {role}: {value!r} is not a number")
    return out


def cmd_encode(args) -> int:
    table = codec.load_table(args.table)
    try:
        ptype = codec.PatternType[args.pattern.upper()]
    except KeyError:
        print(f"unknown pattern {args.pattern!r}; choose from "
              f"{', '.join(p.name.lower() for p in codec.PatternType)}",
              file=sys.stderr)
        return 2
    try:
        cmd = codec.MissionCommand.from_physical(
            ptype, _parse_set(args.set), table)
        payload = codec.encode_command(cmd)
        message = codec.payload_to_message(payload)
        code = bch.build_code(t=2)
        packet = framing.frame(bch.encode(code, message))
    except codec.CommandCodecError as exc:
        print(f"encode failed: {exc}", file=sys.stderr)
        return 2

    print(f"pattern      {ptype.name.lower()} (id {int(ptype)})")
    roles = codec.PARAM_ROLES[ptype]
    for role, raw in zip(roles, cmd.raw_params):
        if role is None:
            continue
        spec = table.spec(role)
        value = codec.dequantize(table, role, raw)
        print(f"{role:<12} {value:g} {spec.unit} (raw {raw})")
    print(f"payload      {bits_to_hex(payload)}")
    print(f"packet       {framing.packet_to_hex(packet)}")
    ms = framing.transmit_time_ms()
    print(f"airtime      {ms:.2f} ms at {framing.LINK_RATE_BPS} b/s "
          f"(turnaround budget {framing.LATENCY_BUDGET_MS:.2f} ms)")
    return 0


def cmd_decode(args) -> int:
    table = codec.load_table(args.table)
    try:
        packet = framing.hex_to_packet(args.hex.strip().lower())
    except ValueError as exc:
        print(f"bad packet dump: {exc}", file=sys.stderr)
        return 2
    candidates = framing.deframe(packet)
    if not candidates:
        print("frame_fail: no sync candidate")
        return 1
    code = bch.build_code(t=2)
    for offset, word in candidates:
        result = bch.decode(code, word)
        if result.status == bch.FAILURE:
            print(f"fec_fail at offset {offset}: decoder refused codeword")
            continue
        print(f"fec          {result.status}"
              + (f" (fixed bits {sorted(result.corrected_positions)})"
                 if result.corrected_positions else ""))
        try:
            cmd = codec.decode_payload(codec.message_to_payload(result.message))
        except codec.CommandCodecError as exc:
            print(f"malformed: {exc}")
            return 1
        print(f"pattern      {cmd.pattern.name.lower()} (id {int(cmd.pattern)})")
        for role, value in cmd.physical(table).items():
            print(f"{role:<12} {value:g} {table.spec(role).unit}")
        return 0
    return 1


def cmd_sweep(args) -> int:
    result = channel.run_sweep(
        t_values=tuple(args.t) if args.t else channel.DEFAULT_T_VALUES,
        ber_values=tuple(args.ber) if args.ber else channel.DEFAULT_BER_GRID,
        trials=args.trials, seed=args.seed, noise_scope=args.noise_scope)
    print(result.to_table_text())
    if args.json_out:
        Path(args.json_out).write_text(result.to_summary_json())
        print(f"summary written to {args.json_out}")
    return 0


def cmd_simulate(args) -> int:
    schedule = json.loads(Path(args.schedule).read_text())
    if not isinstance(schedule, list):
        print("schedule file must hold a JSON array of events", file=sys.stderr)
        return 2
    report = executor.run_scripted_mission(
        schedule, duration=args.duration, vehicle_name=args.vehicle,
        seed=args.seed, ber=args.ber)
    out = Path(args.out)
    out.mkdir(parents=True, exist_ok=True)
    (out / "trajectory.csv").write_text(report.trajectory_csv)
    (out / "commands.json").write_text(
        json.dumps(report.command_log, indent=2, sort_keys=True) + "\n")
    (out / "dispositions.json").write_text(
        json.dumps(report.dispositions, indent=2, sort_keys=True) + "\n")
    st = report.final_state
    print(f"{len(report.dispositions)} uplink events, "
          f"{len(report.plan_ids)} plans accepted")
    print(f"final state: t={st.t:.2f} x={st.x:.2f} y={st.y:.2f} "
          f"z={st.z:.2f} yaw={st.yaw:.3f}")
    print(f"wrote {out / 'trajectory.csv'}")
    return 0


def cmd_serve(args) -> int:
    import uvicorn
    app = service.create_app(
        service.SessionConfig(vehicle=args.vehicle, seed=args.seed,
                              ber=args.ber,
                              realtime_factor=args.realtime_factor),
        static_dir=args.static)
    uvicorn.run(app, host=args.host, port=args.port, log_level="warning")
    return 0


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="sublink",
        description="acoustic-style mission uplink tools and vehicle sim")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("encode", help="mission command to packet hex")
    p.add_argument("pattern", help="pattern name, e.g. circle")
    p.add_argument("--set", action="append", default=[], metavar="ROLE=VALUE",
                   help="physical parameter, repeatable")
    p.add_argument("--table", default=None, help="quantization table path")
    p.set_defaults(func=cmd_encode)

    p = sub.add_parser("decode", help="packet hex to mission command")
    p.add_argument("hex", help="25 hex chars, one 100-bit packet")
    p.add_argument("--table", default=None)
    p.set_defaults(func=cmd_decode)

    p = sub.add_parser("sweep", help="Monte Carlo link sweep")
    p.add_argument("--trials", type=int, default=channel.DEFAULT_TRIALS)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--t", type=int, action="append",
                   help="code strength, repeatable")
    p.add_argument("--ber", type=float, action="append",
                   help="bit error rate grid point, repeatable")
    p.add_argument("--noise-scope", choices=("packet", "codeword"),
                   default="packet")
    p.add_argument("--json-out", default=None, metavar="PATH")
    p.set_defaults(func=cmd_sweep)

    p = sub.add_parser("simulate", help="run a scripted mission")
    p.add_argument("--schedule", required=True, metavar="FILE",
                   help="JSON array of uplink events")
    p.add_argument("--duration", type=float, required=True, metavar="SECONDS")
    p.add_argument("--vehicle", default="cfg3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ber", type=float, default=0.0)
    p.add_argument("--out", default="mission_out", metavar="DIR")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("serve", help="operator websocket gateway")
    p.add_argument("--host", default="127.0.0.1")
    p.add_argument("--port", type=int, default=8765)
    p.add_argument("--vehicle", default="cfg3")
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--ber", type=float, default=0.0)
    p.add_argument("--realtime-factor", type=float, default=1.0,
                   help="sim seconds per wall second; 0 free-runs")
    p.add_argument("--static", default=None, metavar="DIR",
                   help="also serve this directory at /")
    p.set_defaults(func=cmd_serve)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    return args.func(args)


if __name__ == "__main__":
    sys.exit(main())
