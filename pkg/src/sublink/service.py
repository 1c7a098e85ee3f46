"""Operator gateway: one simulated vehicle behind a WebSocket.

The service hosts a single session.  Clients connect to /ws, get a hello
frame describing the command vocabulary (schema version, pattern table,
quantization roles), then receive telemetry at a fixed sim-time cadence
plus event frames (dispositions, plan changes, token/status updates).

Commands are JSON text frames.  Exactly one client may hold the command
token at a time; acquiring it is first-come and releasing it is
explicit, so a second operator can watch but not steer.  Every
send_command traverses the real uplink path: encode, frame, seeded
channel noise at the session BER, sync scan, FEC decode.  The noise seed
for transmission i derives from (master seed, i), and operator messages
are logged with their sim timestamps, so a session is reproducible from
its config plus the message log.

The simulation advances inside the server event loop, not a thread:
paused sessions stop consuming sim time but keep answering messages.
A realtime factor of zero free-runs as fast as the loop allows; any
positive factor paces sim time against the wall clock.
"""
from __future__ import annotations

import asyncio
import contextlib
import json
from dataclasses import dataclass

from fastapi import FastAPI, WebSocket, WebSocketDisconnect

from . import channel, codec, executor, vehicle

SCHEMA_VERSION = 1
TELEMETRY_EVERY_TICKS = 10          # one frame per 0.1 s of sim time
_PAUSED_POLL_S = 0.02


@dataclass(frozen=True)
class SessionConfig:
    vehicle: str = "cfg3"
    seed: int = 0
    ber: float = 0.0
    realtime_factor: float = 0.0    # 0 = run as fast as possible


class SimSession:
    """Owns the executor, the clients and the command token."""

    def __init__(self, config: SessionConfig):
        self.config = config
        self.executor = executor.MissionExecutor(vehicle_name=config.vehicle)
        self.ber = config.ber
        self.running = True
        self.master_seed = config.seed
        self.tx_counter = 0
        self.token_owner: int | None = None
        self.clients: dict[int, asyncio.Queue] = {}
        self.message_log: list[dict] = []
        self._next_client_id = 1
        self._last_plan_id = 0

    # -- client bookkeeping --------------------------------------------

    def attach(self) -> tuple[int, asyncio.Queue]:
        cid = self._next_client_id
        self._next_client_id += 1
        q: asyncio.Queue = asyncio.Queue(maxsize=1000)
        self.clients[cid] = q
        return cid, q

    def detach(self, cid: int) -> None:
        self.clients.pop(cid, None)
        if self.token_owner == cid:
            self.token_owner = None
            self.broadcast(self._token_frame())

    def broadcast(self, frame: dict) -> None:
        for q in self.clients.values():
            _offer(q, frame)

    def send_to(self, cid: int, frame: dict) -> None:
        q = self.clients.get(cid)
        if q is not None:
            _offer(q, frame)

    # -- frames ----------------------------------------------------------

    def hello_frame(self, cid: int) -> dict:
        pats = {
            p.name.lower(): {
                "id": int(p),
                "params": [r for r in codec.PARAM_ROLES[p]],
            }
            for p in codec.PatternType
        }
        table = self.executor.table
        quant = {
            role: {
                "scale": spec.scale, "offset": spec.offset,
                "unit": spec.unit, "min": spec.offset,
                "max": spec.offset + 255 * spec.scale,
            }
            for role, spec in sorted(table.roles.items())
        }
        return {
            "type": "hello", "schema": SCHEMA_VERSION, "client_id": cid,
            "vehicle": self.config.vehicle, "ber": self.ber,
            "running": self.running,
            "token_owner": self.token_owner,
            "patterns": pats,
            "quantization": {"version": table.version, "roles": quant},
        }

    def telemetry_frame(self) -> dict:
        st = self.executor.state
        return {
            "type": "telemetry",
            "t": round(st.t, 2),
            "x": round(st.x, 6), "y": round(st.y, 6), "z": round(st.z, 6),
            "yaw": round(st.yaw, 6), "roll": round(st.roll, 6),
            "u": round(st.u, 6), "w": round(st.w, 6),
            "phase": self.executor.phase,
            "plan_id": self.executor.plan_id,
            "wp_index": self.executor.wp_index,
        }

    def plan_frame(self) -> dict:
        plan = self.executor.plan
        return {
            "type": "plan",
            "plan_id": self.executor.plan_id,
            "pattern": plan.pattern.name.lower() if plan else None,
            "closed": bool(plan.closed) if plan else False,
            "est_duration": round(plan.est_duration, 3) if plan else 0.0,
            "waypoints": [
                [round(w.x, 4), round(w.y, 4), round(w.depth, 4)]
                for w in (plan.waypoints if plan else ())
            ],
        }

    def status_frame(self) -> dict:
        return {
            "type": "status", "schema": SCHEMA_VERSION,
            "running": self.running, "ber": self.ber,
            "vehicle": self.config.vehicle, "t": round(self.executor.state.t, 2),
        }

    def _token_frame(self) -> dict:
        return {"type": "token", "owner": self.token_owner}

    # -- operator messages -------------------------------------------------

    def handle(self, cid: int, msg: dict) -> None:
        self.message_log.append(
            {"t": round(self.executor.state.t, 6), "client": cid, "msg": msg})
        kind = msg.get("type")
        if kind == "send_command":
            self._send_command(cid, msg)
        elif kind == "set_ber":
            try:
                ber = float(msg.get("ber"))
                channel.ChannelModel(ber=ber, seed=0)   # range check
            except (TypeError, ValueError) as exc:
                self.send_to(cid, _error(f"bad ber: {exc}"))
                return
            self.ber = ber
            self.broadcast(self.status_frame())
        elif kind == "pause":
            self.running = False
            self.broadcast(self.status_frame())
        elif kind == "resume":
            self.running = True
            self.broadcast(self.status_frame())
        elif kind == "reset":
            seed = msg.get("seed", self.master_seed)
            try:
                self.master_seed = int(seed)
            except (TypeError, ValueError):
                self.send_to(cid, _error(f"bad seed: {seed!r}"))
                return
            self.executor = executor.MissionExecutor(
                vehicle_name=self.config.vehicle)
            self.tx_counter = 0
            self._last_plan_id = 0
            self.broadcast({"type": "reset", "seed": self.master_seed})
            self.broadcast(self.status_frame())
        elif kind == "acquire_token":
            if self.token_owner is None:
                self.token_owner = cid
                self.broadcast(self._token_frame())
            elif self.token_owner == cid:
                self.send_to(cid, self._token_frame())
            else:
                self.send_to(cid, _error("token held by another client"))
        elif kind == "release_token":
            if self.token_owner == cid:
                self.token_owner = None
                self.broadcast(self._token_frame())
            else:
                self.send_to(cid, _error("token not yours to release"))
        else:
            self.send_to(cid, _error(f"unknown message type: {kind!r}"))

    def _send_command(self, cid: int, msg: dict) -> None:
        if self.token_owner != cid:
            self.send_to(cid, _error("command token required"))
            return
        try:
            packet = executor.build_packet(
                str(msg["pattern"]), dict(msg["params"]),
                self.executor.table, self.executor.code)
        except (KeyError, TypeError) as exc:
            self.send_to(cid, _error(f"bad command frame: {exc}"))
            return
        except codec.CommandCodecError as exc:
            self.send_to(cid, _error(str(exc)))
            return
        if self.ber > 0.0:
            noisy = channel.ChannelModel(
                ber=self.ber,
                seed=channel.derive_seed(self.master_seed, self.tx_counter))
            packet = noisy.apply_noise(packet)
        self.tx_counter += 1
        d = self.executor.submit_packet(packet)
        self.broadcast({"type": "disposition", **d.as_dict()})
        if self.executor.plan_id != self._last_plan_id:
            self._last_plan_id = self.executor.plan_id
            self.broadcast(self.plan_frame())

    # -- simulation loop -----------------------------------------------

    async def run(self) -> None:
        factor = self.config.realtime_factor
        while True:
            if not self.running:
                await asyncio.sleep(_PAUSED_POLL_S)
                continue
            for _ in range(TELEMETRY_EVERY_TICKS):
                self.executor.tick()
            self.broadcast(self.telemetry_frame())
            if self.executor.plan_id != self._last_plan_id:
                self._last_plan_id = self.executor.plan_id
                self.broadcast(self.plan_frame())
            if factor > 0.0:
                await asyncio.sleep(
                    TELEMETRY_EVERY_TICKS * vehicle.DT / factor)
            else:
                await asyncio.sleep(0)


def _error(message: str) -> dict:
    return {"type": "error", "message": message}


def _offer(q: asyncio.Queue, frame: dict) -> None:
    """Queue a frame, evicting the oldest one when the client lags.

    A stalled reader loses stale frames instead of stalling the sim or
    growing memory without bound.
    """
    while True:
        try:
            q.put_nowait(frame)
            return
        except asyncio.QueueFull:
            try:
                q.get_nowait()
            except asyncio.QueueEmpty:
                return


def create_app(config: SessionConfig | None = None,
               static_dir: str | None = None) -> FastAPI:
    config = config or SessionConfig()
    session = SimSession(config)

    @contextlib.asynccontextmanager
    async def lifespan(_app):
        task = asyncio.create_task(session.run())
        yield
        task.cancel()
        with contextlib.suppress(asyncio.CancelledError):
            await task

    app = FastAPI(lifespan=lifespan)
    app.state.session = session

    @app.get("/healthz")
    async def healthz():
        return {"ok": True, "schema": SCHEMA_VERSION}

    @app.websocket("/ws")
    async def ws_endpoint(websocket: WebSocket):
        await websocket.accept()
        cid, queue = session.attach()
        await websocket.send_json(session.hello_frame(cid))
        if session.executor.plan is not None:
            await websocket.send_json(session.plan_frame())

        async def writer():
            while True:
                frame = await queue.get()
                await websocket.send_json(frame)

        writer_task = asyncio.create_task(writer())
        try:
            while True:
                text = await websocket.receive_text()
                try:
                    msg = json.loads(text)
                    if not isinstance(msg, dict):
                        raise ValueError("frame must be a JSON object")
                except ValueError as exc:
                    session.send_to(cid, _error(f"bad frame: {exc}"))
                    continue
                session.handle(cid, msg)
        except WebSocketDisconnect:
            pass
        finally:
            writer_task.cancel()
            with contextlib.suppress(asyncio.CancelledError):
                await writer_task
            session.detach(cid)

    if static_dir is not None:
        from fastapi.staticfiles import StaticFiles
        app.mount("/", StaticFiles(directory=static_dir, html=True),
                  name="static")

    return app
