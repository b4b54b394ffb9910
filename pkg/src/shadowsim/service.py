"""Streaming session service: one WebSocket connection drives one simulation.

A client opens a session by sending ``init`` with an inline scenario or a
named benchmark preset. The server then streams ``tick`` messages at the
scenario's tick rate and interleaves ``metrics`` snapshots once a second.
``command`` and ``mode`` messages are queued and applied at the next tick
boundary, never mid-tick. Malformed messages get an ``error`` reply and
the session survives; a second ``init`` is an error; disconnecting
discards the session.
"""

from __future__ import annotations

import asyncio
import math
import os
import secrets

from websockets.asyncio.server import serve as ws_serve
from websockets.exceptions import ConnectionClosed

from .benchmarks import load_benchmark
from .errors import ProtocolError, ScenarioError, ShadowSimError
from .geometry import WorldPolar
from .protocol import (
    MSG_COMMAND,
    MSG_ERROR,
    MSG_INIT,
    MSG_METRICS,
    MSG_MODE,
    MSG_TICK,
    make_message,
    metrics_payload,
    parse_message,
    record_to_dict,
)
from .scenario import Scenario, scenario_from_dict
from .sim import Simulation, compute_metrics

DEFAULT_BIND = "127.0.0.1:8765"
BIND_ENV_VAR = "SHADOWSIM_BIND"
METRICS_INTERVAL_S = 1.0


def parse_bind(bind: str) -> tuple[str, int]:
    host, sep, port = bind.rpartition(":")
    if not sep or not port.isdigit():
        raise ScenarioError(f"bind address must be host:port, got {bind!r}")
    return host, int(port)


class _Session:
    """Server-side state for one connection."""

    def __init__(self, ws, tick_rate_override: float | None):
        self.ws = ws
        self.tick_rate_override = tick_rate_override
        self.session_id = secrets.token_hex(6)
        self.seq = 0
        self.sim: Simulation | None = None
        self.scenario: Scenario | None = None
        self.records: list = []

    async def send(self, msg_type: str, payload: dict | None = None) -> None:
        await self.ws.send(make_message(msg_type, self.session_id, self.seq, payload))
        self.seq += 1

    async def send_error(self, code: str, detail: str) -> None:
        await self.send(MSG_ERROR, {"code": code, "detail": detail})

    def apply_message(self, doc: dict) -> None:
        """Apply a client message at a tick boundary. Raises ProtocolError to reject."""
        msg_type = doc["type"]
        if msg_type == MSG_INIT:
            raise ProtocolError("session is already initialized")
        if self.sim is None:
            raise ProtocolError("session is not initialized")
        if msg_type == MSG_COMMAND:
            self._apply_command(doc)
        elif msg_type == MSG_MODE:
            mode = doc.get("mode")
            if mode not in ("direct", "pid"):
                raise ProtocolError(f"mode must be direct or pid, got {mode!r}")
            self.sim.set_mode(mode)
        else:
            raise ProtocolError(f"unexpected message type {msg_type!r}")

    def _apply_command(self, doc: dict) -> None:
        if "waypoint" in doc:
            wp = doc["waypoint"]
            if not isinstance(wp, dict) or "r_w" not in wp or "beta_w_deg" not in wp:
                raise ProtocolError("waypoint must carry r_w and beta_w_deg")
            try:
                point = WorldPolar(float(wp["r_w"]), math.radians(float(wp["beta_w_deg"])))
            except (TypeError, ValueError) as exc:
                raise ProtocolError(f"bad waypoint: {exc}") from exc
            speed = doc.get("speed")
            self.sim.set_waypoint(point, float(speed) if speed is not None else None)
            return
        heading = doc.get("heading_deg")
        speed = doc.get("speed")
        if heading is None and speed is None:
            raise ProtocolError("command must carry heading_deg, speed, or waypoint")
        try:
            self.sim.set_command(
                heading=math.radians(float(heading)) if heading is not None else None,
                speed=float(speed) if speed is not None else None,
            )
        except (TypeError, ValueError, ShadowSimError) as exc:
            raise ProtocolError(f"bad command: {exc}") from exc

    def initialize(self, doc: dict) -> None:
        if "preset" in doc:
            scenario = load_benchmark(str(doc["preset"]))
        elif "scenario" in doc:
            scenario = scenario_from_dict(doc["scenario"])
        else:
            raise ProtocolError("init must carry a scenario object or a preset name")
        if self.tick_rate_override is not None:
            scenario.tick_rate = self.tick_rate_override
        self.sim = Simulation(scenario)
        self.scenario = scenario


async def handle_connection(ws, tick_rate_override: float | None = None) -> None:
    session = _Session(ws, tick_rate_override)
    inbox: asyncio.Queue = asyncio.Queue()

    async def reader() -> None:
        try:
            async for raw in ws:
                await inbox.put(raw)
        except ConnectionClosed:
            pass
        finally:
            await inbox.put(None)

    reader_task = asyncio.create_task(reader())
    try:
        # Phase 1: wait for a valid init; malformed messages keep the session alive.
        while session.sim is None:
            raw = await inbox.get()
            if raw is None:
                return
            try:
                doc = parse_message(raw)
                if doc["type"] != MSG_INIT:
                    raise ProtocolError(f"expected init, got {doc['type']!r}")
                session.initialize(doc)
            except (ProtocolError, ScenarioError, ShadowSimError) as exc:
                await session.send_error("bad-init", str(exc))

        scenario = session.scenario
        sim = session.sim
        dt = 1.0 / scenario.tick_rate
        max_ticks = scenario.tick_count if scenario.duration_s > 0.0 else None
        metrics_every = max(round(METRICS_INTERVAL_S * scenario.tick_rate), 1)
        loop = asyncio.get_running_loop()
        next_deadline = loop.time()

        while max_ticks is None or sim.k < max_ticks:
            # Apply everything that arrived strictly between ticks.
            while True:
                try:
                    raw = inbox.get_nowait()
                except asyncio.QueueEmpty:
                    break
                if raw is None:
                    return
                try:
                    session.apply_message(parse_message(raw))
                except (ProtocolError, ShadowSimError) as exc:
                    await session.send_error("bad-message", str(exc))

            record = sim.step()
            session.records.append(record)
            await session.send(MSG_TICK, {"record": record_to_dict(record, scenario.frame)})
            if sim.k % metrics_every == 0:
                metrics = compute_metrics(session.records, sim.initial_pose, scenario.frame)
                await session.send(MSG_METRICS, metrics_payload(metrics))

            next_deadline += dt
            delay = next_deadline - loop.time()
            if delay > 0:
                await asyncio.sleep(delay)

        metrics = compute_metrics(session.records, sim.initial_pose, scenario.frame)
        await session.send(MSG_METRICS, metrics_payload(metrics))
    except ConnectionClosed:
        pass
    except ShadowSimError as exc:
        try:
            await session.send_error("runtime", str(exc))
        except ConnectionClosed:
            pass
    finally:
        reader_task.cancel()


async def serve_async(bind: str | None = None, tick_rate: float | None = None):
    """Start the WebSocket server; returns the server object (use as async context)."""
    if tick_rate is not None and tick_rate <= 0.0:
        raise ScenarioError("tick-rate override must be > 0")
    bind = bind or os.environ.get(BIND_ENV_VAR) or DEFAULT_BIND
    host, port = parse_bind(bind)

    async def handler(ws):
        await handle_connection(ws, tick_rate_override=tick_rate)

    return await ws_serve(handler, host, port)


def run_server(bind: str | None = None, tick_rate: float | None = None) -> None:
    """Blocking entry point for the CLI."""

    async def main() -> None:
        server = await serve_async(bind, tick_rate)
        addrs = ", ".join(str(s.getsockname()) for s in server.sockets)
        print(f"shadowsim service listening on {addrs}", flush=True)
        await server.serve_forever()

    try:
        asyncio.run(main())
    except KeyboardInterrupt:
        pass
