"""Wire format: versioned, newline-delimited JSON messages and record serialization.

Every session message carries the protocol version ``v``, a ``session`` id,
a per-session monotone ``seq``, and a ``type`` discriminator. Tick records
round-trip exactly: ``record_from_dict(record_to_dict(r)) == r``.
"""

from __future__ import annotations

import json

from .errors import ProtocolError
from .geometry import (
    FrameConfig,
    GlobalCartesian,
    VirtualPolar,
    WorldPolar,
    virtual_polar_to_global,
    world_polar_to_global,
)
from .heightfield import SurfacePoint
from .light import LightPose
from .sim import Metrics, TickRecord

PROTOCOL_VERSION = 1

MSG_INIT = "init"
MSG_COMMAND = "command"
MSG_MODE = "mode"
MSG_TICK = "tick"
MSG_METRICS = "metrics"
MSG_ERROR = "error"

CLIENT_TYPES = (MSG_INIT, MSG_COMMAND, MSG_MODE)
SERVER_TYPES = (MSG_TICK, MSG_METRICS, MSG_ERROR)


def _surface_point_to_dict(p: SurfacePoint) -> dict:
    return {"p": [p.position.x, p.position.y, p.position.z], "kind": p.surface_kind}


def _surface_point_from_dict(d: dict) -> SurfacePoint:
    x, y, z = d["p"]
    return SurfacePoint(GlobalCartesian(float(x), float(y), float(z)), str(d["kind"]))


def record_to_dict(rec: TickRecord, frame: FrameConfig | None = None) -> dict:
    """Serialize a record; with ``frame`` given, include the global positions
    of the robot and setpoint so clients can render with a single affine
    transform and no coordinate math of their own."""
    doc = {
        "k": rec.k,
        "robot": {"r_w": rec.robot.r_w, "beta_w": rec.robot.beta_w},
        "setpoint": {"r_v": rec.setpoint.r_v, "beta_v": rec.setpoint.beta_v},
        "error": list(rec.error),
        "u": list(rec.u),
        "light_pose": {"tilt": rec.light_pose.tilt_alpha, "pan": rec.light_pose.pan_gamma},
        "tip": _surface_point_to_dict(rec.tip),
        "footprint": [_surface_point_to_dict(p) for p in rec.footprint],
        "saturated": list(rec.saturated),
        "clamped": rec.clamped,
        "assumption_violated": rec.assumption_violated,
    }
    if frame is not None:
        rg = world_polar_to_global(rec.robot, frame)
        sg = virtual_polar_to_global(rec.setpoint, frame)
        doc["robot_xy"] = [rg.x, rg.y]
        doc["setpoint_xy"] = [sg.x, sg.y]
    return doc


def record_from_dict(d: dict) -> TickRecord:
    try:
        return TickRecord(
            k=int(d["k"]),
            robot=WorldPolar(float(d["robot"]["r_w"]), float(d["robot"]["beta_w"])),
            setpoint=VirtualPolar(float(d["setpoint"]["r_v"]), float(d["setpoint"]["beta_v"])),
            error=(float(d["error"][0]), float(d["error"][1])),
            u=(float(d["u"][0]), float(d["u"][1])),
            light_pose=LightPose(float(d["light_pose"]["tilt"]), float(d["light_pose"]["pan"])),
            tip=_surface_point_from_dict(d["tip"]),
            footprint=tuple(_surface_point_from_dict(p) for p in d["footprint"]),
            saturated=(bool(d["saturated"][0]), bool(d["saturated"][1])),
            clamped=bool(d["clamped"]),
            assumption_violated=bool(d["assumption_violated"]),
        )
    except (KeyError, IndexError, TypeError, ValueError) as exc:
        raise ProtocolError(f"malformed tick record: {exc}") from exc


def record_to_line(rec: TickRecord, frame: FrameConfig | None = None) -> str:
    """One tick record as a single JSON line (stable key order)."""
    return json.dumps(record_to_dict(rec, frame), sort_keys=True, allow_nan=False)


def record_from_line(line: str) -> TickRecord:
    try:
        doc = json.loads(line)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"malformed record line: {exc.msg}") from exc
    return record_from_dict(doc)


def make_message(msg_type: str, session: str, seq: int, payload: dict | None = None) -> str:
    """Envelope a message for the wire."""
    doc = {"v": PROTOCOL_VERSION, "type": msg_type, "session": session, "seq": seq}
    if payload:
        doc.update(payload)
    return json.dumps(doc, sort_keys=True, allow_nan=False)


def parse_message(raw: str | bytes) -> dict:
    """Parse and structurally validate an incoming message envelope."""
    if isinstance(raw, bytes):
        raw = raw.decode("utf-8", errors="replace")
    try:
        doc = json.loads(raw)
    except json.JSONDecodeError as exc:
        raise ProtocolError(f"invalid JSON: {exc.msg}") from exc
    if not isinstance(doc, dict):
        raise ProtocolError("message must be a JSON object")
    if doc.get("v") != PROTOCOL_VERSION:
        raise ProtocolError(f"unsupported protocol version {doc.get('v')!r}")
    msg_type = doc.get("type")
    if not isinstance(msg_type, str):
        raise ProtocolError("message is missing its type")
    return doc


def metrics_payload(metrics: Metrics) -> dict:
    return {"metrics": metrics.to_dict()}
