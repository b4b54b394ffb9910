"""Scenario documents: what a closed-loop run needs, with a validating loader.

Scenario files are UTF-8 JSON. All angle fields are given in degrees for
readability and converted to radians on load. An absent ``environment``
resolves to an auto-sized flat field that covers every reachable shadow.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass, field, replace
from pathlib import Path

from .controller import ControllerLimits, PidGains, PlantParams, PLANT_MODE_GEOMETRIC, PLANT_MODE_MODEL
from .errors import DomainError, ScenarioError
from .geometry import FrameConfig, GlobalCartesian, WorldPolar, check_world_polar, wrap_two_pi
from .heightfield import HeightField, flat_field, load_heightfield
from .light import LightPose, RobotGeometry

CONTROL_MODE_DIRECT = "direct"
CONTROL_MODE_PID = "pid"

_TOP_KEYS = {
    "frame", "robot", "environment", "tick_rate", "duration_s", "start",
    "waypoints", "speed", "control_mode", "plant_mode", "gains", "plant",
    "limits", "initial_light_pose", "rms_error_bound", "seed",
}
_FRAME_KEYS = {"l_w", "theta_w_deg", "l_v", "theta_v_deg", "human_position", "human_facing_deg"}
_ROBOT_KEYS = {"height", "footprint_radius"}
_GAIN_KEYS = {"kp", "ki", "kd"}
_PLANT_KEYS = {"a", "b", "f", "g"}
_LIMIT_KEYS = {"max_tilt_step_deg", "max_pan_step_deg", "integral_limit", "tilt_min_deg", "tilt_max_deg"}
_POSE_KEYS = {"tilt_deg", "pan_deg"}
_POLAR_KEYS = {"r_w", "beta_w_deg"}


@dataclass
class Scenario:
    """One fully resolved closed-loop run."""

    frame: FrameConfig
    robot: RobotGeometry
    environment: HeightField
    start: WorldPolar
    waypoints: list[WorldPolar] = field(default_factory=list)
    speed: float = 1.0
    tick_rate: float = 30.0
    duration_s: float = 10.0
    control_mode: str = CONTROL_MODE_PID
    plant_mode: str = PLANT_MODE_GEOMETRIC
    gains: PidGains = field(default_factory=PidGains)
    plant: PlantParams = field(default_factory=PlantParams)
    limits: ControllerLimits = field(default_factory=ControllerLimits)
    initial_light_pose: LightPose | None = None
    rms_error_bound: float | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.tick_rate <= 0.0 or not math.isfinite(self.tick_rate):
            raise ScenarioError("tick_rate must be > 0")
        if self.duration_s < 0.0 or not math.isfinite(self.duration_s):
            raise ScenarioError("duration_s must be >= 0")
        if self.speed < 0.0 or not math.isfinite(self.speed):
            raise ScenarioError("speed must be >= 0")
        if self.control_mode not in (CONTROL_MODE_DIRECT, CONTROL_MODE_PID):
            raise ScenarioError(f"control_mode must be direct or pid, got {self.control_mode!r}")
        if self.plant_mode not in (PLANT_MODE_GEOMETRIC, PLANT_MODE_MODEL):
            raise ScenarioError(f"plant_mode must be geometric or model, got {self.plant_mode!r}")
        try:
            check_world_polar(self.start, self.frame)
        except DomainError as exc:
            raise ScenarioError(f"start: {exc}") from exc
        for i, wp in enumerate(self.waypoints):
            try:
                check_world_polar(wp, self.frame)
            except DomainError as exc:
                raise ScenarioError(f"waypoints[{i}]: {exc}") from exc

    def with_control_mode(self, mode: str) -> "Scenario":
        return replace(self, control_mode=mode)

    @property
    def tick_count(self) -> int:
        return round(self.duration_s * self.tick_rate)


def default_flat_environment(frame: FrameConfig, robot: RobotGeometry, limits: ControllerLimits) -> HeightField:
    """Flat field large enough for any reachable robot position and shadow tip."""
    longest_shadow = robot.height_h / math.tan(limits.tilt_min)
    span = frame.l_w + frame.l_v + longest_shadow + 2.0
    return flat_field(span, cell_size=1.0, center=frame.human_position)


def _require_keys(doc: dict, allowed: set[str], where: str) -> None:
    unknown = sorted(set(doc) - allowed)
    if unknown:
        raise ScenarioError(f"{where}: unknown keys {unknown}")


def _get_number(doc: dict, key: str, where: str, default: float | None = None) -> float:
    if key not in doc:
        if default is None:
            raise ScenarioError(f"{where}: missing required field {key!r}")
        return default
    v = doc[key]
    if not isinstance(v, (int, float)) or isinstance(v, bool) or not math.isfinite(float(v)):
        raise ScenarioError(f"{where}.{key} must be a finite number, got {v!r}")
    return float(v)


def _parse_polar(doc: object, where: str) -> WorldPolar:
    if not isinstance(doc, dict):
        raise ScenarioError(f"{where} must be an object with r_w and beta_w_deg")
    _require_keys(doc, _POLAR_KEYS, where)
    r = _get_number(doc, "r_w", where)
    beta = math.radians(_get_number(doc, "beta_w_deg", where))
    return WorldPolar(r, beta)


def _parse_frame(doc: object) -> FrameConfig:
    if not isinstance(doc, dict):
        raise ScenarioError("frame must be an object")
    _require_keys(doc, _FRAME_KEYS, "frame")
    pos = doc.get("human_position", [0.0, 0.0])
    if not (isinstance(pos, list) and len(pos) == 2):
        raise ScenarioError("frame.human_position must be [x, y]")
    try:
        return FrameConfig(
            l_w=_get_number(doc, "l_w", "frame"),
            theta_w=math.radians(_get_number(doc, "theta_w_deg", "frame", 180.0)),
            l_v=_get_number(doc, "l_v", "frame", 5.0),
            theta_v=math.radians(_get_number(doc, "theta_v_deg", "frame", 34.0)),
            human_position=GlobalCartesian(float(pos[0]), float(pos[1])),
            human_facing=math.radians(_get_number(doc, "human_facing_deg", "frame", 90.0)),
        )
    except DomainError as exc:
        raise ScenarioError(f"frame: {exc}") from exc


def _parse_gains(doc: object) -> PidGains:
    if not isinstance(doc, dict):
        raise ScenarioError("gains must be an object")
    _require_keys(doc, _GAIN_KEYS, "gains")
    defaults = PidGains()
    try:
        return PidGains(
            kp=doc.get("kp", defaults.kp),
            ki=doc.get("ki", defaults.ki),
            kd=doc.get("kd", defaults.kd),
        )
    except DomainError as exc:
        raise ScenarioError(f"gains: {exc}") from exc


def scenario_from_dict(doc: dict, base_dir: Path | None = None) -> Scenario:
    """Build a validated Scenario from a parsed document."""
    if not isinstance(doc, dict):
        raise ScenarioError("scenario document must be an object")
    _require_keys(doc, _TOP_KEYS, "scenario")
    for key in ("frame", "robot", "start"):
        if key not in doc:
            raise ScenarioError(f"scenario: missing required field {key!r}")

    frame = _parse_frame(doc["frame"])

    robot_doc = doc["robot"]
    if not isinstance(robot_doc, dict):
        raise ScenarioError("robot must be an object")
    _require_keys(robot_doc, _ROBOT_KEYS, "robot")
    try:
        robot = RobotGeometry(
            height_h=_get_number(robot_doc, "height", "robot"),
            footprint_radius=_get_number(robot_doc, "footprint_radius", "robot", 0.0),
        )
    except DomainError as exc:
        raise ScenarioError(f"robot: {exc}") from exc

    limits_doc = doc.get("limits", {})
    if not isinstance(limits_doc, dict):
        raise ScenarioError("limits must be an object")
    _require_keys(limits_doc, _LIMIT_KEYS, "limits")
    base = ControllerLimits()
    try:
        limits = ControllerLimits(
            max_tilt_step=math.radians(limits_doc["max_tilt_step_deg"])
            if "max_tilt_step_deg" in limits_doc else base.max_tilt_step,
            max_pan_step=math.radians(limits_doc["max_pan_step_deg"])
            if "max_pan_step_deg" in limits_doc else base.max_pan_step,
            integral_limit=_get_number(limits_doc, "integral_limit", "limits", base.integral_limit),
            tilt_min=math.radians(limits_doc["tilt_min_deg"])
            if "tilt_min_deg" in limits_doc else base.tilt_min,
            tilt_max=math.radians(limits_doc["tilt_max_deg"])
            if "tilt_max_deg" in limits_doc else base.tilt_max,
        )
    except DomainError as exc:
        raise ScenarioError(f"limits: {exc}") from exc

    env_ref = doc.get("environment")
    if env_ref is None:
        environment = default_flat_environment(frame, robot, limits)
    elif isinstance(env_ref, str):
        env_path = Path(env_ref)
        if not env_path.is_absolute() and base_dir is not None:
            env_path = base_dir / env_path
        environment = load_heightfield(env_path)
    else:
        raise ScenarioError("environment must be null or a path string")

    plant_doc = doc.get("plant", {})
    if not isinstance(plant_doc, dict):
        raise ScenarioError("plant must be an object")
    _require_keys(plant_doc, _PLANT_KEYS, "plant")
    try:
        plant = PlantParams(
            a=_get_number(plant_doc, "a", "plant", 1.0),
            b=_get_number(plant_doc, "b", "plant", 1.0),
            f=_get_number(plant_doc, "f", "plant", 1.0),
            g=_get_number(plant_doc, "g", "plant", 1.0),
        )
    except DomainError as exc:
        raise ScenarioError(f"plant: {exc}") from exc

    pose_doc = doc.get("initial_light_pose")
    initial_pose = None
    if pose_doc is not None:
        if not isinstance(pose_doc, dict):
            raise ScenarioError("initial_light_pose must be an object")
        _require_keys(pose_doc, _POSE_KEYS, "initial_light_pose")
        tilt = math.radians(_get_number(pose_doc, "tilt_deg", "initial_light_pose"))
        if not 0.0 < tilt < math.pi / 2.0:
            raise ScenarioError("initial_light_pose.tilt_deg must lie in (0, 90)")
        initial_pose = LightPose(
            tilt,
            wrap_two_pi(math.radians(_get_number(pose_doc, "pan_deg", "initial_light_pose"))),
        )

    waypoints_doc = doc.get("waypoints", [])
    if not isinstance(waypoints_doc, list):
        raise ScenarioError("waypoints must be a list")
    waypoints = [_parse_polar(w, f"waypoints[{i}]") for i, w in enumerate(waypoints_doc)]

    bound = doc.get("rms_error_bound")
    if bound is not None:
        bound = _get_number({"rms_error_bound": bound}, "rms_error_bound", "scenario")

    seed = doc.get("seed", 0)
    if not isinstance(seed, int) or isinstance(seed, bool):
        raise ScenarioError("seed must be an integer")

    return Scenario(
        frame=frame,
        robot=robot,
        environment=environment,
        start=_parse_polar(doc["start"], "start"),
        waypoints=waypoints,
        speed=_get_number(doc, "speed", "scenario", 1.0),
        tick_rate=_get_number(doc, "tick_rate", "scenario", 30.0),
        duration_s=_get_number(doc, "duration_s", "scenario", 10.0),
        control_mode=doc.get("control_mode", CONTROL_MODE_PID),
        plant_mode=doc.get("plant_mode", PLANT_MODE_GEOMETRIC),
        gains=_parse_gains(doc.get("gains", {})),
        plant=plant,
        limits=limits,
        initial_light_pose=initial_pose,
        rms_error_bound=bound,
        seed=seed,
    )


def load_scenario(path: str | Path) -> Scenario:
    """Load a scenario file; environment paths resolve relative to it."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read scenario {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(
            f"parse error in {p} at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    return scenario_from_dict(doc, base_dir=p.parent)
