"""Discrete-time PID smoothing of light-pose updates over a first-order plant.

The control input is ``u = [delta_tilt, delta_pan]`` and the controlled
state is the rendered shadow position ``x = [r_v, beta_v]``. The plant's
input gain is ``diag(-a, b)``: raising the tilt shortens the shadow
(radial channel reacts negatively), panning left moves it left.

Units note: the radial error is in meters while the tilt actuation is in
radians, so ``control_tick`` converts the tracking error into actuation
space before the PID law. In model mode this is division by the plant
input gain. In geometric mode it is the exact inverse kinematics of the
flat-ground projection: the pose that would render the setpoint minus the
pose that would render the measured tip. That keeps the configured gains
dimensionless loop gains with identical meaning on both channels, in both
plant modes, at any geometry, and makes the pose-space loop linear (no
geometry-dependent loop gain to destabilize it). The gains stay fixed;
only known kinematics are applied per tick.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .errors import ControllerInputError, DomainError
from .geometry import (
    FrameConfig,
    GlobalCartesian,
    VirtualPolar,
    WorldPolar,
    world_polar_to_global,
    wrap_pi,
    wrap_two_pi,
)
from .light import DEFAULT_TILT_MAX, DEFAULT_TILT_MIN, LightPose

PLANT_MODE_GEOMETRIC = "geometric"
PLANT_MODE_MODEL = "model"


def _as_matrix(value: object, name: str) -> np.ndarray:
    m = np.asarray(value, dtype=np.float64)
    if m.shape == ():
        m = np.eye(2) * float(m)
    if m.shape != (2, 2):
        raise DomainError(f"{name} must be a 2x2 matrix, got shape {m.shape}")
    if not np.all(np.isfinite(m)):
        raise DomainError(f"{name} must have finite entries")
    return m


@dataclass
class PidGains:
    """Proportional, integral, and derivative coefficient matrices (2x2)."""

    kp: np.ndarray = field(default_factory=lambda: np.diag([0.4, 0.4]))
    ki: np.ndarray = field(default_factory=lambda: np.diag([0.02, 0.02]))
    kd: np.ndarray = field(default_factory=lambda: np.diag([0.05, 0.05]))

    def __post_init__(self) -> None:
        self.kp = _as_matrix(self.kp, "kp")
        self.ki = _as_matrix(self.ki, "ki")
        self.kd = _as_matrix(self.kd, "kd")


@dataclass(frozen=True)
class PlantParams:
    """Positive constants of the first-order shadow plant."""

    a: float = 1.0
    b: float = 1.0
    f: float = 1.0
    g: float = 1.0

    def __post_init__(self) -> None:
        for name in ("a", "b", "f", "g"):
            v = getattr(self, name)
            if not (math.isfinite(v) and v > 0.0):
                raise DomainError(f"PlantParams.{name} must be > 0")


@dataclass(frozen=True)
class ControllerLimits:
    """Actuation rate limits, anti-windup bound, and tilt saturation bounds.

    The per-tick rate limits are the smoothing mechanism's hard backstop;
    the integral clamp keeps rate-limited sessions from winding up.
    """

    max_tilt_step: float = 0.05
    max_pan_step: float = 0.1
    integral_limit: float = 10.0
    tilt_min: float = DEFAULT_TILT_MIN
    tilt_max: float = DEFAULT_TILT_MAX

    def __post_init__(self) -> None:
        if self.max_tilt_step <= 0.0 or self.max_pan_step <= 0.0:
            raise DomainError("rate limits must be > 0")
        if self.integral_limit <= 0.0:
            raise DomainError("integral_limit must be > 0")
        if not 0.0 < self.tilt_min < self.tilt_max < math.pi / 2.0:
            raise DomainError("tilt bounds must satisfy 0 < tilt_min < tilt_max < pi/2")


@dataclass
class ControllerConfig:
    frame: FrameConfig = field(default_factory=lambda: FrameConfig(l_w=10.0))
    gains: PidGains = field(default_factory=PidGains)
    limits: ControllerLimits = field(default_factory=ControllerLimits)
    plant: PlantParams = field(default_factory=PlantParams)
    plant_mode: str = PLANT_MODE_GEOMETRIC
    robot_height: float = 1.0

    def __post_init__(self) -> None:
        if self.plant_mode not in (PLANT_MODE_GEOMETRIC, PLANT_MODE_MODEL):
            raise DomainError(f"unknown plant mode {self.plant_mode!r}")


@dataclass
class ControllerState:
    """Per-session mutable loop state; owned by exactly one simulation."""

    light_pose: LightPose
    x_k: np.ndarray = field(default_factory=lambda: np.zeros(2))
    integral: np.ndarray = field(default_factory=lambda: np.zeros(2))
    prev_error: np.ndarray = field(default_factory=lambda: np.zeros(2))
    k: int = 0

    def reset_history(self) -> None:
        """Drop accumulated error history (used when switching control modes)."""
        self.integral = np.zeros(2)
        self.prev_error = np.zeros(2)
        self.k = 0


@dataclass(frozen=True)
class ControlOutput:
    """Rate-limited pose update ``u = [delta_tilt, delta_pan]`` with per-axis flags."""

    u: np.ndarray
    saturated: tuple[bool, bool]


def pid_step(state: ControllerState, e_k: np.ndarray, gains: PidGains, limits: ControllerLimits) -> ControlOutput:
    """One PID update: u(k) = Kp e(k) + Ki sum(e) + Kd (e(k) - e(k-1)).

    The integral includes e(k) and is clamped to the anti-windup bound;
    e(k-1) is zero at k = 0. The output is clamped per axis to the rate
    limits, with flags reporting which axis saturated.
    """
    e = np.asarray(e_k, dtype=np.float64)
    if e.shape != (2,) or not np.all(np.isfinite(e)):
        raise ControllerInputError(f"error vector must be 2 finite components, got {e_k!r}")

    integral = np.clip(state.integral + e, -limits.integral_limit, limits.integral_limit)
    u = gains.kp @ e + gains.ki @ integral + gains.kd @ (e - state.prev_error)

    bounds = (limits.max_tilt_step, limits.max_pan_step)
    saturated = [False, False]
    clamped = u.copy()
    for i, bound in enumerate(bounds):
        if clamped[i] > bound:
            clamped[i] = bound
            saturated[i] = True
        elif clamped[i] < -bound:
            clamped[i] = -bound
            saturated[i] = True

    state.integral = integral
    state.prev_error = e.copy()
    state.k += 1
    return ControlOutput(clamped, (saturated[0], saturated[1]))


def plant_step(
    x_k: np.ndarray, u_k: np.ndarray, delta_pr: np.ndarray, params: PlantParams
) -> np.ndarray:
    """First-order plant: x(k+1) = x(k) + diag(-a, b) u(k) + diag(-f, g) dPr(k)."""
    x = np.asarray(x_k, dtype=np.float64)
    u = np.asarray(u_k, dtype=np.float64)
    d = np.asarray(delta_pr, dtype=np.float64)
    for name, v in (("x_k", x), ("u_k", u), ("delta_pr", d)):
        if v.shape != (2,) or not np.all(np.isfinite(v)):
            raise ControllerInputError(f"{name} must be 2 finite components")
    return np.array(
        [x[0] - params.a * u[0] - params.f * d[0], x[1] + params.b * u[1] + params.g * d[1]]
    )


def tracking_error(setpoint: VirtualPolar, measured_x: np.ndarray) -> np.ndarray:
    """Componentwise virtual-polar error; the angular channel wraps to (-pi, pi]."""
    return np.array(
        [setpoint.r_v - measured_x[0], wrap_pi(setpoint.beta_v - measured_x[1])]
    )


def _virtual_vector_to_global(x: np.ndarray, frame: FrameConfig) -> GlobalCartesian:
    """Global position of a virtual-polar 2-vector, without sector validation."""
    bearing = frame.fov_right_bearing + float(x[1])
    return GlobalCartesian(
        frame.human_position.x + float(x[0]) * math.cos(bearing),
        frame.human_position.y + float(x[0]) * math.sin(bearing),
    )


def _pose_toward(robot_g: GlobalCartesian, point: GlobalCartesian, cfg: ControllerConfig,
                 fallback_pan: float) -> tuple[float, float]:
    """Flat-ground tilt and pan that would place the shadow tip at ``point``."""
    d = robot_g.planar_distance(point)
    if d <= 1e-12:
        return cfg.limits.tilt_max, fallback_pan
    tilt = math.atan(cfg.robot_height / d)
    pan = math.atan2(point.y - robot_g.y, point.x - robot_g.x)
    return tilt, pan


def actuation_error(
    e: np.ndarray,
    setpoint: VirtualPolar,
    measured: np.ndarray,
    robot: WorldPolar,
    state: ControllerState,
    cfg: ControllerConfig,
) -> np.ndarray:
    """Map the virtual-polar tracking error into actuation (tilt, pan) space.

    Model mode divides by the plant input gain diag(-a, b). Geometric mode
    uses the exact flat-ground inverse kinematics: the pose that renders
    the setpoint minus the pose that renders the measured tip, which keeps
    the pose-space loop linear regardless of shadow length.
    """
    if cfg.plant_mode == PLANT_MODE_MODEL:
        return np.array([e[0] / -cfg.plant.a, e[1] / cfg.plant.b])

    robot_g = world_polar_to_global(robot, cfg.frame)
    target_g = _virtual_vector_to_global(np.array([setpoint.r_v, setpoint.beta_v]), cfg.frame)
    measured_g = _virtual_vector_to_global(measured, cfg.frame)
    pan_now = state.light_pose.pan_gamma
    tilt_target, pan_target = _pose_toward(robot_g, target_g, cfg, pan_now)
    tilt_meas, pan_meas = _pose_toward(robot_g, measured_g, cfg, pan_now)
    return np.array([tilt_target - tilt_meas, wrap_pi(pan_target - pan_meas)])


def control_tick(
    setpoint: VirtualPolar,
    measured_x: np.ndarray,
    delta_pr: np.ndarray,
    state: ControllerState,
    cfg: ControllerConfig,
    robot: WorldPolar,
) -> tuple[ControlOutput, LightPose]:
    """Close one loop step: error -> PID -> bounded light-pose update.

    ``delta_pr`` is the robot's per-tick world-polar move. It drives the
    plant (and therefore ``measured_x``), not the control law itself, so it
    is accepted for interface symmetry and recorded by the caller.
    """
    measured = np.asarray(measured_x, dtype=np.float64)
    if measured.shape != (2,) or not np.all(np.isfinite(measured)):
        raise ControllerInputError("measured_x must be 2 finite components")

    e = tracking_error(setpoint, measured)
    out = pid_step(
        state, actuation_error(e, setpoint, measured, robot, state, cfg), cfg.gains, cfg.limits
    )

    tilt = state.light_pose.tilt_alpha + float(out.u[0])
    tilt = min(max(tilt, cfg.limits.tilt_min), cfg.limits.tilt_max)
    pan = wrap_two_pi(state.light_pose.pan_gamma + float(out.u[1]))
    pose = LightPose(tilt, pan)

    state.light_pose = pose
    state.x_k = measured.copy()
    return out, pose
