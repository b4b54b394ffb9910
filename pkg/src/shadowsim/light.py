"""Directional-light pose solving and the analytic flat-ground shadow projection.

The light is purely directional (parallel rays, sun-type): shadow length
depends only on the tilt and the robot height, never on a light position.
Tilt is measured up from the horizontal; pan is the global bearing the
shadow extends along.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import DegenerateGeometryError, DomainError
from .geometry import (
    FrameConfig,
    GlobalCartesian,
    WorldPolar,
    map_to_virtual,
    virtual_polar_to_global,
    world_polar_to_global,
    wrap_two_pi,
)

# Saturation bounds keep the shadow finite: tilt near 0 casts a near-infinite
# shadow, tilt near 90 degrees collapses it under the robot.
DEFAULT_TILT_MIN = math.radians(2.0)
DEFAULT_TILT_MAX = math.radians(85.0)

COINCIDENT_TOL = 1e-12


@dataclass(frozen=True)
class LightPose:
    """Tilt (radians up from horizontal, in (0, pi/2)) and pan (bearing in [0, 2*pi))."""

    tilt_alpha: float
    pan_gamma: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.tilt_alpha) or not math.isfinite(self.pan_gamma):
            raise DomainError("LightPose angles must be finite")

    def shadow_length(self, height: float) -> float:
        return height / math.tan(self.tilt_alpha)

    def light_direction(self) -> tuple[float, float, float]:
        """Unit vector the light travels along (downward)."""
        ca = math.cos(self.tilt_alpha)
        return (
            math.cos(self.pan_gamma) * ca,
            math.sin(self.pan_gamma) * ca,
            -math.sin(self.tilt_alpha),
        )


@dataclass(frozen=True)
class RobotGeometry:
    """Physical robot envelope: height of the top center, silhouette half-width."""

    height_h: float
    footprint_radius: float = 0.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.height_h) and self.height_h > 0.0):
            raise DomainError("RobotGeometry.height_h must be > 0")
        if not (math.isfinite(self.footprint_radius) and self.footprint_radius >= 0.0):
            raise DomainError("RobotGeometry.footprint_radius must be >= 0")


def compute_tilt(h: float, d: float) -> float:
    """Tilt that makes a robot of height ``h`` cast a shadow of length ``d``."""
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError("height h must be > 0")
    if not math.isfinite(d) or d < 0.0:
        raise DomainError("distance d must be >= 0")
    if d == 0.0:
        raise DegenerateGeometryError("shadow tip coincides with robot base (d = 0)")
    return math.atan(h / d)


def compute_pan(p_r: GlobalCartesian, p_d: GlobalCartesian) -> float:
    """Planar bearing from the robot's ground position toward the shadow tip."""
    dx = p_d.x - p_r.x
    dy = p_d.y - p_r.y
    if math.hypot(dx, dy) <= COINCIDENT_TOL:
        raise DegenerateGeometryError("robot and shadow-tip positions coincide")
    return wrap_two_pi(math.atan2(dy, dx))


def forward_project_flat(p_r: GlobalCartesian, h: float, pose: LightPose) -> GlobalCartesian:
    """Shadow tip of the robot's top center on the flat ground plane z = 0."""
    if not (0.0 < pose.tilt_alpha < math.pi / 2.0):
        raise DomainError("tilt must lie in (0, pi/2) for a flat-ground projection")
    if not (math.isfinite(h) and h > 0.0):
        raise DomainError("height h must be > 0")
    length = h / math.tan(pose.tilt_alpha)
    return GlobalCartesian(
        p_r.x + length * math.cos(pose.pan_gamma),
        p_r.y + length * math.sin(pose.pan_gamma),
        0.0,
    )


def compute_light_pose(
    p_r: WorldPolar,
    geom: RobotGeometry,
    cfg: FrameConfig,
    tilt_min: float = DEFAULT_TILT_MIN,
    tilt_max: float = DEFAULT_TILT_MAX,
) -> tuple[LightPose, bool]:
    """Exact ("direct-mode") light pose placing the shadow tip at the mapped setpoint.

    Returns ``(pose, clamped)``: ``clamped`` is True when the tilt had to be
    saturated to stay inside ``[tilt_min, tilt_max]``. A zero shadow-robot
    distance resolves to maximum tilt rather than an error so a closed loop
    never halts mid-trajectory.
    """
    setpoint = map_to_virtual(p_r, cfg)
    robot_global = world_polar_to_global(p_r, cfg)
    target_global = virtual_polar_to_global(setpoint, cfg)
    d = robot_global.planar_distance(target_global)

    if d <= COINCIDENT_TOL:
        return LightPose(tilt_max, 0.0), True

    tilt = compute_tilt(geom.height_h, d)
    pan = compute_pan(robot_global, target_global)

    clamped = False
    if tilt < tilt_min:
        tilt, clamped = tilt_min, True
    elif tilt > tilt_max:
        tilt, clamped = tilt_max, True
    return LightPose(tilt, pan), clamped
