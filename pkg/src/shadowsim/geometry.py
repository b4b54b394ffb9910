"""Coordinate frames and the linear mapping from the real-world semicircle to the FOV sector.

Three frames are in play:

* world polar ``(r_w, beta_w)`` — the robot's position in the semicircular
  region behind the human; ``beta_w`` sweeps from the human's right-hand
  side (0) through the rear to the left-hand side (``theta_w``).
* virtual polar ``(r_v, beta_v)`` — the shadow-tip position inside the FOV
  sector in front of the human; ``beta_v`` sweeps from the right sector
  boundary (0) toward the left (``theta_v``).
* global Cartesian ``(x, y[, z])`` — shared ground frame for projection.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

from .errors import DomainError

TWO_PI = 2.0 * math.pi


def wrap_pi(angle: float) -> float:
    """Wrap an angle to (-pi, pi]."""
    a = math.fmod(angle + math.pi, TWO_PI)
    if a <= 0.0:
        a += TWO_PI
    return a - math.pi


def wrap_two_pi(angle: float) -> float:
    """Wrap an angle to [0, 2*pi)."""
    a = math.fmod(angle, TWO_PI)
    if a < 0.0:
        a += TWO_PI
    return a if a < TWO_PI else 0.0


@dataclass(frozen=True)
class GlobalCartesian:
    """A point in the shared ground frame, meters. z defaults to the ground plane."""

    x: float
    y: float
    z: float = 0.0

    def __post_init__(self) -> None:
        for name in ("x", "y", "z"):
            if not math.isfinite(getattr(self, name)):
                raise DomainError(f"GlobalCartesian.{name} must be finite")

    def planar_distance(self, other: "GlobalCartesian") -> float:
        return math.hypot(self.x - other.x, self.y - other.y)


@dataclass(frozen=True)
class FrameConfig:
    """Geometry of the two worlds and the human pose that pins them together.

    ``l_w`` is the user-declared radius of the rear semicircle; ``l_v`` and
    ``theta_v`` default to the AR device constants (5 m, 34 degrees).
    ``human_facing`` is the global heading of the FOV centerline.
    """

    l_w: float
    theta_w: float = math.pi
    l_v: float = 5.0
    theta_v: float = math.radians(34.0)
    human_position: GlobalCartesian = field(default_factory=lambda: GlobalCartesian(0.0, 0.0))
    human_facing: float = math.pi / 2.0

    def __post_init__(self) -> None:
        if not (math.isfinite(self.l_w) and self.l_w > 0.0):
            raise DomainError("FrameConfig.l_w must be > 0")
        if not (math.isfinite(self.l_v) and self.l_v > 0.0):
            raise DomainError("FrameConfig.l_v must be > 0")
        if not (0.0 < self.theta_v < self.theta_w <= math.pi):
            raise DomainError("FrameConfig requires 0 < theta_v < theta_w <= pi")
        if not math.isfinite(self.human_facing):
            raise DomainError("FrameConfig.human_facing must be finite")

    @property
    def rear_zero_bearing(self) -> float:
        """Global bearing of beta_w = 0 (the human's right-hand direction)."""
        return self.human_facing - math.pi / 2.0

    @property
    def fov_right_bearing(self) -> float:
        """Global bearing of beta_v = 0 (the right FOV boundary)."""
        return self.human_facing - self.theta_v / 2.0


@dataclass(frozen=True)
class WorldPolar:
    """Robot position in the rear semicircle: radius r_w, angle beta_w."""

    r_w: float
    beta_w: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.r_w):
            raise DomainError("WorldPolar.r_w must be finite")
        if not math.isfinite(self.beta_w):
            raise DomainError("WorldPolar.beta_w must be finite")


@dataclass(frozen=True)
class VirtualPolar:
    """Shadow-tip position in the FOV sector: radius r_v, angle beta_v."""

    r_v: float
    beta_v: float

    def __post_init__(self) -> None:
        if not math.isfinite(self.r_v):
            raise DomainError("VirtualPolar.r_v must be finite")
        if not math.isfinite(self.beta_v):
            raise DomainError("VirtualPolar.beta_v must be finite")


def check_world_polar(p: WorldPolar, cfg: FrameConfig) -> None:
    """Reject points outside the rear semicircle. Strict: no clamping here."""
    if not 0.0 <= p.r_w <= cfg.l_w:
        raise DomainError(f"WorldPolar.r_w={p.r_w!r} outside [0, {cfg.l_w}]")
    if not 0.0 <= p.beta_w <= cfg.theta_w:
        raise DomainError(f"WorldPolar.beta_w={p.beta_w!r} outside [0, {cfg.theta_w}]")


def check_virtual_polar(p: VirtualPolar, cfg: FrameConfig) -> None:
    if not 0.0 <= p.r_v <= cfg.l_v:
        raise DomainError(f"VirtualPolar.r_v={p.r_v!r} outside [0, {cfg.l_v}]")
    if not 0.0 <= p.beta_v <= cfg.theta_v:
        raise DomainError(f"VirtualPolar.beta_v={p.beta_v!r} outside [0, {cfg.theta_v}]")


def map_to_virtual(p: WorldPolar, cfg: FrameConfig) -> VirtualPolar:
    """Map a robot position to its desired shadow-tip position.

    Linear in both coordinates: the radius inverts (a closer robot shows
    more shadow) and the angle compresses by theta_v / theta_w so that
    left/right motion is preserved.
    """
    check_world_polar(p, cfg)
    r_v = cfg.l_v - p.r_w * (cfg.l_v / cfg.l_w)
    beta_v = p.beta_w * (cfg.theta_v / cfg.theta_w)
    return VirtualPolar(r_v, beta_v)


def world_polar_to_global(p: WorldPolar, cfg: FrameConfig) -> GlobalCartesian:
    """Place a rear-semicircle point in the global frame.

    beta_w sweeps clockwise (seen from above) from the human's right-hand
    direction through the rear half-plane to the left-hand direction.
    """
    check_world_polar(p, cfg)
    bearing = cfg.rear_zero_bearing - p.beta_w
    return GlobalCartesian(
        cfg.human_position.x + p.r_w * math.cos(bearing),
        cfg.human_position.y + p.r_w * math.sin(bearing),
    )


def virtual_polar_to_global(p: VirtualPolar, cfg: FrameConfig) -> GlobalCartesian:
    """Place an FOV-sector point in the global frame.

    beta_v sweeps counterclockwise from the right sector boundary toward
    the left one; the sector apex sits at the human's position.
    """
    check_virtual_polar(p, cfg)
    bearing = cfg.fov_right_bearing + p.beta_v
    return GlobalCartesian(
        cfg.human_position.x + p.r_v * math.cos(bearing),
        cfg.human_position.y + p.r_v * math.sin(bearing),
    )


def global_to_world_polar(point: GlobalCartesian, cfg: FrameConfig) -> tuple[float, float]:
    """Invert :func:`world_polar_to_global` without range validation.

    Returns raw ``(r_w, beta_w)``; beta_w is wrapped to (-pi, pi] so callers
    can detect front-half-plane positions (negative or > pi values never
    occur for valid rear points).
    """
    dx = point.x - cfg.human_position.x
    dy = point.y - cfg.human_position.y
    r = math.hypot(dx, dy)
    if r == 0.0:
        return 0.0, 0.0
    beta = wrap_pi(cfg.rear_zero_bearing - math.atan2(dy, dx))
    return r, beta


def global_to_virtual_polar(point: GlobalCartesian, cfg: FrameConfig) -> tuple[float, float]:
    """Invert :func:`virtual_polar_to_global` without range validation."""
    dx = point.x - cfg.human_position.x
    dy = point.y - cfg.human_position.y
    r = math.hypot(dx, dy)
    if r == 0.0:
        return 0.0, 0.0
    beta = wrap_pi(math.atan2(dy, dx) - cfg.fov_right_bearing)
    return r, beta


def shadow_robot_distance(p_r: WorldPolar, p_d: VirtualPolar, cfg: FrameConfig) -> float:
    """Planar Euclidean distance between robot and desired shadow tip."""
    a = world_polar_to_global(p_r, cfg)
    b = virtual_polar_to_global(p_d, cfg)
    return a.planar_distance(b)


def point_in_fov(point: GlobalCartesian, cfg: FrameConfig, tol: float = 1e-9) -> bool:
    """True when a global point lies inside the FOV sector (planar test)."""
    dx = point.x - cfg.human_position.x
    dy = point.y - cfg.human_position.y
    r = math.hypot(dx, dy)
    if r > cfg.l_v + tol:
        return False
    if r <= tol:
        return True
    deviation = abs(wrap_pi(math.atan2(dy, dx) - cfg.human_facing))
    return deviation <= cfg.theta_v / 2.0 + tol
