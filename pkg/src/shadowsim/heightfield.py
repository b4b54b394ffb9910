"""Height-field environment and analytic ray projection of shadow footprints.

The environment is a regular grid of solid columns: cell (ix, iy) spans
``origin + [ix, ix+1) * cell_size`` in x, likewise in y, and is solid from
below up to its height. Rays are marched cell to cell with a 2-D DDA
traversal and exact per-cell top/side intersection tests, so there is no
step size to tune and thin walls cannot be tunneled through.
"""

from __future__ import annotations

import json
import math
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .errors import DomainError, EmptyFootprintError, HeightFieldError
from .geometry import GlobalCartesian
from .light import LightPose, RobotGeometry

SURFACE_GROUND = "ground"
SURFACE_ELEVATED_TOP = "elevated-top"
SURFACE_WALL_FACE = "wall-face"

_EPS = 1e-9

REQUIRED_KEYS = ("cell_size", "origin", "nx", "ny", "heights")


@dataclass(frozen=True)
class HeightField:
    """Immutable grid of per-cell heights; row 0 of ``heights`` is minimum y."""

    origin: GlobalCartesian
    cell_size: float
    nx: int
    ny: int
    heights: np.ndarray  # shape (ny, nx), float64

    def __post_init__(self) -> None:
        if not (math.isfinite(self.cell_size) and self.cell_size > 0.0):
            raise HeightFieldError("cell_size must be > 0")
        if self.nx <= 0 or self.ny <= 0:
            raise HeightFieldError("nx and ny must be positive")
        if self.heights.shape != (self.ny, self.nx):
            raise HeightFieldError(
                f"heights has {self.heights.size} values, expected nx*ny = {self.nx * self.ny}"
            )
        flat = self.heights.ravel()
        bad = np.where(~np.isfinite(flat) | (flat < 0.0))[0]
        if bad.size:
            i = int(bad[0])
            raise HeightFieldError(f"heights[{i}] = {flat[i]!r} is not a finite value >= 0")

    @property
    def max_x(self) -> float:
        return self.origin.x + self.nx * self.cell_size

    @property
    def max_y(self) -> float:
        return self.origin.y + self.ny * self.cell_size

    def cell_index(self, x: float, y: float) -> tuple[int, int]:
        """Cell containing (x, y); points on the max edge belong to the last cell."""
        ix = int((x - self.origin.x) / self.cell_size)
        iy = int((y - self.origin.y) / self.cell_size)
        return min(max(ix, 0), self.nx - 1), min(max(iy, 0), self.ny - 1)

    def in_bounds(self, x: float, y: float) -> bool:
        return self.origin.x <= x <= self.max_x and self.origin.y <= y <= self.max_y

    def height_at(self, x: float, y: float) -> float:
        ix, iy = self.cell_index(x, y)
        return float(self.heights[iy, ix])


def flat_field(span: float, cell_size: float = 1.0, center: GlobalCartesian | None = None) -> HeightField:
    """All-zero field covering ``[-span, span]`` squared around ``center``."""
    c = center or GlobalCartesian(0.0, 0.0)
    n = max(int(math.ceil(2.0 * span / cell_size)), 1)
    origin = GlobalCartesian(c.x - n * cell_size / 2.0, c.y - n * cell_size / 2.0)
    return HeightField(origin, cell_size, n, n, np.zeros((n, n)))


def load_heightfield(path: str | Path) -> HeightField:
    """Load and validate a height-field document (UTF-8 JSON, exact keys)."""
    p = Path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise HeightFieldError(f"cannot read height field {p}: {exc}") from exc
    try:
        doc = json.loads(text)
    except json.JSONDecodeError as exc:
        raise HeightFieldError(
            f"parse error in {p} at line {exc.lineno} column {exc.colno}: {exc.msg}"
        ) from exc
    if not isinstance(doc, dict):
        raise HeightFieldError(f"{p}: top level must be an object")

    unknown = sorted(set(doc) - set(REQUIRED_KEYS))
    if unknown:
        raise HeightFieldError(f"{p}: unknown keys {unknown}")
    missing = [k for k in REQUIRED_KEYS if k not in doc]
    if missing:
        raise HeightFieldError(f"{p}: missing keys {missing}")

    try:
        cell_size = float(doc["cell_size"])
        ox, oy = (float(v) for v in doc["origin"])
        nx = int(doc["nx"])
        ny = int(doc["ny"])
        heights = [float(v) for v in doc["heights"]]
    except (TypeError, ValueError) as exc:
        raise HeightFieldError(f"{p}: malformed field: {exc}") from exc

    if len(heights) != nx * ny:
        raise HeightFieldError(
            f"{p}: heights has {len(heights)} values, expected nx*ny = {nx * ny}"
        )
    grid = np.array(heights, dtype=np.float64).reshape(ny, nx)
    try:
        return HeightField(GlobalCartesian(ox, oy), cell_size, nx, ny, grid)
    except HeightFieldError as exc:
        raise HeightFieldError(f"{p}: {exc}") from exc


@dataclass(frozen=True)
class SurfacePoint:
    """A ray hit on the field surface: position and which kind of face was struck."""

    position: GlobalCartesian
    surface_kind: str


@dataclass(frozen=True)
class ShadowFootprint:
    """Projected silhouette polyline; ``tip`` is the top-center hit the controller drives."""

    points: tuple[SurfacePoint, ...]
    tip: SurfacePoint


def _entry_t(origin_v: float, direction_v: float, lo: float, hi: float) -> tuple[float, float]:
    """Parametric interval where one axis stays inside [lo, hi]."""
    if direction_v == 0.0:
        if lo <= origin_v <= hi:
            return -math.inf, math.inf
        return math.inf, -math.inf
    t0 = (lo - origin_v) / direction_v
    t1 = (hi - origin_v) / direction_v
    return (t0, t1) if t0 <= t1 else (t1, t0)


def raycast(
    origin: tuple[float, float, float],
    direction: tuple[float, float, float],
    env: HeightField,
) -> SurfacePoint | None:
    """First intersection of a ray with the field surface, or None if it exits.

    ``direction`` must be unit length. Raises DomainError when the origin
    starts below the local surface (inside a solid column).
    """
    ox, oy, oz = origin
    dx, dy, dz = direction
    norm = math.sqrt(dx * dx + dy * dy + dz * dz)
    if abs(norm - 1.0) > 1e-9:
        raise DomainError(f"direction must be unit length, |d| = {norm!r}")

    # Clip the ray to the field's xy extent.
    tx0, tx1 = _entry_t(ox, dx, env.origin.x, env.max_x)
    ty0, ty1 = _entry_t(oy, dy, env.origin.y, env.max_y)
    t_enter = max(tx0, ty0, 0.0)
    t_exit = min(tx1, ty1)
    if t_enter > t_exit:
        return None

    inside = env.in_bounds(ox, oy)
    if inside:
        h0 = env.height_at(ox, oy)
        if oz < h0 - _EPS:
            raise DomainError(f"ray origin z={oz!r} is below the local surface {h0!r}")
        t = 0.0
        entering = False  # origin sits inside its cell; there is no entry face
    else:
        t = t_enter
        entering = True

    px = ox + dx * t
    py = oy + dy * t
    ix, iy = env.cell_index(px, py)

    step_x = 1 if dx > 0.0 else (-1 if dx < 0.0 else 0)
    step_y = 1 if dy > 0.0 else (-1 if dy < 0.0 else 0)
    cs = env.cell_size

    if step_x > 0:
        t_max_x = (env.origin.x + (ix + 1) * cs - ox) / dx
    elif step_x < 0:
        t_max_x = (env.origin.x + ix * cs - ox) / dx
    else:
        t_max_x = math.inf
    if step_y > 0:
        t_max_y = (env.origin.y + (iy + 1) * cs - oy) / dy
    elif step_y < 0:
        t_max_y = (env.origin.y + iy * cs - oy) / dy
    else:
        t_max_y = math.inf
    t_delta_x = cs / abs(dx) if dx != 0.0 else math.inf
    t_delta_y = cs / abs(dy) if dy != 0.0 else math.inf

    while True:
        h = float(env.heights[iy, ix])
        t_next = min(t_max_x, t_max_y)
        z_here = oz + dz * t

        if entering and z_here < h - _EPS:
            # Entered this column below its top: the entry face is the hit.
            return SurfacePoint(
                GlobalCartesian(ox + dx * t, oy + dy * t, z_here), SURFACE_WALL_FACE
            )
        if dz < 0.0:
            t_top = (h - oz) / dz
            if t - _EPS <= t_top <= t_next + _EPS and t_top >= 0.0:
                kind = SURFACE_GROUND if h == 0.0 else SURFACE_ELEVATED_TOP
                return SurfacePoint(
                    GlobalCartesian(ox + dx * t_top, oy + dy * t_top, h), kind
                )
        if t_next == math.inf:
            # Purely vertical ray that cleared its column.
            return None

        # Advance to the neighboring cell.
        if t_max_x <= t_max_y:
            ix += step_x
            t = t_max_x
            t_max_x += t_delta_x
        else:
            iy += step_y
            t = t_max_y
            t_max_y += t_delta_y
        entering = True
        if ix < 0 or ix >= env.nx or iy < 0 or iy >= env.ny:
            return None
        if t > t_exit + _EPS:
            return None


def _ring(cx: float, cy: float, z: float, radius: float, count: int) -> list[tuple[float, float, float]]:
    pts = []
    for j in range(count):
        psi = math.tau * j / count
        pts.append((cx + radius * math.cos(psi), cy + radius * math.sin(psi), z))
    return pts


def project_shadow(
    p_r: GlobalCartesian,
    geom: RobotGeometry,
    pose: LightPose,
    env: HeightField,
    n_samples: int = 9,
) -> ShadowFootprint:
    """Cast silhouette sample rays along the light direction onto the field.

    Samples the robot's top center plus (for a nonzero footprint radius)
    matching rings at top and base; the footprint orders base-ring hits,
    then top-ring hits, then the tip. Misses are skipped; losing every ray
    (or the tip ray) raises EmptyFootprintError.
    """
    if not (0.0 < pose.tilt_alpha < math.pi / 2.0):
        raise DomainError("light pose tilt must lie in (0, pi/2)")
    if n_samples < 2:
        raise DomainError("n_samples must be >= 2")
    if not env.in_bounds(p_r.x, p_r.y):
        raise DomainError("robot position is outside the height field")

    base_z = env.height_at(p_r.x, p_r.y)
    top_z = base_z + geom.height_h
    direction = pose.light_direction()

    samples: list[tuple[float, float, float]]
    if geom.footprint_radius == 0.0:
        samples = [(p_r.x, p_r.y, base_z)]
    else:
        ring_count = max((n_samples - 1) // 2, 1)
        samples = _ring(p_r.x, p_r.y, base_z, geom.footprint_radius, ring_count)
        samples += _ring(p_r.x, p_r.y, top_z, geom.footprint_radius, ring_count)
    samples.append((p_r.x, p_r.y, top_z))  # top center last: its hit is the tip

    hits: list[SurfacePoint] = []
    tip: SurfacePoint | None = None
    for i, s in enumerate(samples):
        hit = raycast(s, direction, env)
        if hit is None:
            continue
        hits.append(hit)
        if i == len(samples) - 1:
            tip = hit

    if not hits:
        raise EmptyFootprintError("every silhouette ray exited the height field")
    if tip is None:
        raise EmptyFootprintError("the top-center ray exited the height field")
    return ShadowFootprint(tuple(hits), tip)
