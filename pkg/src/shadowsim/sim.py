"""Tick-synchronous closed-loop simulation: motion -> mapping -> control -> shadow.

Every tick runs the same update order, so runs are replayable and two runs
of the same scenario produce bit-identical records. Scripted trajectories
are evaluated as a pure function of the tick index (no accumulated drift);
live steering (service sessions) integrates unicycle commands instead.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .controller import (
    ControllerConfig,
    ControllerState,
    PLANT_MODE_GEOMETRIC,
    control_tick,
    plant_step,
    tracking_error,
)
from .errors import ScenarioError
from .geometry import (
    FrameConfig,
    GlobalCartesian,
    VirtualPolar,
    WorldPolar,
    global_to_virtual_polar,
    global_to_world_polar,
    map_to_virtual,
    point_in_fov,
    world_polar_to_global,
    wrap_pi,
)
from .heightfield import SurfacePoint, project_shadow
from .light import LightPose, compute_light_pose
from .scenario import CONTROL_MODE_DIRECT, CONTROL_MODE_PID, Scenario

CONVERGENCE_THRESHOLD = 1e-3


@dataclass
class RobotState:
    """Live-steered robot: unicycle heading/speed or a chase target."""

    position: GlobalCartesian
    heading: float = 0.0
    speed: float = 0.0
    target: GlobalCartesian | None = None


@dataclass(frozen=True)
class TickRecord:
    """One closed-loop step; fields are plain values so records serialize exactly."""

    k: int
    robot: WorldPolar
    setpoint: VirtualPolar
    error: tuple[float, float]
    u: tuple[float, float]
    light_pose: LightPose
    tip: SurfacePoint
    footprint: tuple[SurfacePoint, ...]
    saturated: tuple[bool, bool]
    clamped: bool
    assumption_violated: bool


@dataclass(frozen=True)
class Metrics:
    """Per-run aggregates operationalizing smoothness and visibility."""

    max_dalpha: float
    rms_dalpha: float
    max_dgamma: float
    rms_dgamma: float
    rms_error: float
    visibility_fraction: float
    convergence_tick: int | None

    def to_dict(self) -> dict:
        return {
            "max_dalpha": self.max_dalpha,
            "rms_dalpha": self.rms_dalpha,
            "max_dgamma": self.max_dgamma,
            "rms_dgamma": self.rms_dgamma,
            "rms_error": self.rms_error,
            "visibility_fraction": self.visibility_fraction,
            "convergence_tick": self.convergence_tick,
        }


@dataclass(frozen=True)
class ModeComparison:
    """Paired direct/pid runs of one scenario with per-tick angle-update traces."""

    direct: Metrics
    pid: Metrics
    direct_dalpha: tuple[float, ...]
    pid_dalpha: tuple[float, ...]
    direct_dgamma: tuple[float, ...]
    pid_dgamma: tuple[float, ...]


class _ScriptedPath:
    """Constant-speed linear interpolation through global waypoints."""

    def __init__(self, points: list[GlobalCartesian], speed: float):
        self.points = points
        self.speed = speed
        self.cumulative = [0.0]
        for a, b in zip(points, points[1:]):
            self.cumulative.append(self.cumulative[-1] + a.planar_distance(b))

    def position_at(self, t: float) -> GlobalCartesian:
        if len(self.points) == 1 or self.speed == 0.0:
            return self.points[0]
        s = min(self.speed * t, self.cumulative[-1])
        for i in range(1, len(self.cumulative)):
            if s <= self.cumulative[i] or i == len(self.cumulative) - 1:
                seg = self.cumulative[i] - self.cumulative[i - 1]
                frac = 0.0 if seg == 0.0 else (s - self.cumulative[i - 1]) / seg
                a, b = self.points[i - 1], self.points[i]
                return GlobalCartesian(a.x + frac * (b.x - a.x), a.y + frac * (b.y - a.y))
        return self.points[-1]


def resolve_initial_pose(scn: Scenario) -> LightPose:
    """Scenario-declared initial pose, or the exact solution at the start position."""
    if scn.initial_light_pose is not None:
        return scn.initial_light_pose
    pose, _ = compute_light_pose(
        scn.start, scn.robot, scn.frame, scn.limits.tilt_min, scn.limits.tilt_max
    )
    return pose


class Simulation:
    """One deterministic closed-loop session over a scenario."""

    def __init__(self, scenario: Scenario):
        self.scn = scenario
        self.cfg = scenario.frame
        self.geom = scenario.robot
        self.env = scenario.environment
        self.dt = 1.0 / scenario.tick_rate
        self.control_mode = scenario.control_mode
        self.ctrl_cfg = ControllerConfig(
            frame=scenario.frame,
            gains=scenario.gains,
            limits=scenario.limits,
            plant=scenario.plant,
            plant_mode=scenario.plant_mode,
            robot_height=scenario.robot.height_h,
        )

        start_global = world_polar_to_global(scenario.start, self.cfg)
        path_points = [start_global] + [
            world_polar_to_global(w, self.cfg) for w in scenario.waypoints
        ]
        self._path = _ScriptedPath(path_points, scenario.speed)
        self._live: RobotState | None = None

        self.robot_polar = scenario.start
        self.robot_global = start_global

        pose0 = resolve_initial_pose(scenario)
        self.initial_pose = pose0
        x0 = self._measure_tip(start_global, pose0)
        self.state = ControllerState(light_pose=pose0, x_k=x0)
        self.prev_u = np.zeros(2)
        self.k = 0

    # ------------------------------------------------------------------
    # live steering (applied at the next tick boundary by the service)

    def set_command(self, heading: float | None = None, speed: float | None = None) -> None:
        live = self._ensure_live()
        if heading is not None:
            live.heading = heading
        if speed is not None:
            if speed < 0.0 or not math.isfinite(speed):
                raise ScenarioError("speed must be >= 0")
            live.speed = speed
        live.target = None

    def set_waypoint(self, point: WorldPolar, speed: float | None = None) -> None:
        live = self._ensure_live()
        live.target = world_polar_to_global(point, self.cfg)
        if speed is not None:
            live.speed = speed
        elif live.speed == 0.0:
            live.speed = self.scn.speed if self.scn.speed > 0.0 else 1.0

    def set_mode(self, mode: str) -> None:
        if mode not in (CONTROL_MODE_DIRECT, CONTROL_MODE_PID):
            raise ScenarioError(f"unknown control mode {mode!r}")
        if mode != self.control_mode:
            self.control_mode = mode
            self.state.reset_history()

    def _ensure_live(self) -> RobotState:
        if self._live is None:
            self._live = RobotState(position=self.robot_global, speed=self.scn.speed)
        return self._live

    # ------------------------------------------------------------------

    def _advance_robot(self) -> GlobalCartesian:
        if self._live is None:
            return self._path.position_at((self.k + 1) * self.dt)
        live = self._live
        step_len = live.speed * self.dt
        if live.target is not None:
            dx = live.target.x - live.position.x
            dy = live.target.y - live.position.y
            dist = math.hypot(dx, dy)
            if dist <= step_len or dist == 0.0:
                live.position = live.target
                live.target = None
            else:
                live.position = GlobalCartesian(
                    live.position.x + dx / dist * step_len,
                    live.position.y + dy / dist * step_len,
                )
        elif step_len > 0.0:
            live.position = GlobalCartesian(
                live.position.x + step_len * math.cos(live.heading),
                live.position.y + step_len * math.sin(live.heading),
            )
        return live.position

    def _clamp_to_semicircle(self, point: GlobalCartesian) -> tuple[WorldPolar, bool]:
        r, beta = global_to_world_polar(point, self.cfg)
        violated = False
        if r > self.cfg.l_w:
            r, violated = self.cfg.l_w, True
        if not 0.0 <= beta <= self.cfg.theta_w:
            # Snap to the angularly nearest rear-semicircle edge.
            to_right = abs(wrap_pi(beta))
            to_left = abs(wrap_pi(beta - self.cfg.theta_w))
            beta = 0.0 if to_right <= to_left else self.cfg.theta_w
            violated = True
        return WorldPolar(r, beta), violated

    def _measure_tip(self, robot_global: GlobalCartesian, pose: LightPose) -> np.ndarray:
        foot = project_shadow(robot_global, self.geom, pose, self.env)
        r, beta = global_to_virtual_polar(foot.tip.position, self.cfg)
        return np.array([r, beta])

    def step(self) -> TickRecord:
        """Advance one tick and return its record."""
        k = self.k
        raw_global = self._advance_robot()
        robot, violated = self._clamp_to_semicircle(raw_global)
        robot_global = world_polar_to_global(robot, self.cfg)
        if violated and self._live is not None:
            self._live.position = robot_global  # keep the live pose on the boundary

        delta_pr = np.array(
            [robot.r_w - self.robot_polar.r_w, robot.beta_w - self.robot_polar.beta_w]
        )
        setpoint = map_to_virtual(robot, self.cfg)
        limits = self.scn.limits

        if self.control_mode == CONTROL_MODE_DIRECT:
            measured = self._measure_tip(robot_global, self.state.light_pose)
            pose_new, clamped = compute_light_pose(
                robot, self.geom, self.cfg, limits.tilt_min, limits.tilt_max
            )
            u = np.array([
                pose_new.tilt_alpha - self.state.light_pose.tilt_alpha,
                wrap_pi(pose_new.pan_gamma - self.state.light_pose.pan_gamma),
            ])
            saturated = (False, False)
            self.state.light_pose = pose_new
            self.state.x_k = measured
        else:
            if self.scn.plant_mode == PLANT_MODE_GEOMETRIC:
                measured = self._measure_tip(robot_global, self.state.light_pose)
            else:
                measured = plant_step(self.state.x_k, self.prev_u, delta_pr, self.scn.plant)
            unclamped_tilt_before = self.state.light_pose.tilt_alpha
            out, pose_new = control_tick(
                setpoint, measured, delta_pr, self.state, self.ctrl_cfg, robot
            )
            u = out.u
            saturated = out.saturated
            raw_tilt = unclamped_tilt_before + float(u[0])
            clamped = not (limits.tilt_min <= raw_tilt <= limits.tilt_max)

        error = tracking_error(setpoint, measured)
        foot = project_shadow(robot_global, self.geom, pose_new, self.env)

        record = TickRecord(
            k=k,
            robot=robot,
            setpoint=setpoint,
            error=(float(error[0]), float(error[1])),
            u=(float(u[0]), float(u[1])),
            light_pose=pose_new,
            tip=foot.tip,
            footprint=foot.points,
            saturated=saturated,
            clamped=bool(clamped),
            assumption_violated=violated,
        )
        self.robot_polar = robot
        self.robot_global = robot_global
        self.prev_u = np.asarray(u, dtype=np.float64)
        self.k += 1
        return record


def compute_metrics(records: list[TickRecord], initial_pose: LightPose, cfg: FrameConfig) -> Metrics:
    """Aggregate a record stream; empty streams yield zeroed metrics."""
    if not records:
        return Metrics(0.0, 0.0, 0.0, 0.0, 0.0, 0.0, None)

    dalphas, dgammas = pose_deltas(records, initial_pose)
    errors = [math.hypot(*r.error) for r in records]
    visible = [point_in_fov(r.tip.position, cfg) for r in records]

    def rms(xs: list[float]) -> float:
        return math.sqrt(sum(x * x for x in xs) / len(xs))

    # Earliest tick from which |e| stays below the threshold through the end.
    convergence: int | None = None
    for i in range(len(errors) - 1, -1, -1):
        if errors[i] < CONVERGENCE_THRESHOLD:
            convergence = i
        else:
            break

    return Metrics(
        max_dalpha=max(dalphas),
        rms_dalpha=rms(dalphas),
        max_dgamma=max(dgammas),
        rms_dgamma=rms(dgammas),
        rms_error=rms(errors),
        visibility_fraction=sum(visible) / len(visible),
        convergence_tick=convergence,
    )


def pose_deltas(records: list[TickRecord], initial_pose: LightPose) -> tuple[list[float], list[float]]:
    """Per-tick |delta tilt| and |delta pan| of the poses the viewer sees."""
    dalphas: list[float] = []
    dgammas: list[float] = []
    prev = initial_pose
    for r in records:
        dalphas.append(abs(r.light_pose.tilt_alpha - prev.tilt_alpha))
        dgammas.append(abs(wrap_pi(r.light_pose.pan_gamma - prev.pan_gamma)))
        prev = r.light_pose
    return dalphas, dgammas


def run_scenario(scn: Scenario) -> tuple[list[TickRecord], Metrics]:
    """Deterministic full run: the record list and its metrics."""
    sim = Simulation(scn)
    records = [sim.step() for _ in range(scn.tick_count)]
    return records, compute_metrics(records, sim.initial_pose, scn.frame)


def compare_modes(scn: Scenario) -> ModeComparison:
    """Run the scenario under direct and pid control with identical robot inputs."""
    direct_records, direct_metrics = run_scenario(scn.with_control_mode(CONTROL_MODE_DIRECT))
    pid_records, pid_metrics = run_scenario(scn.with_control_mode(CONTROL_MODE_PID))
    pose0 = resolve_initial_pose(scn)
    d_dalpha, d_dgamma = pose_deltas(direct_records, pose0)
    p_dalpha, p_dgamma = pose_deltas(pid_records, pose0)
    return ModeComparison(
        direct=direct_metrics,
        pid=pid_metrics,
        direct_dalpha=tuple(d_dalpha),
        pid_dalpha=tuple(p_dalpha),
        direct_dgamma=tuple(d_dgamma),
        pid_dgamma=tuple(p_dgamma),
    )
