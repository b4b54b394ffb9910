"""shadowsim: project an out-of-view robot into a human's AR field of view as a virtual shadow.

The pipeline per tick: map the robot's rear-semicircle position to a
shadow-tip setpoint inside the FOV sector, solve or smooth the directional
light pose that casts the shadow there, and project the silhouette onto a
height-field environment.
"""

from .controller import (
    ControlOutput,
    ControllerConfig,
    ControllerLimits,
    ControllerState,
    PidGains,
    PlantParams,
    control_tick,
    pid_step,
    plant_step,
)
from .errors import (
    ControllerInputError,
    DegenerateGeometryError,
    DomainError,
    EmptyFootprintError,
    HeightFieldError,
    ProtocolError,
    ScenarioError,
    ShadowSimError,
)
from .geometry import (
    FrameConfig,
    GlobalCartesian,
    VirtualPolar,
    WorldPolar,
    map_to_virtual,
    shadow_robot_distance,
    virtual_polar_to_global,
    world_polar_to_global,
)
from .heightfield import (
    HeightField,
    ShadowFootprint,
    SurfacePoint,
    flat_field,
    load_heightfield,
    project_shadow,
    raycast,
)
from .light import (
    LightPose,
    RobotGeometry,
    compute_light_pose,
    compute_pan,
    compute_tilt,
    forward_project_flat,
)
from .scenario import Scenario, load_scenario, scenario_from_dict
from .sim import (
    Metrics,
    ModeComparison,
    Simulation,
    TickRecord,
    compare_modes,
    compute_metrics,
    run_scenario,
)

__version__ = "0.1.0"
