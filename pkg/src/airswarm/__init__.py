"""Guidance and swarm control for small fleets of robotic airships."""

from .boids import BoidsParams, boids_step_swarm, boids_update, boids_velocities
from .entropy import EntropyResult, cluster_entropy_at, total_entropy
from .errors import (
    AirswarmError,
    BearingUndefinedError,
    ConfigurationError,
    InvalidStateError,
    ScenarioError,
    SimulationAborted,
    UndefinedRuleError,
)
from .formation import (
    FormationSlot,
    GuidanceGains,
    Mode,
    PolarErrors,
    TrimTable,
    closed_loop_matrix,
    polar_errors,
    sfkc_command,
    trim_minimization,
    validate_gains,
)
from .kinematics import Pose, integrate_pose
from .metrics import MetricsSummary, compute_metrics
from .mission import Approach, RandomWalkTarget, ScriptedTarget, Waypoint
from .rpso import RpsoParams, RpsoSwarm, rpso_step
from .scenario import Scenario, load_scenario
from .sim import Trace, run_simulation
from .vehicle import AirshipState, VehicleParams, VelocityCommand, step_vehicle

__version__ = "0.1.0"
