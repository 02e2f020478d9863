"""
Pseudo-kinematic airship plant.

The airship is a unicycle flying at a fixed altitude. Surge airspeed and
yaw rate follow their references through first-order lags and are
saturated; there is no lateral actuation, so the airspeed vector lies along
the body x axis and any lateral ground motion comes from the wind. Ground
velocity is airspeed plus wind.
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvalidStateError
from .kinematics import (
    Pose,
    body_to_ned,
    integrate_pose,
    relative_airspeed,
    wind_state,
    wrap_angle,
    yaw_of,
)

V_MAX = 15.0


@dataclass(frozen=True)
class VehicleParams:
    tau_u: float = 4.0
    tau_r: float = 2.0
    v_max: float = V_MAX
    r_max: float = 0.2
    altitude: float = 50.0

    def __post_init__(self):
        if not self.tau_u > 0 or not self.tau_r > 0:
            raise ConfigurationError("lag time constants must be positive")
        if not 0.0 < self.v_max <= V_MAX:
            raise ConfigurationError(f"v_max must lie in (0, {V_MAX}] m/s")
        if not self.r_max > 0:
            raise ConfigurationError("r_max must be positive")


@dataclass(frozen=True)
class VelocityCommand:
    """Surge airspeed reference (m/s) and yaw-rate reference (rad/s)."""

    u_ref: float = 0.0
    r_ref: float = 0.0

    def as_vector(self):
        """The 6-vector ``[u_ref, 0, 0, 0, 0, r_ref]`` sent to the airship."""
        return np.array([self.u_ref, 0.0, 0.0, 0.0, 0.0, self.r_ref])

    def clamped(self, v_max, r_max):
        return VelocityCommand(float(np.clip(self.u_ref, 0.0, v_max)),
                               float(np.clip(self.r_ref, -r_max, r_max)))


@dataclass
class AirshipState:
    pose: Pose
    body_velocity: np.ndarray = field(default_factory=lambda: np.zeros(6))
    commanded: VelocityCommand = field(default_factory=VelocityCommand)
    id: int = 0
    # surge airspeed and yaw rate carried by the lags
    airspeed: np.ndarray = field(default_factory=lambda: np.zeros(6))

    def __post_init__(self):
        self.body_velocity = np.asarray(self.body_velocity, dtype=float).reshape(6)
        self.airspeed = np.asarray(self.airspeed, dtype=float).reshape(6)

    @classmethod
    def at_rest(cls, pose, airship_id=0, airspeed=0.0, wind_ned=(0.0, 0.0, 0.0)):
        x_a = np.array([airspeed, 0.0, 0.0, 0.0, 0.0, 0.0])
        x_w = wind_state(pose, _horizontal(wind_ned))
        return cls(pose=pose, body_velocity=x_a + x_w, commanded=VelocityCommand(airspeed, 0.0),
                   id=airship_id, airspeed=x_a)

    @property
    def yaw(self):
        return yaw_of(self.pose)

    def ground_velocity_ned(self):
        return body_to_ned(self.pose.attitude) @ self.body_velocity[:3]


def _horizontal(wind_ned):
    w = np.asarray(wind_ned, dtype=float).copy()
    w[2] = 0.0
    return w


def step_vehicle(state, cmd, wind_ned, params, dt):
    """Advance one airship by ``dt`` seconds.

    ``wind_ned`` is the constant inertial wind vector; its vertical part is
    ignored because altitude is held.
    """
    if not (0.0 < dt <= 1.0):
        raise ConfigurationError(f"dt must lie in (0, 1] s, got {dt}")
    cmd = cmd.clamped(params.v_max, params.r_max)
    u_a, r = state.airspeed[0], state.airspeed[5]
    u_a = float(np.clip(u_a + dt / params.tau_u * (cmd.u_ref - u_a), 0.0, params.v_max))
    r = float(np.clip(r + dt / params.tau_r * (cmd.r_ref - r), -params.r_max, params.r_max))
    x_a = np.array([u_a, 0.0, 0.0, 0.0, 0.0, r])

    wind = _horizontal(wind_ned)
    x = x_a + wind_state(state.pose, wind)
    pose = integrate_pose(state.pose, x, dt)
    pose.position[2] = -params.altitude

    # re-express the ground velocity in the new body axes
    body_velocity = x_a + wind_state(pose, wind)
    return AirshipState(pose=pose, body_velocity=body_velocity, commanded=cmd,
                        id=state.id, airspeed=x_a)


def true_airspeed(state, x_w):
    """Norm of the linear airspeed of ``state`` under body-frame wind ``x_w``."""
    x_a = relative_airspeed(state.body_velocity, x_w)
    return float(np.linalg.norm(x_a[:3]))


def sideslip(state, x_w):
    """Sideslip angle atan2(v_a, u_a) in rad (0 when the airship is still)."""
    x_a = relative_airspeed(state.body_velocity, x_w)
    if abs(x_a[0]) < 1e-12 and abs(x_a[1]) < 1e-12:
        return 0.0
    return float(np.arctan2(x_a[1], x_a[0]))


def velocity_to_command(state, v_des_ned, wind_ned, params, k_heading=0.5):
    """Turn a desired planar ground velocity into an airspeed/yaw-rate command.

    The wind is subtracted first so the command is an airspeed; the yaw rate
    is proportional to the heading error and surge is scaled by the cosine of
    that error (no forward motion while facing away).
    """
    v_air = np.asarray(v_des_ned, dtype=float)[:2] - _horizontal(wind_ned)[:2]
    speed = float(np.hypot(v_air[0], v_air[1]))
    if speed < 1e-3:
        return VelocityCommand(0.0, 0.0)
    err = wrap_angle(np.arctan2(v_air[1], v_air[0]) - state.yaw)
    u_ref = min(speed, params.v_max) * max(np.cos(err), 0.0)
    return VelocityCommand(u_ref, k_heading * err).clamped(params.v_max, params.r_max)


def check_state(state, params):
    """Raise if ``state`` breaks the airspeed or yaw-rate envelope."""
    if not np.all(np.isfinite(state.body_velocity)):
        raise InvalidStateError("non-finite body velocity")
    v_t = float(np.linalg.norm(state.airspeed[:3]))
    if v_t > params.v_max + 1e-9:
        raise InvalidStateError(f"airspeed {v_t} exceeds {params.v_max}")
    if abs(state.airspeed[5]) > params.r_max + 1e-12:
        raise InvalidStateError("yaw rate exceeds r_max")
