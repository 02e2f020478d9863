"""
Leader/follower formation guidance.

A state-feedback kinematic controller works on polar errors to a (possibly
moving) goal: the distance error ``rho``, the bearing error ``zeta`` and the
goal-heading alignment error ``epsilon``. The control law is

    u_ref = k_rho * rho + k_ff * v_ff
    r_ref = k_zeta * zeta + k_epsilon * epsilon

and its linearised closed loop is stable iff ``k_rho > 0``,
``k_epsilon < 0`` and ``k_zeta > k_rho``. Followers chase the slot point
behind their leader with a feedforward of the slot point's speed. The
leader alternates between cruise and hover modes.

Low-level gains are scheduled from a table of trim airspeeds by picking the
trim point closest to the commanded airspeed.
"""

from dataclasses import dataclass
from enum import Enum

import numpy as np

from .errors import BearingUndefinedError, ConfigurationError
from .kinematics import wrap_angle, yaw_of
from .vehicle import V_MAX, VelocityCommand

MIN_BEARING_DISTANCE = 1e-6


@dataclass(frozen=True)
class PolarErrors:
    rho: float
    zeta: float
    epsilon: float


@dataclass(frozen=True)
class GuidanceGains:
    k_rho: float = 0.1
    k_zeta: float = 0.4
    k_epsilon: float = -0.01
    k_ff: float = 1.0


@dataclass(frozen=True)
class FormationSlot:
    rho_d: float = 0.0
    zeta_d: float = 0.0
    leader_id: int = 0

    def __post_init__(self):
        if self.rho_d < 0:
            raise ConfigurationError("rho_d must be non-negative")


@dataclass(frozen=True)
class TrimGains:
    """Low-level tracking lags scheduled at one trim airspeed."""

    tau_u: float
    tau_r: float


@dataclass(frozen=True)
class TrimTable:
    airspeeds: tuple
    gains: tuple

    def __post_init__(self):
        if len(self.airspeeds) != len(self.gains):
            raise ConfigurationError("trim table airspeeds and gains differ in length")
        a = np.asarray(self.airspeeds, dtype=float)
        if a.size > 1 and np.any(np.diff(a) <= 0):
            raise ConfigurationError("trim airspeeds must be strictly increasing")

    @classmethod
    def default(cls, tau_u=4.0, tau_r=2.0):
        """74 trim points evenly spread over [0.3, 15] m/s.

        Yaw response is slower at low airspeed (less rudder authority), so
        the yaw lag grows as the trim airspeed drops.
        """
        speeds = np.linspace(0.3, 15.0, 74)
        gains = tuple(TrimGains(tau_u, tau_r * (1.0 + np.exp(-v / 2.0))) for v in speeds)
        return cls(tuple(float(v) for v in speeds), gains)


class Mode(str, Enum):
    CRUISE = "CRUISE"
    HOVER = "HOVER"


def polar_errors(follower, goal_position, goal_heading, slot=FormationSlot()):
    """Polar errors of the pose ``follower`` with respect to a goal.

    Raises
    ------
    BearingUndefinedError
        When the planar distance to the goal is below 1e-6 m; the caller
        should keep its previous bearing error.
    """
    d_n = goal_position[0] - follower.position[0]
    d_e = goal_position[1] - follower.position[1]
    dist = float(np.hypot(d_n, d_e))
    if dist < MIN_BEARING_DISTANCE:
        raise BearingUndefinedError(f"goal within {dist:.3g} m of the airship")
    psi = yaw_of(follower)
    rho = dist - slot.rho_d
    zeta = wrap_angle(-psi + np.arctan2(d_e, d_n) - slot.zeta_d)
    epsilon = wrap_angle(-psi - zeta + goal_heading)
    return PolarErrors(rho, zeta, epsilon)


def validate_gains(gains):
    return gains.k_rho > 0 and gains.k_epsilon < 0 and gains.k_zeta > gains.k_rho


def closed_loop_matrix(gains):
    k_rho, k_zeta, k_eps = gains.k_rho, gains.k_zeta, gains.k_epsilon
    return np.array([
        [-k_rho, 0.0, 0.0],
        [0.0, -(k_zeta - k_rho), -k_eps],
        [0.0, -k_rho, 0.0],
    ])


def sfkc_command(errors, gains, v_ff=0.0, v_max=V_MAX, r_max=0.2):
    if not validate_gains(gains):
        raise ConfigurationError(
            "unstable guidance gains: need k_rho > 0, k_epsilon < 0 and k_zeta > k_rho")
    u_ref = gains.k_rho * errors.rho + gains.k_ff * v_ff
    r_ref = gains.k_zeta * errors.zeta + gains.k_epsilon * errors.epsilon
    return VelocityCommand(u_ref, r_ref).clamped(v_max, r_max)


def follower_goal(leader, slot):
    """Slot point ``y_ref`` the follower should occupy (NED, leader altitude)."""
    psi = yaw_of(leader)
    n, e, d = leader.position
    return np.array([
        n - slot.rho_d * np.cos(psi + slot.zeta_d),
        e - slot.rho_d * np.sin(psi + slot.zeta_d),
        d,
    ])


def feedforward_speed(y_ref_now, y_ref_prev, ts, wind_ned=None):
    """Speed of the slot point over one sample.

    With ``wind_ned`` the speed is taken relative to the air mass, which is
    what an airspeed command has to match.
    """
    if not ts > 0:
        raise ConfigurationError(f"sampling time must be positive, got {ts}")
    diff = np.asarray(y_ref_now, dtype=float)[:2] - np.asarray(y_ref_prev, dtype=float)[:2]
    v = diff / ts
    if wind_ned is not None:
        v = v - np.asarray(wind_ned, dtype=float)[:2]
    return float(np.hypot(v[0], v[1]))


def trim_minimization(u_ref, table):
    """Gains of the trim point nearest ``u_ref``; ties go to the lower index."""
    if len(table.airspeeds) == 0:
        raise ConfigurationError("trim table is empty")
    gaps = np.abs(u_ref - np.asarray(table.airspeeds, dtype=float))
    idx = int(np.argmin(gaps))
    return table.gains[idx], idx


def hover_heading(current_yaw, wind_ned):
    """Heading that faces into the wind; hold ``current_yaw`` in calm air."""
    w_n, w_e = float(wind_ned[0]), float(wind_ned[1])
    if w_n == 0.0 and w_e == 0.0:
        return current_yaw
    return wrap_angle(np.arctan2(-w_e, -w_n))


def guidance_mode(pose, goal, hover_radius, wind_ned):
    """Pick CRUISE or HOVER from the planar distance to ``goal``.

    Returns ``(mode, heading_ref)``; ``heading_ref`` is only meaningful in
    HOVER, where it points into the wind.
    """
    if not hover_radius > 0:
        raise ConfigurationError("hover radius must be positive")
    dist = float(np.hypot(goal[0] - pose.position[0], goal[1] - pose.position[1]))
    if dist > hover_radius:
        return Mode.CRUISE, None
    return Mode.HOVER, hover_heading(yaw_of(pose), wind_ned)


def hover_command(pose, heading_ref, gains, r_max=0.2):
    """Zero airspeed and a proportional turn toward ``heading_ref``."""
    err = wrap_angle(heading_ref - yaw_of(pose))
    return VelocityCommand(0.0, gains.k_zeta * err).clamped(V_MAX, r_max)


def follower_command(pose, slot_point, leader_heading, gains, v_ff, v_max=V_MAX, r_max=0.2,
                     slot_radius=1.0, lookahead=20.0):
    """SFKC for a follower chasing a moving slot.

    Heading is steered by the polar law toward a carrot ``lookahead`` metres
    ahead of the slot along the leader's heading, which bounds the loop gain
    on lateral offsets near the slot. Speed is feedforward plus the
    along-track error, so a follower that overran its slot slows down
    instead of turning back. Inside ``slot_radius`` rotation is frozen.

    Returns the command and the polar errors toward the carrot.
    """
    if not validate_gains(gains):
        raise ConfigurationError(
            "unstable guidance gains: need k_rho > 0, k_epsilon < 0 and k_zeta > k_rho")
    h = np.array([np.cos(leader_heading), np.sin(leader_heading)])
    offset = np.asarray(slot_point, dtype=float)[:2] - pose.position[:2]
    along = float(offset @ h)
    carrot = np.asarray(slot_point, dtype=float).copy()
    carrot[:2] += lookahead * h
    errors = polar_errors(pose, carrot, leader_heading)
    u_ref = gains.k_ff * v_ff + gains.k_rho * along
    if np.hypot(offset[0], offset[1]) <= slot_radius:
        r_ref = 0.0
    elif np.cos(errors.zeta) >= 0.0:
        r_ref = gains.k_zeta * errors.zeta + gains.k_epsilon * errors.epsilon
    else:
        # carrot behind: zeta + epsilon is the heading error to the leader
        r_ref = gains.k_zeta * wrap_angle(errors.zeta + errors.epsilon)
    return VelocityCommand(max(u_ref, 0.0), r_ref).clamped(v_max, r_max), errors
