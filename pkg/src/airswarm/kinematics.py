"""
Reference frames and quaternion kinematics for a rigid airship.

Conventions
-----------
- Inertial frame is NED (North, East, Down); positions in metres.
- Quaternions are scalar first, ``q = [w, x, y, z]``, and rotate body-frame
  vectors into the NED frame.
- A body velocity is the 6-vector ``x = [u, v, w, p, q, r]`` (linear m/s,
  angular rad/s), a wind state the 6-vector ``[u_w, v_w, w_w, 0, 0, 0]``.
- Yaw is measured from North, positive toward East, wrapped to (-pi, pi].
"""

from dataclasses import dataclass, field

import numpy as np

from .errors import ConfigurationError, InvalidStateError

UNIT_TOL = 1e-6


def wrap_angle(a):
    """Wrap an angle (scalar or array) to (-pi, pi]."""
    w = np.mod(np.asarray(a, dtype=float) + np.pi, 2.0 * np.pi) - np.pi
    w = np.where(w <= -np.pi, w + 2.0 * np.pi, w)
    return float(w) if np.ndim(w) == 0 else w


def quat_multiply(q1, q2):
    w1, x1, y1, z1 = q1
    w2, x2, y2, z2 = q2
    return np.array([
        w1 * w2 - x1 * x2 - y1 * y2 - z1 * z2,
        w1 * x2 + x1 * w2 + y1 * z2 - z1 * y2,
        w1 * y2 - x1 * z2 + y1 * w2 + z1 * x2,
        w1 * z2 + x1 * y2 - y1 * x2 + z1 * w2,
    ])


def quat_normalize(q):
    q = np.asarray(q, dtype=float)
    n = np.linalg.norm(q)
    if not np.isfinite(n) or n == 0.0:
        raise InvalidStateError(f"cannot normalize quaternion {q}")
    return q / n


def _check_unit(q):
    n = float(np.linalg.norm(q))
    if abs(n - 1.0) > UNIT_TOL:
        raise InvalidStateError(f"quaternion norm {n:.9g} deviates from 1")


def quat_from_yaw(psi):
    """Quaternion for a pure rotation of ``psi`` about the Down axis."""
    return np.array([np.cos(psi / 2.0), 0.0, 0.0, np.sin(psi / 2.0)])


def quat_matrix(q):
    """The 4x4 matrix Q with ``Q @ [0, w] == q (x) [0, w]``.

    Its columns are orthonormal for a unit ``q``, so ``Q`` is orthogonal.
    """
    w, x, y, z = q
    return np.array([
        [w, -x, -y, -z],
        [x, w, -z, y],
        [y, z, w, -x],
        [z, -y, x, w],
    ])


def body_to_ned(q):
    """Rotation matrix taking body-frame vectors to NED (the transpose of S)."""
    w, x, y, z = q
    return np.array([
        [w * w + x * x - y * y - z * z, 2 * (x * y - w * z), 2 * (w * y + x * z)],
        [2 * (w * z + x * y), w * w - x * x + y * y - z * z, 2 * (y * z - w * x)],
        [2 * (x * z - w * y), 2 * (y * z + w * x), w * w - x * x - y * y + z * z],
    ])


def quaternion_rate(q, omega):
    """Quaternion derivative ``0.5 * Q @ [0, omega]`` for body rates ``omega``.

    Raises
    ------
    InvalidStateError
        If ``q`` is not unit within 1e-6.
    """
    q = np.asarray(q, dtype=float)
    _check_unit(q)
    return 0.5 * quat_matrix(q) @ np.concatenate(([0.0], np.asarray(omega, dtype=float)))


@dataclass
class Pose:
    """NED position (m) and body-to-NED attitude quaternion."""

    position: np.ndarray = field(default_factory=lambda: np.zeros(3))
    attitude: np.ndarray = field(default_factory=lambda: np.array([1.0, 0.0, 0.0, 0.0]))

    def __post_init__(self):
        self.position = np.asarray(self.position, dtype=float).reshape(3)
        self.attitude = np.asarray(self.attitude, dtype=float).reshape(4)

    @classmethod
    def from_yaw(cls, north, east, down, psi):
        return cls(np.array([north, east, down], dtype=float), quat_from_yaw(psi))

    def copy(self):
        return Pose(self.position.copy(), self.attitude.copy())


def pose_rate(pose, x):
    """Time derivative of the 7-vector pose ``[p, q]`` for body velocity ``x``.

    The position part is the body linear velocity rotated into NED; the
    attitude part is :func:`quaternion_rate` of the body angular rates.
    """
    x = np.asarray(x, dtype=float)
    q = pose.attitude
    _check_unit(q)
    p_dot = body_to_ned(q) @ x[:3]
    q_dot = 0.5 * quat_matrix(q) @ np.concatenate(([0.0], x[3:6]))
    return np.concatenate((p_dot, q_dot))


def integrate_pose(pose, x, dt):
    """One explicit Euler step of :func:`pose_rate`, then renormalize."""
    if not (0.0 < dt <= 1.0):
        raise ConfigurationError(f"dt must lie in (0, 1] s, got {dt}")
    eta_dot = pose_rate(pose, x)
    position = pose.position + dt * eta_dot[:3]
    attitude = quat_normalize(pose.attitude + dt * eta_dot[3:])
    return Pose(position, attitude)


def yaw_of(pose):
    """Heading of ``pose`` in (-pi, pi]."""
    w, x, y, z = pose.attitude
    return wrap_angle(np.arctan2(2.0 * (w * z + x * y), 1.0 - 2.0 * (y * y + z * z)))


def wind_state(pose, wind_ned):
    """Rotate a constant NED wind vector into the body frame of ``pose``."""
    v_body = body_to_ned(pose.attitude).T @ np.asarray(wind_ned, dtype=float)
    return np.concatenate((v_body, np.zeros(3)))


def relative_airspeed(x, x_w):
    """Airspeed vector ``x_a = x - x_w``; ``x_w`` has zero angular part."""
    x = np.asarray(x, dtype=float)
    x_w = np.asarray(x_w, dtype=float)
    if np.any(x_w[3:] != 0.0):
        raise InvalidStateError("wind state must have zero angular components")
    return x - x_w
