"""
Reynolds flocking: repulsion, velocity mimicking and attraction.

Positions and velocities are ``(N, 3)`` arrays; all rules read the previous
tick only, so the update is synchronous and independent of agent order.
A waypoint can join the flock as a fictional, motionless member: it takes
part in repulsion and attraction but not in mimicking, where its zero
velocity would only brake the flock.
"""

import math
from dataclasses import dataclass

import numpy as np

from .errors import ConfigurationError, UndefinedRuleError


@dataclass(frozen=True)
class BoidsParams:
    delta: float = 0.6
    k_r: float = 2.0
    k_m: float = 0.5
    k_a: float = 0.5
    d_lim: float = 15.0
    v_max: float = 15.0

    def __post_init__(self):
        if not 0.0 <= self.delta <= 1.0:
            raise ConfigurationError("delta must lie in [0, 1]")
        if min(self.k_r, self.k_m, self.k_a) < 0:
            raise ConfigurationError("rule weights must be non-negative")
        if not self.d_lim > 0:
            raise ConfigurationError("d_lim must be positive")
        if not self.v_max > 0:
            raise ConfigurationError("v_max must be positive")


def clamp_speed(v, v_max):
    v = np.asarray(v, dtype=float)
    speed = np.linalg.norm(v, axis=-1, keepdims=True)
    scale = np.where(speed > v_max, v_max / np.where(speed > 0, speed, 1.0), 1.0)
    return v * scale


def _exact_sum(rows):
    # correctly rounded per column, so the result never depends on row order
    rows = np.asarray(rows, dtype=float)
    return np.array([math.fsum(col) for col in rows.T])


def repulsion_velocity(i, positions, d_lim):
    """Mean offset away from the members within ``d_lim`` of member ``i``.

    The neighbour set includes ``i`` itself, whose offset is zero, so the
    divisor ``N' - 1`` counts true neighbours. An isolated member gets zero.
    """
    p = np.asarray(positions, dtype=float)
    offsets = p[i] - p
    dist = np.linalg.norm(offsets, axis=1)
    mask = dist <= d_lim
    n_prime = int(np.count_nonzero(mask))
    if n_prime <= 1:
        return np.zeros(p.shape[1])
    mask[i] = False
    return _exact_sum(offsets[mask]) / (n_prime - 1)


def mimic_velocity(i, velocities):
    v = np.asarray(velocities, dtype=float)
    n = len(v)
    if n < 2:
        raise UndefinedRuleError("mimicking needs at least two members")
    return _exact_sum(np.delete(v, i, axis=0)) / (n - 1)


def attraction_velocity(i, positions):
    p = np.asarray(positions, dtype=float)
    n = len(p)
    if n < 2:
        raise UndefinedRuleError("attraction needs at least two members")
    return -p[i] + _exact_sum(np.delete(p, i, axis=0)) / (n - 1)


def boids_update(i, positions, velocities, params, mimic_count=None):
    """New velocity of member ``i`` as a weighted average of the three rules.

    Only the first ``mimic_count`` members (default: all) take part in
    mimicking; the rest are fictional members.
    """
    n_real = len(velocities) if mimic_count is None else mimic_count
    v_r = repulsion_velocity(i, positions, params.d_lim)
    v_m = mimic_velocity(i, velocities[:n_real])
    v_a = attraction_velocity(i, positions)
    v = params.delta * velocities[i] + (1.0 - params.delta) * (
        params.k_r * v_r + params.k_m * v_m + params.k_a * v_a)
    return clamp_speed(v, params.v_max)


def boids_velocities(positions, velocities, params, waypoint=None):
    """Synchronous velocity update of every real member."""
    p = np.asarray(positions, dtype=float)
    v = np.asarray(velocities, dtype=float)
    n = len(p)
    if n < 2:
        raise UndefinedRuleError("a flock needs at least two real members")
    if waypoint is not None:
        p = np.vstack([p, np.asarray(waypoint, dtype=float).reshape(1, -1)])
        v = np.vstack([v, np.zeros((1, v.shape[1]))])
    return np.array([boids_update(i, p, v, params, mimic_count=n) for i in range(n)])


def boids_step_swarm(positions, velocities, params, waypoint=None, dt=0.1):
    """Update every velocity from the previous tick, then move ``p += v dt``.

    Returns the new ``(positions, velocities)``.
    """
    new_v = boids_velocities(positions, velocities, params, waypoint)
    return np.asarray(positions, dtype=float) + new_v * dt, new_v
