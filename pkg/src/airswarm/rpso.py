"""
Robotic Particle Swarm Optimization (RPSO).

Each robot is a particle. Its fitness combines the swarm's social entropy
``S`` and its own distance ``d`` to the target through two Gaussians,

    f = (k_S exp(-S^2 / 2 R_S^2))^2 + (k_d exp(-d^2 / 2 R_d^2))^2,

which is maximised. The velocity reference blends inertia with pulls toward
the personal best, the swarm's best personal best and a repulsion point
that steers away from robots closer than the collision threshold.

Personal bests are re-scored every step against the current target, so a
moving target invalidates stale bests. The entropy term of a stored best
is the swarm entropy at the moment it was recorded; with a static target a
stored fitness therefore never changes and the best fitness of every robot
is non-decreasing.
"""

from dataclasses import dataclass, field, replace

import numpy as np

from .boids import clamp_speed
from .entropy import total_entropy
from .errors import ConfigurationError


def _axis(v):
    return tuple(float(x) for x in np.broadcast_to(np.asarray(v, dtype=float), (3,)))


@dataclass(frozen=True)
class RpsoParams:
    a: tuple = (0.7, 0.7, 0.7)
    b1: tuple = (1.4, 1.4, 1.4)
    b2: tuple = (1.4, 1.4, 1.4)
    b3: tuple = (1.0, 1.0, 1.0)
    k_S: float = 1.0
    k_d: float = 1.0
    R_S: float = 100.0
    R_d: float = 150.0
    collision_threshold: float = 10.0
    v_max: float = 15.0

    def __post_init__(self):
        for name in ("a", "b1", "b2", "b3"):
            object.__setattr__(self, name, _axis(getattr(self, name)))
        if self.k_S < 0 or self.k_d < 0:
            raise ConfigurationError("k_S and k_d must be non-negative")
        if not self.R_S > 0 or not self.R_d > 0:
            raise ConfigurationError("R_S and R_d must be positive")
        if not self.collision_threshold > 0:
            raise ConfigurationError("collision_threshold must be positive")


@dataclass
class RpsoSwarm:
    positions: np.ndarray
    velocities: np.ndarray
    best_positions: np.ndarray
    best_fitness: np.ndarray
    best_entropy: np.ndarray
    ids: tuple
    step: int = 0
    fitness: np.ndarray = field(default=None)

    @classmethod
    def start(cls, positions, velocities, target, params, ids=None):
        """Swarm whose personal bests are the starting positions."""
        p = np.array(positions, dtype=float)
        v = np.array(velocities, dtype=float)
        n = len(p)
        ids = tuple(range(n)) if ids is None else tuple(int(i) for i in ids)
        s = total_entropy(p).S
        f = np.array([fitness(distance_to_target(x, target), s, params) for x in p])
        return cls(p, v, p.copy(), f, np.full(n, s), ids, 0, f.copy())


def distance_to_target(p_i, p_tar):
    return float(np.linalg.norm(np.asarray(p_i, dtype=float) - np.asarray(p_tar, dtype=float)))


def fitness(d, s, params):
    gamma_s = params.k_S * np.exp(-s * s / (2.0 * params.R_S ** 2))
    gamma_d = params.k_d * np.exp(-d * d / (2.0 * params.R_d ** 2))
    return float(gamma_s ** 2 + gamma_d ** 2)


def obstacle_repulsion_point(i, positions, threshold):
    """Point whose offset from robot ``i`` is the mean push away from close robots."""
    p = np.asarray(positions, dtype=float)
    offsets = p[i] - p
    close = np.linalg.norm(offsets, axis=1) <= threshold
    close[i] = False
    count = int(np.count_nonzero(close))
    if count == 0:
        return p[i].copy()
    return p[i] + offsets[close].sum(axis=0) / max(1, count)


def rpso_velocity_update(x, v, p_pb, p_nb, p_obs, params, r):
    """New velocity reference; ``r`` holds the three uniform draws."""
    a, b1, b2, b3 = (np.asarray(getattr(params, k)) for k in ("a", "b1", "b2", "b3"))
    r1, r2, r3 = r
    x = np.asarray(x, dtype=float)
    v_new = (a * v
             + b1 * r1 * (np.asarray(p_pb) - x)
             + b2 * r2 * (np.asarray(p_nb) - x)
             + b3 * r3 * (np.asarray(p_obs) - x))
    return clamp_speed(v_new, params.v_max)


def update_bests(swarm, target, params):
    """Re-score stored bests against ``target`` and adopt better current positions."""
    s_now = total_entropy(swarm.positions).S
    best_pos = swarm.best_positions.copy()
    best_fit = swarm.best_fitness.copy()
    best_ent = swarm.best_entropy.copy()
    current = np.empty(len(best_fit))
    for i in range(len(best_fit)):
        best_fit[i] = fitness(distance_to_target(best_pos[i], target), best_ent[i], params)
        current[i] = fitness(distance_to_target(swarm.positions[i], target), s_now, params)
        if current[i] >= best_fit[i]:
            best_fit[i] = current[i]
            best_pos[i] = swarm.positions[i]
            best_ent[i] = s_now
    return replace(swarm, best_positions=best_pos, best_fitness=best_fit,
                   best_entropy=best_ent, fitness=current)


def neighbourhood_best(swarm):
    """Best personal best over the whole swarm; ties go to the lowest robot id."""
    order = np.lexsort((np.asarray(swarm.ids), -swarm.best_fitness))
    k = int(order[0])
    return swarm.best_positions[k], float(swarm.best_fitness[k])


def rpso_velocities(swarm, target, params, rng):
    """Bookkeeping plus velocity references for every robot.

    Returns the swarm with refreshed bests and the ``(N, 3)`` references.
    """
    if len(swarm.positions) < 2:
        raise ConfigurationError("RPSO needs at least two robots")
    swarm = update_bests(swarm, target, params)
    p_nb, _ = neighbourhood_best(swarm)
    v_ref = np.empty_like(swarm.velocities)
    for i, robot_id in enumerate(swarm.ids):
        p_obs = obstacle_repulsion_point(i, swarm.positions, params.collision_threshold)
        r = rng.uniforms(robot_id, swarm.step, 3)
        v_ref[i] = rpso_velocity_update(swarm.positions[i], swarm.velocities[i],
                                        swarm.best_positions[i], p_nb, p_obs, params, r)
    return swarm, v_ref


def rpso_step(swarm, target, params, rng, dt):
    """One full RPSO tick: bests, velocities, then ``x += v dt``."""
    swarm, v_ref = rpso_velocities(swarm, target, params, rng)
    return replace(swarm, positions=swarm.positions + v_ref * dt, velocities=v_ref,
                   step=swarm.step + 1)
