"""
Mission orchestration: waypoint lists with hover points, moving targets and
the goal each controller is fed.
"""

from dataclasses import dataclass, field, replace
from enum import Enum
from functools import cached_property

import numpy as np

from .errors import ConfigurationError
from .formation import FormationSlot, follower_goal
from .kinematics import yaw_of
from .rng import TARGET_STREAM, SubstreamRNG

MAX_TARGET_SPEED = 8.0


class Approach(str, Enum):
    FORMATION = "formation"
    BOIDS = "boids"
    RPSO = "rpso"


@dataclass(frozen=True)
class Waypoint:
    position: tuple
    hover: bool = False
    hover_radius: float = 20.0
    hover_duration: float = 0.0

    def __post_init__(self):
        object.__setattr__(self, "position", tuple(float(x) for x in self.position))
        if not self.hover_radius > 0:
            raise ConfigurationError("hover_radius must be positive")
        if self.hover_duration < 0:
            raise ConfigurationError("hover_duration must be non-negative")


@dataclass(frozen=True)
class ScriptedTarget:
    """Target moving along a polyline at constant speed, then stopping."""

    path: tuple
    speed: float

    def __post_init__(self):
        object.__setattr__(self, "path", tuple(tuple(float(c) for c in p) for p in self.path))
        if len(self.path) < 1:
            raise ConfigurationError("target path needs at least one point")
        if not 0 <= self.speed <= MAX_TARGET_SPEED:
            raise ConfigurationError(f"target speed must lie in [0, {MAX_TARGET_SPEED}] m/s")

    def position(self, t):
        pts = np.array(self.path, dtype=float)
        pts = np.hstack([pts, np.zeros((len(pts), 3 - pts.shape[1]))])
        s = self.speed * t
        for a, b in zip(pts[:-1], pts[1:]):
            seg = float(np.linalg.norm(b - a))
            if s <= seg:
                return a + (b - a) * (s / seg) if seg > 0 else a.copy()
            s -= seg
        return pts[-1].copy()

    def heading(self, t):
        p0, p1 = self.position(t), self.position(t + 1.0)
        if np.allclose(p0[:2], p1[:2]):
            p0 = self.position(max(t - 1.0, 0.0))
            p1 = self.position(t)
        return float(np.arctan2(p1[1] - p0[1], p1[0] - p0[0]))


@dataclass(frozen=True)
class RandomWalkTarget:
    """Constant-speed target with a bounded random turn rate.

    Time is cut into segments of ``segment_s`` seconds. On each segment the
    turn rate is constant, so the path is a chain of circular arcs and the
    speed is exact. The turn rate follows
    ``w_k = clip(decay * w_{k-1} + sigma * n_k, -w_max, w_max)`` with
    ``n_k`` standard normal, drawn from the target's own substream.
    """

    start: tuple
    heading0: float
    speed: float
    seed: int = 0
    turn_sigma: float = 0.02
    turn_max: float = 0.05
    decay: float = 0.9
    segment_s: float = 1.0

    def __post_init__(self):
        object.__setattr__(self, "start", tuple(float(c) for c in self.start) + (0.0,) * (3 - len(self.start)))
        if not 0 <= self.speed <= MAX_TARGET_SPEED:
            raise ConfigurationError(f"target speed must lie in [0, {MAX_TARGET_SPEED}] m/s")
        if not self.segment_s > 0:
            raise ConfigurationError("segment_s must be positive")

    @cached_property
    def _nodes(self):
        # (n, e, psi) at every segment start and the turn rate on each segment
        return [(self.start[0], self.start[1], self.heading0)], []

    def _segment(self, t):
        k = int(t // self.segment_s)
        nodes, rates = self._nodes
        rng = SubstreamRNG(self.seed)
        while len(rates) <= k:
            j = len(rates)
            w_prev = rates[-1] if rates else 0.0
            w = float(np.clip(self.decay * w_prev + self.turn_sigma * rng.normals(TARGET_STREAM, j)[0],
                              -self.turn_max, self.turn_max))
            rates.append(w)
            nodes.append(_arc(*nodes[j], w, self.speed, self.segment_s))
        return (*nodes[k], rates[k]), t - k * self.segment_s

    def position(self, t):
        (n, e, psi, w), tau = self._segment(t)
        n1, e1, _ = _arc(n, e, psi, w, self.speed, tau)
        return np.array([n1, e1, self.start[2]])

    def heading(self, t):
        (_, _, psi, w), tau = self._segment(t)
        return float(psi + w * tau)


def _arc(n, e, psi, w, speed, tau):
    if abs(w) < 1e-12:
        return n + speed * tau * np.cos(psi), e + speed * tau * np.sin(psi), psi
    psi1 = psi + w * tau
    radius = speed / w
    return (n + radius * (np.sin(psi1) - np.sin(psi)),
            e - radius * (np.cos(psi1) - np.cos(psi)),
            psi1)


def target_position(model, t):
    if t < 0:
        raise ConfigurationError("time must be non-negative")
    return model.position(t)


@dataclass
class MissionState:
    index: int = 0
    hover_timer: float = 0.0
    modes: dict = field(default_factory=dict)
    complete: bool = False


def advance_waypoint(mission, position, waypoints, dt):
    """Progress the waypoint index from the tracked position.

    Inside a waypoint's radius a hover waypoint accumulates in-radius time
    and is released after ``hover_duration``; a plain waypoint is released
    at once. Passing the last waypoint marks the mission complete.
    """
    if not waypoints:
        raise ConfigurationError("waypoint list is empty")
    if mission.complete:
        return mission
    wp = waypoints[mission.index]
    dist = float(np.hypot(wp.position[0] - position[0], wp.position[1] - position[1]))
    if dist > wp.hover_radius:
        return mission
    timer = mission.hover_timer + dt if wp.hover else 0.0
    if wp.hover and timer < wp.hover_duration - 1e-9:
        return replace(mission, hover_timer=timer)
    index = mission.index + 1
    if index >= len(waypoints):
        return replace(mission, index=len(waypoints) - 1, hover_timer=0.0, complete=True)
    return replace(mission, index=index, hover_timer=0.0)


def leg_heading(waypoints, index, start):
    """Bearing of the leg arriving at ``waypoints[index]``."""
    prev = np.asarray(start if index == 0 else waypoints[index - 1].position, dtype=float)
    cur = np.asarray(waypoints[index].position, dtype=float)
    return float(np.arctan2(cur[1] - prev[1], cur[0] - prev[0]))


@dataclass(frozen=True)
class Goal:
    """What a controller steers toward.

    ``kind`` is ``"point"`` (SFKC goal), ``"member"`` (fictional Boids
    member with zero velocity) or ``"target"`` (RPSO distance reference).
    """

    kind: str
    position: np.ndarray
    heading: float = 0.0


def goal_for(approach, airship_id, point, heading, slots=None, poses=None):
    """Goal of one airship given the current mission point.

    ``point``/``heading`` are the active waypoint or target position and its
    heading. Formation followers ignore them and chase their slot behind
    the leader, whose pose is looked up in ``poses``.
    """
    approach = Approach(approach)
    point = np.asarray(point, dtype=float)
    if approach is Approach.BOIDS:
        return Goal("member", point)
    if approach is Approach.RPSO:
        return Goal("target", point)
    slot = (slots or {}).get(airship_id)
    if slot is None:
        return Goal("point", point, heading)
    leader = poses[slot.leader_id]
    return Goal("point", follower_goal(leader, slot), yaw_of(leader))


def v_formation(n_airships, rho_d=20.0, zeta_d=np.pi / 4, leader_id=0):
    """Slots of a V behind ``leader_id``: followers alternate left/right, rank by rank."""
    slots = {}
    others = [i for i in range(n_airships) if i != leader_id]
    for k, i in enumerate(others):
        rank = k // 2 + 1
        side = 1.0 if k % 2 == 0 else -1.0
        slots[i] = FormationSlot(rho_d * rank, side * zeta_d, leader_id)
    return slots


def hexagon_formation(rho_d=20.0, leader_id=0):
    """Six followers on a regular hexagon of radius ``rho_d`` around the leader."""
    return {leader_id + 1 + k: FormationSlot(rho_d, np.pi / 6 + k * np.pi / 3, leader_id)
            for k in range(6)}
