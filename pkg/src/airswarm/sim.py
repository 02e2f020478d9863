"""
Fixed-step simulation loop and the per-step trace.

Each tick reads the state published at the previous tick, then runs
mission bookkeeping, guidance or swarm control, the vehicle step and the
logger, in that order. Everything random comes from counter-based
substreams keyed by the scenario seed, so a (scenario, seed) pair always
yields the same trace bit for bit.
"""

from dataclasses import dataclass, replace

import numpy as np

from .boids import boids_velocities
from .entropy import total_entropy
from .errors import BearingUndefinedError, SimulationAborted
from .formation import (
    Mode,
    PolarErrors,
    feedforward_speed,
    follower_command,
    follower_goal,
    guidance_mode,
    hover_command,
    hover_heading,
    polar_errors,
    sfkc_command,
    trim_minimization,
)
from .kinematics import Pose, wind_state, yaw_of
from .mission import Approach, MissionState, advance_waypoint, leg_heading
from .rng import SubstreamRNG
from .rpso import RpsoSwarm, rpso_velocities
from .vehicle import AirshipState, VelocityCommand, sideslip, step_vehicle, velocity_to_command

GLOBAL_COLUMNS = ("t_s", "wp_index", "goal_n_m", "goal_e_m", "goal_radius_m",
                  "entropy_bitm", "centre_n_m", "centre_e_m", "centre_err_m")
AIRSHIP_FIELDS = ("role", "mode", "n_m", "e_m", "d_m", "yaw_rad", "qw", "qx", "qy", "qz",
                  "u_mps", "v_mps", "r_radps", "ua_mps", "uref_mps", "rref_radps",
                  "beta_rad", "goal_dist_m", "err_m")
STRING_FIELDS = ("role", "mode")
INT_COLUMNS = ("wp_index",)


def airship_columns(approach):
    fields = AIRSHIP_FIELDS
    if approach == Approach.FORMATION:
        fields += ("trim",)
    if approach == Approach.RPSO:
        fields += ("fitness",)
    return fields


def column_kind(name):
    """``"str"``, ``"int"`` or ``"float"`` for a trace column name."""
    suffix = name.split("_", 1)[1] if name.startswith("a") and "_" in name else name
    if name in INT_COLUMNS or suffix == "trim":
        return "int"
    if suffix in STRING_FIELDS:
        return "str"
    return "float"


@dataclass
class Trace:
    """Per-step records, one row per tick (``t = 0, dt, 2 dt, ...``)."""

    columns: list
    rows: list

    def __len__(self):
        return len(self.rows)

    def column(self, name):
        k = self.columns.index(name)
        values = [row[k] for row in self.rows]
        return values if column_kind(name) == "str" else np.array(values, dtype=float)

    @property
    def time(self):
        return self.column("t_s")

    @property
    def airship_ids(self):
        return [int(c[1:-len("_role")]) for c in self.columns if c.endswith("_role")]

    @property
    def roles(self):
        if not self.rows:
            return {}
        return {i: self.rows[0][self.columns.index(f"a{i}_role")] for i in self.airship_ids}

    def airship(self, airship_id, field):
        return self.column(f"a{airship_id}_{field}")


def point_segment_distance(p, a, b):
    p, a, b = (np.asarray(x, dtype=float)[:2] for x in (p, a, b))
    ab = b - a
    denom = float(ab @ ab)
    s = 0.0 if denom == 0.0 else float(np.clip((p - a) @ ab / denom, 0.0, 1.0))
    return float(np.linalg.norm(p - (a + s * ab)))


def planar_distance(a, b):
    return float(np.hypot(a[0] - b[0], a[1] - b[1]))


class Simulation:
    def __init__(self, scenario):
        self.sc = scenario
        self.rng = SubstreamRNG(scenario.seed)
        self.wind = np.array(scenario.wind, dtype=float)
        self.specs = list(scenario.airships)
        self.ids = [s.id for s in self.specs]
        self.params = {s.id: replace(scenario.vehicle, altitude=s.altitude) for s in self.specs}
        self.states = {}
        for s in self.specs:
            pose = Pose.from_yaw(s.north, s.east, -s.altitude, s.yaw)
            self.states[s.id] = AirshipState.at_rest(pose, s.id, s.airspeed, self.wind)
        self.mission = MissionState(modes={i: Mode.CRUISE for i in self.ids})
        self.t = 0.0
        self.step_index = 0
        self.trim = {i: -1 for i in self.ids}
        self.goal_dist = {}
        self.fitness = {i: 0.0 for i in self.ids}

        approach = scenario.approach
        self.leader_id = None
        self.slots = {}
        if approach is Approach.FORMATION:
            self.leader_id = next(s.id for s in self.specs if s.role == "leader")
            self.slots = {s.id: s.slot for s in self.specs if s.role == "follower"}
            self.prev_slot_point = {i: follower_goal(self.states[slot.leader_id].pose, slot)
                                    for i, slot in self.slots.items()}
            self.prev_errors = {i: PolarErrors(0.0, 0.0, 0.0) for i in self.ids}
            self.leg_start = self.states[self.leader_id].pose.position.copy()
        else:
            self.leg_start = self._centre()
            self.control_every = int(round(scenario.swarm.control_period / scenario.dt))
            self.v_des = {i: self.states[i].ground_velocity_ned() for i in self.ids}
            if approach is Approach.RPSO:
                p, v = self._planar()
                self.swarm = RpsoSwarm.start(p, v, self._mission_point()[0], scenario.rpso, self.ids)
        self.columns = list(GLOBAL_COLUMNS) + [
            f"a{i}_{f}" for i in self.ids for f in airship_columns(approach)]

    # -- mission ---------------------------------------------------------
    def _centre(self):
        p = np.array([self.states[i].pose.position for i in self.ids])
        c = p.mean(axis=0)
        c[2] = 0.0
        return c

    def _planar(self):
        p = np.array([self.states[i].pose.position for i in self.ids])
        v = np.array([self.states[i].ground_velocity_ned() for i in self.ids])
        p[:, 2] = 0.0
        v[:, 2] = 0.0
        return p, v

    def _tracked_position(self):
        if self.leader_id is not None:
            return self.states[self.leader_id].pose.position
        return self._centre()

    def _mission_point(self):
        """Active waypoint or target: (position, heading, radius)."""
        sc = self.sc
        if sc.target is not None:
            return sc.target.position(self.t), sc.target.heading(self.t), sc.hover_radius
        wp = sc.waypoints[self.mission.index]
        return (np.array(wp.position), leg_heading(sc.waypoints, self.mission.index, self.leg_start),
                wp.hover_radius)

    def _leg(self):
        i = self.mission.index
        start = self.leg_start if i == 0 else self.sc.waypoints[i - 1].position
        return start, self.sc.waypoints[i].position

    def _goal_error(self, position):
        """Error of a leader or swarm centre: cross-track to the active leg, or target distance."""
        if self.sc.target is not None:
            return planar_distance(position, self.sc.target.position(self.t))
        return point_segment_distance(position, *self._leg())

    # -- control ---------------------------------------------------------
    def _formation_commands(self):
        sc = self.sc
        gains = sc.formation.gains
        cmds = {}
        goal, heading, radius = self._mission_point()
        leader = self.states[self.leader_id]
        r_max = sc.vehicle.r_max
        if sc.target is not None:
            mode, _ = guidance_mode(leader.pose, goal, radius, self.wind)
        else:
            wp = sc.waypoints[self.mission.index]
            inside = planar_distance(leader.pose.position, goal) <= radius
            mode = Mode.HOVER if inside and (wp.hover or self.mission.complete) else Mode.CRUISE
        if mode is Mode.HOVER:
            cmds[self.leader_id] = hover_command(
                leader.pose, hover_heading(leader.yaw, self.wind), gains, r_max)
        else:
            err = self._errors(self.leader_id, leader.pose, goal, heading)
            cmd = sfkc_command(err, gains, 0.0, sc.vehicle.v_max, r_max)
            if sc.formation.cruise_airspeed is not None:
                cmd = VelocityCommand(sc.formation.cruise_airspeed, cmd.r_ref)
            cmds[self.leader_id] = cmd
        self.mission.modes[self.leader_id] = mode
        self.goal_dist[self.leader_id] = planar_distance(leader.pose.position, goal)

        for i, slot in self.slots.items():
            state = self.states[i]
            lead_pose = self.states[slot.leader_id].pose
            y_ref = follower_goal(lead_pose, slot)
            v_ff = feedforward_speed(y_ref, self.prev_slot_point[i], sc.dt, self.wind)
            self.prev_slot_point[i] = y_ref
            cmds[i], _ = follower_command(state.pose, y_ref, yaw_of(lead_pose), gains, v_ff,
                                          sc.vehicle.v_max, r_max, sc.formation.slot_radius,
                                          sc.formation.lookahead)
            on_station = planar_distance(state.pose.position, y_ref) <= sc.formation.slot_radius
            self.mission.modes[i] = Mode.HOVER if on_station else Mode.CRUISE
            self.goal_dist[i] = planar_distance(state.pose.position, y_ref)

        table = sc.formation.trim_table
        for i, cmd in cmds.items():
            if table is not None:
                rec, idx = trim_minimization(cmd.u_ref, table)
                self.params[i] = replace(self.params[i], tau_u=rec.tau_u, tau_r=rec.tau_r)
                self.trim[i] = idx
        return cmds

    def _errors(self, i, pose, goal, heading):
        try:
            err = polar_errors(pose, goal, heading)
        except BearingUndefinedError:
            prev = self.prev_errors[i]
            err = PolarErrors(0.0, prev.zeta, prev.epsilon)
        self.prev_errors[i] = err
        return err

    def _swarm_commands(self):
        sc = self.sc
        goal, _, _ = self._mission_point()
        goal = np.array([goal[0], goal[1], 0.0])
        if self.step_index % self.control_every == 0:
            p, v = self._planar()
            if sc.approach is Approach.BOIDS:
                v_des = boids_velocities(p, v, sc.boids, waypoint=goal)
            else:
                self.swarm = replace(self.swarm, positions=p, velocities=v)
                self.swarm, v_des = rpso_velocities(self.swarm, goal, sc.rpso, self.rng)
                self.swarm = replace(self.swarm, step=self.swarm.step + 1)
                self.fitness = dict(zip(self.ids, self.swarm.fitness))
            self.v_des = dict(zip(self.ids, v_des))
        cmds = {}
        for i in self.ids:
            state = self.states[i]
            cmds[i] = velocity_to_command(state, self.v_des[i], self.wind, self.params[i],
                                          sc.swarm.heading_gain)
            self.goal_dist[i] = planar_distance(state.pose.position, goal)
            self.mission.modes[i] = Mode.CRUISE
        return cmds

    # -- loop ------------------------------------------------------------
    def step(self):
        sc = self.sc
        if sc.waypoints:
            before = self.mission.index
            self.mission = advance_waypoint(self.mission, self._tracked_position(), sc.waypoints, sc.dt)
            assert self.mission.index >= before
        if sc.approach is Approach.FORMATION:
            cmds = self._formation_commands()
        else:
            cmds = self._swarm_commands()
        for i in self.ids:
            self.states[i] = step_vehicle(self.states[i], cmds[i], self.wind, self.params[i], sc.dt)
        self.step_index += 1
        self.t = self.step_index * sc.dt
        for i in self.ids:
            if not (np.all(np.isfinite(self.states[i].pose.position))
                    and np.all(np.isfinite(self.states[i].body_velocity))):
                raise SimulationAborted(f"non-finite state for airship {i}", self.step_index)

    def _slot_error(self, i):
        slot = self.slots[i]
        return planar_distance(self.states[i].pose.position,
                               follower_goal(self.states[slot.leader_id].pose, slot))

    def record(self):
        sc = self.sc
        goal, _, radius = self._mission_point()
        centre = self._centre()
        planar = np.array([[s.pose.position[0], s.pose.position[1]] for s in self.states.values()])
        row = [self.t, self.mission.index, float(goal[0]), float(goal[1]), float(radius),
               total_entropy(planar).S, float(centre[0]), float(centre[1]),
               self._goal_error(centre)]
        fields = airship_columns(sc.approach)
        for spec in self.specs:
            i = spec.id
            s = self.states[i]
            x_w = wind_state(s.pose, np.array([self.wind[0], self.wind[1], 0.0]))
            dist = self.goal_dist.get(i, planar_distance(s.pose.position, goal))
            if i in self.slots:
                err = self._slot_error(i)
            elif i == self.leader_id:
                err = self._goal_error(s.pose.position)
            else:
                err = dist
            values = {
                "role": spec.role, "mode": self.mission.modes[i].value,
                "n_m": s.pose.position[0], "e_m": s.pose.position[1], "d_m": s.pose.position[2],
                "yaw_rad": s.yaw, "qw": s.pose.attitude[0], "qx": s.pose.attitude[1],
                "qy": s.pose.attitude[2], "qz": s.pose.attitude[3],
                "u_mps": s.body_velocity[0], "v_mps": s.body_velocity[1], "r_radps": s.body_velocity[5],
                "ua_mps": s.airspeed[0], "uref_mps": s.commanded.u_ref, "rref_radps": s.commanded.r_ref,
                "beta_rad": sideslip(s, x_w), "goal_dist_m": dist, "err_m": err,
                "trim": self.trim[i], "fitness": self.fitness[i],
            }
            row.extend(values[f] for f in fields)
        return [float(v) if isinstance(v, np.floating) else v for v in row]


def run_simulation(scenario, seed=None):
    """Run ``scenario`` (optionally with another seed) and return its trace."""
    if seed is not None:
        scenario = scenario.with_seed(seed)
    sim = Simulation(scenario)
    rows = [sim.record()]
    for _ in range(scenario.steps):
        sim.step()
        rows.append(sim.record())
    return Trace(sim.columns, rows)
