"""
Scenario files: UTF-8 JSON with units spelled out in the field names.

Loading validates every field and raises :class:`ScenarioError` naming the
offending entry with a dotted path (``airships[2].slot.rho_d_m``). The schema
is documented in the README.
"""

import json
import math
from dataclasses import dataclass, replace
from importlib import resources
from pathlib import Path

from .boids import BoidsParams
from .errors import ConfigurationError, ScenarioError
from .formation import FormationSlot, GuidanceGains, TrimGains, TrimTable, validate_gains
from .mission import Approach, RandomWalkTarget, ScriptedTarget, Waypoint
from .rpso import RpsoParams
from .vehicle import VehicleParams

MAX_STEPS = 10 ** 7
ROLES = ("leader", "follower", "member")


@dataclass(frozen=True)
class AirshipSpec:
    id: int
    role: str
    north: float
    east: float
    altitude: float
    yaw: float
    airspeed: float = 0.0
    slot: FormationSlot = None


@dataclass(frozen=True)
class FormationConfig:
    """Guidance settings; a ``cruise_airspeed`` of None lets SFKC set the leader's speed too."""

    gains: GuidanceGains = GuidanceGains()
    cruise_airspeed: float = 6.0
    slot_radius: float = 1.0
    lookahead: float = 20.0
    trim_table: TrimTable = None


@dataclass(frozen=True)
class SwarmConfig:
    control_period: float = 1.0
    heading_gain: float = 0.5


@dataclass(frozen=True)
class Scenario:
    name: str
    approach: Approach
    airships: tuple
    dt: float = 0.1
    duration: float = 300.0
    seed: int = 0
    wind: tuple = (0.0, 0.0, 0.0)
    transient: float = 0.0
    vehicle: VehicleParams = VehicleParams()
    formation: FormationConfig = FormationConfig()
    boids: BoidsParams = BoidsParams()
    rpso: RpsoParams = RpsoParams()
    swarm: SwarmConfig = SwarmConfig()
    waypoints: tuple = ()
    target: object = None
    hover_radius: float = 20.0

    @property
    def steps(self):
        return int(round(self.duration / self.dt))

    def with_seed(self, seed):
        target = self.target
        if isinstance(target, RandomWalkTarget):
            target = replace(target, seed=seed)
        return replace(self, seed=seed, target=target)


class _Reader:
    """Typed access to a JSON object that reports dotted field paths."""

    def __init__(self, data, path=""):
        if not isinstance(data, dict):
            raise ScenarioError("expected a JSON object", path or "<root>")
        self.data = data
        self.path = path

    def _p(self, key):
        return f"{self.path}.{key}" if self.path else key

    def has(self, key):
        return key in self.data

    def raw(self, key, default=...):
        if key not in self.data:
            if default is ...:
                raise ScenarioError("missing required field", self._p(key))
            return default
        return self.data[key]

    def number(self, key, default=..., lo=None, hi=None, lo_open=False):
        v = self.raw(key, default)
        if isinstance(v, bool) or not isinstance(v, (int, float)) or not math.isfinite(v):
            raise ScenarioError(f"expected a finite number, got {v!r}", self._p(key))
        if lo is not None and (v < lo or (lo_open and v == lo)):
            raise ScenarioError(f"must be {'>' if lo_open else '>='} {lo}, got {v}", self._p(key))
        if hi is not None and v > hi:
            raise ScenarioError(f"must be <= {hi}, got {v}", self._p(key))
        return float(v)

    def integer(self, key, default=..., lo=None):
        v = self.raw(key, default)
        if isinstance(v, bool) or not isinstance(v, int):
            raise ScenarioError(f"expected an integer, got {v!r}", self._p(key))
        if lo is not None and v < lo:
            raise ScenarioError(f"must be >= {lo}, got {v}", self._p(key))
        return v

    def boolean(self, key, default=...):
        v = self.raw(key, default)
        if not isinstance(v, bool):
            raise ScenarioError(f"expected true or false, got {v!r}", self._p(key))
        return v

    def string(self, key, default=..., choices=None):
        v = self.raw(key, default)
        if not isinstance(v, str):
            raise ScenarioError(f"expected a string, got {v!r}", self._p(key))
        if choices is not None and v not in choices:
            raise ScenarioError(f"must be one of {', '.join(choices)}; got {v!r}", self._p(key))
        return v

    def obj(self, key, default=...):
        v = self.raw(key, default)
        if v is None:
            return None
        return _Reader(v, self._p(key))

    def items(self, key, default=...):
        v = self.raw(key, default)
        if not isinstance(v, list):
            raise ScenarioError("expected a list", self._p(key))
        return v

    def objects(self, key, default=...):
        return [_Reader(v, f"{self._p(key)}[{i}]") for i, v in enumerate(self.items(key, default))]

    def axis(self, key, default):
        v = self.raw(key, default)
        if isinstance(v, (int, float)) and not isinstance(v, bool):
            v = [v] * 3
        if (not isinstance(v, list) or len(v) != 3
                or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in v)):
            raise ScenarioError("expected a number or a list of three numbers", self._p(key))
        return tuple(float(x) for x in v)


def _vehicle(r):
    if r is None:
        return VehicleParams()
    return VehicleParams(
        tau_u=r.number("tau_u_s", 4.0, lo=0, lo_open=True),
        tau_r=r.number("tau_r_s", 2.0, lo=0, lo_open=True),
        v_max=r.number("v_max_mps", 15.0, lo=0, lo_open=True, hi=15.0),
        r_max=r.number("r_max_radps", 0.2, lo=0, lo_open=True),
    )


def _trim_table(r, vehicle):
    if r is None:
        return None
    if r.has("preset"):
        r.string("preset", choices=("default",))
        return TrimTable.default(vehicle.tau_u, vehicle.tau_r)
    speeds = [float(x) for x in r.items("airspeeds_mps")]
    tau_u = r.items("tau_u_s")
    tau_r = r.items("tau_r_s")
    if not (len(speeds) == len(tau_u) == len(tau_r)) or not speeds:
        raise ScenarioError("airspeeds_mps, tau_u_s and tau_r_s must be non-empty and equally long",
                            r._p("airspeeds_mps"))
    try:
        return TrimTable(tuple(speeds), tuple(TrimGains(float(a), float(b)) for a, b in zip(tau_u, tau_r)))
    except ConfigurationError as exc:
        raise ScenarioError(str(exc), r._p("airspeeds_mps")) from None


def _formation(r, vehicle):
    if r is None:
        return FormationConfig()
    gains = GuidanceGains(
        k_rho=r.number("k_rho", 0.1),
        k_zeta=r.number("k_zeta", 0.4),
        k_epsilon=r.number("k_epsilon", -0.01),
        k_ff=r.number("k_ff", 1.0),
    )
    if not validate_gains(gains):
        raise ScenarioError(
            "gains violate the stability rule k_rho > 0, k_epsilon < 0, k_zeta > k_rho",
            r._p("k_rho/k_zeta/k_epsilon"))
    return FormationConfig(
        gains=gains,
        cruise_airspeed=(None if r.has("cruise_airspeed_mps") and r.raw("cruise_airspeed_mps") is None
                         else r.number("cruise_airspeed_mps", 6.0, lo=0, hi=15.0)),
        slot_radius=r.number("slot_radius_m", 1.0, lo=0, lo_open=True),
        lookahead=r.number("lookahead_m", 20.0, lo=0, lo_open=True),
        trim_table=_trim_table(r.obj("trim_table", None), vehicle),
    )


def _boids(r):
    if r is None:
        return BoidsParams()
    return BoidsParams(
        delta=r.number("delta", 0.6, lo=0, hi=1),
        k_r=r.number("k_r", 2.0, lo=0),
        k_m=r.number("k_m", 0.5, lo=0),
        k_a=r.number("k_a", 0.5, lo=0),
        d_lim=r.number("d_lim_m", 15.0, lo=0, lo_open=True),
        v_max=r.number("v_max_mps", 15.0, lo=0, lo_open=True, hi=15.0),
    )


def _rpso(r):
    if r is None:
        return RpsoParams()
    return RpsoParams(
        a=r.axis("a", 0.7), b1=r.axis("b1", 1.4), b2=r.axis("b2", 1.4), b3=r.axis("b3", 1.0),
        k_S=r.number("k_S", 1.0, lo=0), k_d=r.number("k_d", 1.0, lo=0),
        R_S=r.number("R_S_bitm", 100.0, lo=0, lo_open=True),
        R_d=r.number("R_d_m", 150.0, lo=0, lo_open=True),
        collision_threshold=r.number("collision_threshold_m", 10.0, lo=0, lo_open=True),
        v_max=r.number("v_max_mps", 15.0, lo=0, lo_open=True, hi=15.0),
    )


def _swarm(r, dt):
    if r is None:
        return SwarmConfig()
    cfg = SwarmConfig(
        control_period=r.number("control_period_s", 1.0, lo=0, lo_open=True),
        heading_gain=r.number("heading_gain_per_s", 0.5, lo=0, lo_open=True),
    )
    ratio = cfg.control_period / dt
    if abs(ratio - round(ratio)) > 1e-9:
        raise ScenarioError("must be a whole multiple of dt_s", r._p("control_period_s"))
    return cfg


def _slot(r):
    if r is None:
        return None
    return FormationSlot(
        rho_d=r.number("rho_d_m", lo=0),
        zeta_d=math.radians(r.number("zeta_d_deg")),
        leader_id=r.integer("leader_id", lo=0),
    )


def _airships(root, approach):
    specs = []
    for r in root.objects("airships"):
        specs.append(AirshipSpec(
            id=r.integer("id", lo=0),
            role=r.string("role", "member", choices=ROLES),
            north=r.number("north_m"),
            east=r.number("east_m"),
            altitude=r.number("altitude_m", 50.0),
            yaw=math.radians(r.number("yaw_deg", 0.0)),
            airspeed=r.number("airspeed_mps", 0.0, lo=0, hi=15.0),
            slot=_slot(r.obj("slot", None)),
        ))
    if not specs:
        raise ScenarioError("at least one airship is required", "airships")
    ids = [s.id for s in specs]
    if len(set(ids)) != len(ids):
        raise ScenarioError("airship ids must be unique", "airships")
    if approach is Approach.FORMATION:
        leaders = [s for s in specs if s.role == "leader"]
        if len(leaders) != 1:
            raise ScenarioError("formation needs exactly one airship with role 'leader'", "airships")
        for k, s in enumerate(specs):
            if s.role == "follower":
                if s.slot is None:
                    raise ScenarioError("followers need a slot", f"airships[{k}].slot")
                if s.slot.leader_id not in ids or s.slot.leader_id == s.id:
                    raise ScenarioError("unknown leader id", f"airships[{k}].slot.leader_id")
    elif len(specs) < 2:
        raise ScenarioError("swarm approaches need at least two airships", "airships")
    return tuple(specs)


def _mission(root):
    m = root.obj("mission")
    kind = m.string("type", choices=("waypoints", "target"))
    if kind == "waypoints":
        wps = []
        for r in m.objects("waypoints"):
            hover = r.boolean("hover", False)
            wps.append(Waypoint(
                position=(r.number("north_m"), r.number("east_m"), 0.0),
                hover=hover,
                hover_radius=r.number("radius_m", 20.0, lo=0, lo_open=True),
                hover_duration=r.number("hover_duration_s", 0.0, lo=0),
            ))
        if not wps:
            raise ScenarioError("at least one waypoint is required", "mission.waypoints")
        return tuple(wps), None, m.number("radius_m", 20.0, lo=0, lo_open=True)
    t = m.obj("target")
    model = t.string("model", choices=("scripted", "random_walk"))
    speed = t.number("speed_mps", lo=0, hi=8.0)
    if model == "scripted":
        path = []
        for k, p in enumerate(t.items("path_ne_m")):
            if (not isinstance(p, list) or len(p) != 2
                    or not all(isinstance(x, (int, float)) and not isinstance(x, bool) for x in p)):
                raise ScenarioError("expected [north, east]", f"{t._p('path_ne_m')}[{k}]")
            path.append((float(p[0]), float(p[1]), 0.0))
        if not path:
            raise ScenarioError("path must not be empty", t._p("path_ne_m"))
        target = ScriptedTarget(tuple(path), speed)
    else:
        target = RandomWalkTarget(
            start=(t.number("start_north_m"), t.number("start_east_m"), 0.0),
            heading0=math.radians(t.number("heading_deg", 0.0)),
            speed=speed,
            turn_sigma=t.number("turn_sigma_radps", 0.02, lo=0),
            turn_max=t.number("turn_max_radps", 0.05, lo=0),
            decay=t.number("turn_decay", 0.9, lo=0, hi=1),
            segment_s=t.number("segment_s", 1.0, lo=0, lo_open=True),
        )
    return (), target, m.number("radius_m", 20.0, lo=0, lo_open=True)


def parse_scenario(data, name="scenario"):
    root = _Reader(data)
    approach = Approach(root.string("approach", choices=tuple(a.value for a in Approach)))
    dt = root.number("dt_s", 0.1, lo=0, lo_open=True, hi=1.0)
    duration = root.number("duration_s", lo=0)
    if duration / dt > MAX_STEPS:
        raise ScenarioError(f"duration_s / dt_s exceeds {MAX_STEPS} steps", "duration_s")
    seed = root.integer("seed", 0, lo=0)
    if seed >= 2 ** 64:
        raise ScenarioError("seed must fit in 64 bits", "seed")
    vehicle = _vehicle(root.obj("vehicle", None))
    waypoints, target, hover_radius = _mission(root)
    formation = _formation(root.obj("formation", None), vehicle)
    scenario = Scenario(
        name=root.string("name", name),
        approach=approach,
        airships=_airships(root, approach),
        dt=dt,
        duration=duration,
        seed=seed,
        wind=(root.number("wind_north_mps", 0.0), root.number("wind_east_mps", 0.0),
              root.number("wind_down_mps", 0.0)),
        transient=root.number("metrics_transient_s", 0.0, lo=0),
        vehicle=vehicle,
        formation=formation,
        boids=_boids(root.obj("boids", None)),
        rpso=_rpso(root.obj("rpso", None)),
        swarm=_swarm(root.obj("swarm", None), dt),
        waypoints=waypoints,
        target=target,
        hover_radius=hover_radius,
    )
    # random-walk targets draw from the scenario seed
    return scenario.with_seed(seed)


def bundled_scenarios():
    """Names of the scenario files shipped with the package."""
    folder = resources.files("airswarm") / "scenarios"
    return sorted(p.name for p in folder.iterdir() if p.name.endswith(".json"))


def resolve_scenario_path(path):
    """``path`` itself if it exists, else the bundled scenario of that name."""
    p = Path(path)
    if p.exists():
        return p
    if len(p.parts) == 1:
        name = p.name if p.name.endswith(".json") else p.name + ".json"
        if name in bundled_scenarios():
            return Path(str(resources.files("airswarm") / "scenarios" / name))
    raise ScenarioError(f"scenario file not found: {path}", None)


def load_scenario(path):
    p = resolve_scenario_path(path)
    try:
        text = p.read_text(encoding="utf-8")
    except OSError as exc:
        raise ScenarioError(f"cannot read {p}: {exc.strerror}") from None
    if not text.strip():
        raise ScenarioError(f"{p} is empty; expected a JSON object")
    try:
        data = json.loads(text)
    except json.JSONDecodeError as exc:
        raise ScenarioError(f"{p} is not valid JSON: {exc.msg} at line {exc.lineno}") from None
    try:
        return parse_scenario(data, name=p.stem)
    except ConfigurationError as exc:
        raise ScenarioError(str(exc)) from None
