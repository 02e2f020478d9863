"""Tracking-error statistics over a trace."""

import json
from dataclasses import asdict, dataclass

import numpy as np

from .errors import ConfigurationError


def quantize(x):
    """Round to 9 significant digits so summaries survive a CSV round trip."""
    return float("%.9g" % x)


@dataclass(frozen=True)
class ErrorStats:
    mean: float
    std: float
    max: float
    samples: int

    @classmethod
    def of(cls, values):
        v = np.array([quantize(x) for x in np.ravel(values)], dtype=float)
        if v.size == 0:
            return cls(float("nan"), float("nan"), float("nan"), 0)
        return cls(quantize(v.mean()), quantize(v.std()), quantize(v.max()), int(v.size))


@dataclass(frozen=True)
class MetricsSummary:
    transient_s: float
    airships: dict
    leader: ErrorStats = None
    followers: ErrorStats = None
    centre: ErrorStats = None

    def to_dict(self):
        out = {"transient_s": self.transient_s,
               "airships": {str(k): asdict(v) for k, v in self.airships.items()}}
        for name in ("leader", "followers", "centre"):
            stats = getattr(self, name)
            if stats is not None:
                out[name] = asdict(stats)
        return out


def compute_metrics(trace, scenario=None, transient_s=None):
    """Error statistics of every airship, the leader, pooled followers and the swarm centre.

    Samples with ``t < transient_s`` are dropped (default: the scenario's
    transient, else 0); ``std`` is the population standard deviation.
    """
    if transient_s is None:
        transient_s = scenario.transient if scenario is not None else 0.0
    if len(trace) == 0:
        raise ConfigurationError("trace is empty")
    if transient_s < 0:
        raise ConfigurationError("transient must be non-negative")
    t = np.array([quantize(x) for x in trace.time])
    keep = t >= transient_s - 1e-9
    roles = trace.roles
    per = {}
    followers = []
    leader = None
    for i in trace.airship_ids:
        err = trace.airship(i, "err_m")[keep]
        per[i] = ErrorStats.of(err)
        if roles[i] == "leader":
            leader = per[i]
        elif roles[i] == "follower":
            followers.append(err)
    pooled = ErrorStats.of(np.concatenate(followers)) if followers else None
    centre = None
    if leader is None:
        centre = ErrorStats.of(trace.column("centre_err_m")[keep])
    return MetricsSummary(float(transient_s), per, leader, pooled, centre)


def write_metrics(summary, path):
    with open(path, "w") as fh:
        json.dump(summary.to_dict(), fh, indent=2, sort_keys=True)
        fh.write("\n")
