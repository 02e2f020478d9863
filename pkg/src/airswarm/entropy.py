"""
Social entropy of a swarm.

For a cluster radius ``h`` every agent ``i`` counts the agents within ``h``
of it (itself included); with ``p_i`` that count divided by ``N``,

    H(h) = -sum_i p_i log2(p_i).

The total entropy is ``S = integral of H(h) dh`` over ``[0, inf)``. ``H`` is a
step function that only changes at pairwise distances and vanishes once
``h`` reaches the largest one, so the integral is evaluated exactly.
"""

from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class EntropyResult:
    S: float
    curve: tuple  # ((h, H), ...) breakpoints; H holds on [h_k, h_{k+1})


def pairwise_distances(positions):
    p = np.atleast_2d(np.asarray(positions, dtype=float))
    diff = p[:, None, :] - p[None, :, :]
    return np.sqrt(np.einsum("ijk,ijk->ij", diff, diff))


def _entropy_of_counts(counts, n):
    p = counts / n
    return float(0.0 - np.sum(p * np.log2(p)))


def cluster_entropy_at(h, matrix):
    """``H(h)`` for a distance matrix, using ``D[i, j] <= h`` membership."""
    d = np.asarray(matrix, dtype=float)
    counts = np.count_nonzero(d <= h, axis=1)
    return _entropy_of_counts(counts, d.shape[0])


def total_entropy(positions, min_separation=0.0):
    """Exact integral of ``H`` over the cluster radius.

    Parameters
    ----------
    positions : (N, k) array
    min_separation : float
        Rows of agents closer than this to an earlier agent are dropped
        from the entropy sum. 0 keeps every agent.
    """
    d = pairwise_distances(positions)
    n = d.shape[0]
    rows = d
    if min_separation > 0:
        keep = [i for i in range(n) if not np.any(d[i, :i] < min_separation)]
        rows = d[keep]
    levels = np.unique(d[d > 0])
    breaks = np.concatenate(([0.0], levels))
    counts = np.count_nonzero(rows[:, :, None] <= breaks[None, None, :], axis=1)
    p = counts / n
    h_values = 0.0 - np.sum(p * np.log2(p), axis=0)
    s = float(np.sum(h_values[:-1] * np.diff(breaks)))
    curve = tuple((float(h), float(v)) for h, v in zip(breaks, h_values))
    return EntropyResult(s, curve)
