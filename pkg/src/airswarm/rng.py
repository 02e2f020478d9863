"""
Counter-based random substreams.

Every draw comes from a Philox-4x64 generator (numpy's ``Philox`` bit
generator) whose 128-bit key packs ``(seed, stream)`` and whose counter is
the simulation step. A robot's draws therefore depend only on the seed, its
own id and the step, never on how many numbers other robots consumed, which
keeps runs reproducible and invariant to robot relabelling.
"""

import numpy as np

MASK64 = (1 << 64) - 1

# stream ids reserved for non-robot consumers
TARGET_STREAM = MASK64


def substream(seed, stream, counter):
    key = (int(seed) & MASK64) | ((int(stream) & MASK64) << 64)
    return np.random.Generator(np.random.Philox(key=key, counter=int(counter)))


class SubstreamRNG:
    def __init__(self, seed):
        self.seed = int(seed) & MASK64

    def uniforms(self, stream, counter, n=3):
        return substream(self.seed, stream, counter).random(n)

    def normals(self, stream, counter, n=1):
        return substream(self.seed, stream, counter).standard_normal(n)


class PinnedRNG:
    """Returns the same value for every draw; for hand-traced checks."""

    def __init__(self, value=1.0):
        self.value = float(value)

    def uniforms(self, stream, counter, n=3):
        return np.full(n, self.value)
