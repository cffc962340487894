"""Seeded random number generation with a pinned algorithm."""

import numpy as np


def make_rng(seed):
    """Return a PCG64 generator for `seed`.

    The bit generator is pinned (not the platform default) so that seeded
    runs produce identical streams everywhere.
    """
    return np.random.Generator(np.random.PCG64(int(seed)))
