"""Deterministic, addressable random streams.

Every random draw in the package comes from a stream addressed by
``(seed, purpose, step, member)``.  Streams with different addresses are
statistically independent (SeedSequence hashing), and because a stream's
address never depends on execution order, parallel and sequential schedules
consume identical randomness.
"""

from __future__ import annotations

import numpy as np

# purpose ids; part of the reproducibility contract, do not renumber
INIT = 1
MOTION = 2
RESAMPLE = 3
OBSERVE = 4


def stream(seed: int, purpose: int, step: int = 0, member: int = 0) -> np.random.Generator:
    """Generator for the stream addressed by (seed, purpose, step, member)."""
    if seed < 0:
        raise ValueError("master seed must be non-negative")
    ss = np.random.SeedSequence(entropy=(seed, purpose, step, member))
    return np.random.Generator(np.random.PCG64(ss))


def run_seed(master_seed: int, run_index: int) -> int:
    """Per-run seed for multi-run experiments: master + run index."""
    if master_seed < 0:
        raise ValueError("master seed must be non-negative")
    return master_seed + run_index
