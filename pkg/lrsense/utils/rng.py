# Copyright (c) LRSense contributors.
# Licensed under the MIT License.

"""Seed derivation and counter-based random streams.

Every stochastic operation in lrsense takes an integer seed and builds its own
stream with :func:`make_rng`. Sub-streams are derived with :func:`derive_seed`,
so a trial or a probe sample can be reproduced in isolation.
"""

import numpy as np

UINT64_MASK = (1 << 64) - 1


def derive_seed(*keys: int) -> int:
    """Mix integer keys into a single 64-bit seed.

    Args:
        *keys (int): Non-negative integers, e.g. (master_seed, m, r, trial).

    Returns:
        int: First 64-bit word of ``SeedSequence(keys)``.
    """
    entropy = [int(k) & UINT64_MASK for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(1, np.uint64)
    return int(state[0])


def make_rng(seed: int) -> np.random.Generator:
    """Return a Philox-backed generator keyed by ``seed``."""
    return np.random.Generator(np.random.Philox(key=int(seed) & UINT64_MASK))
