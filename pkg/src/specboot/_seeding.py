"""Deterministic seed derivation for order-independent parallel streams."""

import numpy as np


def derive_seed(master_seed, *keys):
    """Return a 64-bit integer seed that depends only on ``(master_seed, *keys)``."""
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    state = np.random.SeedSequence(entropy).generate_state(2, dtype=np.uint32)
    return int(state[0]) | (int(state[1]) << 32)


def stream(master_seed, *keys):
    """Generator for the stream identified by ``(master_seed, *keys)``."""
    entropy = [int(master_seed) & 0xFFFFFFFFFFFFFFFF] + [int(k) for k in keys]
    return np.random.default_rng(np.random.SeedSequence(entropy))
