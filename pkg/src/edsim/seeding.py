"""Deterministic RNG streams: one top-level seed, named subsystem streams.

Every stochastic operation derives its generator from the run seed and a
stream name, so subsystems cannot perturb each other's draws and any run
is reproducible from (config, seed) alone.
"""

import numpy as np

# fixed registry: adding a stream must not renumber existing ones
_STREAMS = {
    "trajectories": 0,
    "measurement": 1,
    "pointer": 2,
    "amplification": 3,
    "state": 4,
}


def stream_rng(seed, name) -> np.random.Generator:
    """Counter-based generator for the named stream of a top-level seed."""
    try:
        key = _STREAMS[name]
    except KeyError:
        raise ValueError(f"unknown rng stream '{name}'") from None
    ss = np.random.SeedSequence(entropy=int(seed), spawn_key=(key,))
    return np.random.Generator(np.random.Philox(ss))


def restore_rng(state: dict) -> np.random.Generator:
    """Rebuild a generator from a saved bit-generator state."""
    bg = np.random.Philox()
    bg.state = state
    return np.random.Generator(bg)
