"""Seeded random streams.

Every generator is a PCG64 bit generator fed by ``SeedSequence(master_seed,
spawn_key=key)``.  Streams used by the experiment runner:

    (0,)      drawing the satisfying-assignment sample
    (1, i)    SGD trial i
    (2,)      any Monte Carlo estimate (membership level b for large n)

Distinct keys give statistically independent streams; the same
(master_seed, key) pair always reproduces the same stream.
"""

import numpy as np

DATA = (0,)
MONTE_CARLO = (2,)


def stream(master_seed: int, *key: int) -> np.random.Generator:
    return np.random.Generator(np.random.PCG64(np.random.SeedSequence(master_seed, spawn_key=key)))


def trial_stream(master_seed: int, trial: int) -> np.random.Generator:
    return stream(master_seed, 1, trial)
