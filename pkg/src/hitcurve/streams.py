"""Seeded random substreams.

Replicate ``i`` under seed ``s`` always draws from ``SeedSequence([s, i])``,
so results do not depend on the order in which replicates run.
"""

import numpy as np


def substream(seed: int, index: int | None = None) -> np.random.Generator:
    """Independent generator for (seed, index); ``index=None`` gives the root stream."""
    if seed < 0:
        raise ValueError(f"seed must be nonnegative, got {seed}")
    entropy = [seed] if index is None else [seed, index]
    return np.random.default_rng(np.random.SeedSequence(entropy))
