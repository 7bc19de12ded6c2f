"""
Seed derivation for simulation campaigns.

Every test gets its own generator, derived from the campaign's master seed and
the test's index, so tests can run in any order (or in parallel) and still
draw the same numbers.
"""

from typing import List

import numpy as np


def derive_seed(master_seed: int, index: int) -> int:
    """64-bit seed of test *index* under *master_seed*"""
    state = np.random.SeedSequence([master_seed, index]).generate_state(1, dtype=np.uint64)
    return int(state[0])


def derive_seeds(master_seed: int, n: int) -> List[int]:
    return [derive_seed(master_seed, index) for index in range(n)]


def make_rng(seed: int) -> np.random.Generator:
    return np.random.default_rng(np.random.SeedSequence(seed))
