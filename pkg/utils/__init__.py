"""
Initialize utils package
"""

from .rng import derive_seed, derive_seeds, make_rng

__all__ = ['derive_seed', 'derive_seeds', 'make_rng']
