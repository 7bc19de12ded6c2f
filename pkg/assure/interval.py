"""
Binomial confidence intervals (modified Wald / Agresti–Coull).
"""

import math
from typing import Tuple

from scipy.stats import norm

from errors import InvalidCounts

Z_95 = 1.96


def interval(successes: int, n: int, confidence: float = 0.95) -> Tuple[float, float]:
    """
    Interval for a success proportion.

    At 95% this is the "add two successes and two failures" form with
    z = 1.96; other levels use the normal quantile with (k + z²/2) / (n + z²).
    Bounds are clipped to [0, 1].

    Raises:
        InvalidCounts: n < 1, successes outside [0, n] or confidence outside (0, 1)
    """
    if isinstance(successes, bool) or isinstance(n, bool) or int(successes) != successes or int(n) != n:
        raise InvalidCounts(f"counts must be integers, got {successes!r}/{n!r}")
    if n < 1 or not 0 <= successes <= n:
        raise InvalidCounts(f"{successes} successes out of {n} trials")
    if not 0.0 < confidence < 1.0:
        raise InvalidCounts(f"confidence {confidence} is not in (0, 1)")

    if math.isclose(confidence, 0.95):
        z = Z_95
        n_adj = n + 4.0
        p_adj = (successes + 2.0) / n_adj
    else:
        z = float(norm.ppf(1.0 - (1.0 - confidence) / 2.0))
        n_adj = n + z * z
        p_adj = (successes + z * z / 2.0) / n_adj
    half = z * math.sqrt(p_adj * (1.0 - p_adj) / n_adj)
    return max(0.0, p_adj - half), min(1.0, p_adj + half)
