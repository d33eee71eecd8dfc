"""Shared helpers for domain feature maps."""
from __future__ import annotations


def discretize_prob(p: float) -> int:
    """Map a probability to its decile bucket {0, 10, ..., 100}.

    Bucket v means the probability lies in [v, v+10) percent; 100 is reserved
    for p == 1.0 exactly.
    """
    if not 0.0 <= p <= 1.0:
        raise ValueError(f"probability outside [0, 1]: {p}")
    if p == 1.0:
        return 100
    # small epsilon so counts like 7/10 do not land one bucket low
    return int(p * 10 + 1e-9) * 10
