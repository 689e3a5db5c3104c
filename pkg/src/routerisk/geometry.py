"""Mean distance between two uniformly random points in a rectangle.

Provides the closed form and an independent Monte Carlo oracle used to
validate it. The closed form uses natural logarithms; it reproduces the
known unit-square constant 0.5214054331...
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np


@dataclass(frozen=True)
class Rectangle:
    length_m: float
    width_m: float

    def __post_init__(self) -> None:
        if self.length_m <= 0 or self.width_m <= 0:
            raise ValueError(
                f"rectangle sides must be positive, got {self.length_m} x {self.width_m}"
            )

    @property
    def diagonal_m(self) -> float:
        return math.hypot(self.length_m, self.width_m)


def mean_distance_closed(rect: Rectangle) -> float:
    """Expected distance between two uniform points in ``rect``.

    Symmetric in the two sides and homogeneous of degree one
    (``mean(a*L, a*W) = a * mean(L, W)``).
    """
    a, b = rect.length_m, rect.width_m
    d = rect.diagonal_m
    return (
        a**3 / b**2
        + b**3 / a**2
        + d * (3 - a**2 / b**2 - b**2 / a**2)
        + 2.5 * (b**2 / a * math.log((a + d) / b) + a**2 / b * math.log((b + d) / a))
    ) / 15


def mean_distance_mc(
    rect: Rectangle, samples: int, seed: int, chunk: int = 1_000_000
) -> tuple[float, float]:
    """Monte Carlo estimate of the mean point-pair distance.

    Returns ``(estimate, standard_error)``. Deterministic for a given seed.
    """
    if samples < 1000:
        raise ValueError(f"need at least 1000 samples, got {samples}")
    rng = np.random.default_rng(seed)
    total = 0.0
    total_sq = 0.0
    remaining = samples
    while remaining > 0:
        n = min(remaining, chunk)
        pts = rng.random((n, 4))
        dx = (pts[:, 0] - pts[:, 2]) * rect.length_m
        dy = (pts[:, 1] - pts[:, 3]) * rect.width_m
        dist = np.hypot(dx, dy)
        total += float(dist.sum())
        total_sq += float(np.square(dist).sum())
        remaining -= n
    mean = total / samples
    variance = max(total_sq / samples - mean * mean, 0.0)
    return mean, math.sqrt(variance / samples)
