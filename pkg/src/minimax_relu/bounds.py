"""Closed-form bounds on the optimal n-piece error, in pieces and in network size."""

from __future__ import annotations

import math
from dataclasses import asdict, dataclass
from typing import Iterable, Tuple

import numpy as np

from .functions import TargetFunction

__all__ = [
    "BoundsReport", "second_derivative_extrema", "error_bounds", "size_bounds",
    "rate_check",
]

EXTREMA_GRID = 4096


@dataclass(frozen=True)
class BoundsReport:
    n: int
    lower: float
    upper: float
    f2_min: float
    f2_max: float

    def to_dict(self) -> dict:
        return asdict(self)


def second_derivative_extrema(f: TargetFunction, grid: int = EXTREMA_GRID) -> Tuple[float, float]:
    """(min f'', max f'') on ``f.domain``.

    Exact when f'' is known to be monotone (the built-ins): the extrema are then
    the endpoint values. Otherwise a grid estimate, exact only for monotone f''.
    """
    if grid < 1024:
        raise ValueError(f"grid must be >= 1024, got {grid}")
    if f.d2_monotone:
        ends = (f.d2(f.domain.lo), f.d2(f.domain.hi))
        return min(ends), max(ends)
    values = f.second_derivatives(f.domain.grid(grid))
    if not np.all(np.isfinite(values)):
        raise ArithmeticError(f"f'' of {f.name} is not finite on its domain")
    return float(values.min()), float(values.max())


def error_bounds(f: TargetFunction, n: int) -> BoundsReport:
    """Lower and upper bounds ``width^2 * f''_{min,max} / (16 n^2)``."""
    if n < 1:
        raise ValueError(f"need n >= 1, got {n}")
    lo2, hi2 = second_derivative_extrema(f)
    scale = f.domain.width ** 2 / (16.0 * n * n)
    return BoundsReport(n=n, lower=scale * lo2, upper=scale * hi2, f2_min=lo2, f2_max=hi2)


def size_bounds(f: TargetFunction, neurons: int, layers: int) -> Tuple[float, float]:
    """(lower, upper) bound on the error reachable by a ReLU net of
    ``neurons`` neurons and ``layers`` layers (input and output included)."""
    if neurons < 3 or layers < 3:
        raise ValueError(f"need neurons >= 3 and layers >= 3, got {neurons}, {layers}")
    lo2, hi2 = second_derivative_extrema(f)
    w2 = f.domain.width ** 2
    upper = 9.0 * w2 * hi2 / (16.0 * neurons ** 2)
    # (2N)^(2L-4) overflows floats quickly; the bound simply underflows to 0
    log_denom = math.log(16.0) + (2 * layers - 4) * math.log(2.0 * neurons)
    lower = w2 * lo2 * math.exp(-log_denom) if lo2 > 0 else 0.0
    return lower, upper


def rate_check(errors: Iterable[Tuple[int, float]]) -> float:
    """max(err * n^2) / min(err * n^2) over ``(n, err)`` pairs.

    For optimal errors this lies in [1, f''_max / f''_min], certifying the
    1/n^2 rate.
    """
    entries = list(errors)
    if len(entries) < 2:
        raise ValueError("rate_check needs at least two (n, error) entries")
    ns = [n for n, _ in entries]
    if len(set(ns)) != len(ns):
        raise ValueError(f"entries must have distinct n, got {ns}")
    scaled = [e * n * n for n, e in entries]
    if min(scaled) <= 0:
        raise ValueError("errors must be positive")
    return max(scaled) / min(scaled)
