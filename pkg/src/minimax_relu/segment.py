"""Best uniform (minimax) line on one sub-interval of a strictly convex function.

For convex f on [a, b] the optimal line has slope equal to the chord slope.
Its error is attained with alternating signs at a, at the interior point c
where f'(c) equals the chord slope, and at b. The error has the closed form
``(c - a) / 2 * (f'(c) - f'(d))``, where d in (a, c) satisfies
``f'(d) = (f(c) - f(a)) / (c - a)``.
"""

from __future__ import annotations

from dataclasses import dataclass
from typing import Callable, Tuple

import numpy as np

from .errors import ConvexityViolation, DomainError
from .functions import Interval, TargetFunction

__all__ = [
    "DEFAULT_TOL", "SegmentFit", "fit_segment", "error_of_interval",
    "segment_error_oracle", "equioscillation_residuals",
]

DEFAULT_TOL = 1e-12
MAX_BISECTIONS = 200
DEGENERATE_WIDTH = 1e-15


@dataclass(frozen=True)
class SegmentFit:
    interval: Interval
    slope: float
    intercept: float
    c: float
    d: float
    error: float

    def __call__(self, x):
        return self.slope * x + self.intercept

    def to_dict(self) -> dict:
        return {
            "lo": self.interval.lo, "hi": self.interval.hi,
            "slope": self.slope, "intercept": self.intercept,
            "c": self.c, "d": self.d, "error": self.error,
        }

    @classmethod
    def from_dict(cls, data: dict) -> "SegmentFit":
        return cls(Interval(data["lo"], data["hi"]), float(data["slope"]),
                   float(data["intercept"]), float(data["c"]), float(data["d"]),
                   float(data["error"]))


def _increasing_root(g: Callable[[float], float], lo: float, hi: float, tol: float) -> float:
    """Root of an increasing ``g`` on [lo, hi] by bisection.

    The last bracket is finished with one interpolation step, which is exact
    when ``g`` is affine (constant f'') and harmless otherwise.
    """
    glo, ghi = g(lo), g(hi)
    if not (glo <= 0.0 <= ghi):
        raise ConvexityViolation(
            f"f' - slope does not change sign on [{lo!r}, {hi!r}] "
            f"(values {glo!r}, {ghi!r}); f' is not increasing there")
    if glo == 0.0:
        return lo
    if ghi == 0.0:
        return hi
    for _ in range(MAX_BISECTIONS):
        if hi - lo <= tol:
            break
        mid = 0.5 * (lo + hi)
        if not lo < mid < hi:
            break
        gm = g(mid)
        if gm == 0.0:
            return mid
        if gm < 0.0:
            lo, glo = mid, gm
        else:
            hi, ghi = mid, gm
    root = lo - glo * (hi - lo) / (ghi - glo)
    return min(max(root, lo), hi)


def _fit(f: TargetFunction, a: float, b: float, tol: float) -> Tuple[float, float, float, float, float]:
    """(slope, intercept, c, d, error) on [a, b] without building objects."""
    fa = f.eval(a)
    if b - a < DEGENERATE_WIDTH:
        k = f.d1(a)
        return k, fa - k * a, a, a, 0.0
    d1 = f.d1
    fb = f.eval(b)
    slope = (fb - fa) / (b - a)
    c = _increasing_root(lambda x: d1(x) - slope, a, b, tol)
    fc = f.eval(c)
    mean_slope = (fc - fa) / (c - a) if c > a else d1(a)
    d = _increasing_root(lambda x: d1(x) - mean_slope, a, c, tol) if c > a else a
    intercept = 0.5 * (fa + fc) - 0.5 * (a + c) * slope
    error = 0.5 * (c - a) * (d1(c) - d1(d))
    return slope, intercept, c, d, error


def _check_domain(f: TargetFunction, iv: Interval):
    slack = 1e-12 * f.domain.width
    if not f.domain.contains(iv, slack):
        raise DomainError(f"[{iv.lo}, {iv.hi}] is outside the domain "
                          f"[{f.domain.lo}, {f.domain.hi}] of {f.name}")


def fit_segment(f: TargetFunction, iv: Interval, tol: float = DEFAULT_TOL) -> SegmentFit:
    """Optimal line for ``f`` on ``iv``, with its characteristic points and error.

    ``tol`` is the abscissa tolerance for locating c and d. Raises
    :class:`DomainError` if ``iv`` leaves the domain of ``f`` and
    :class:`ConvexityViolation` if f' fails to bracket a root.
    """
    if tol <= 0:
        raise ValueError(f"tol must be positive, got {tol}")
    _check_domain(f, iv)
    return SegmentFit(iv, *_fit(f, iv.lo, iv.hi, tol))


def error_of_interval(f: TargetFunction, iv: Interval, tol: float = DEFAULT_TOL) -> float:
    """Only the optimal single-line error of ``f`` on ``iv``."""
    return fit_segment(f, iv, tol).error


def segment_error_oracle(f: TargetFunction, s: SegmentFit, grid: int = 100_000) -> float:
    """Brute-force max |f(x) - S(x)| over a uniform grid on the segment's interval."""
    if grid < 1000:
        raise ValueError(f"grid must be >= 1000, got {grid}")
    xs = s.interval.grid(grid)
    return float(np.max(np.abs(f.values(xs) - (s.slope * xs + s.intercept))))


def equioscillation_residuals(f: TargetFunction, s: SegmentFit) -> Tuple[float, float, float]:
    """f - S at (a, c, b). For an optimal fit these are (+err, -err, +err)."""
    a, b = s.interval.lo, s.interval.hi
    return tuple(f.eval(x) - s(x) for x in (a, s.c, b))
