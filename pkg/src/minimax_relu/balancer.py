"""Equal-error balancing of breakpoints for the optimal n-piece approximation.

Each round sweeps the interior breakpoints left to right. A breakpoint whose
left segment has the larger optimal error moves left in fixed steps until that
is no longer the case, and symmetrically to the right. Rounds repeat while the
spread between the largest and smallest segment error keeps shrinking.

The per-breakpoint stepping loop is executed in one of two ways with identical
results: ``"literal"`` takes one step at a time, ``"jump"`` finds the same
stopping step by exponential and binary search over the step count. The jump
is valid because the left error grows and the right error shrinks as the
breakpoint moves right, so the stepping condition flips exactly once.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable, List, Optional, Sequence, Tuple

import numpy as np

from .functions import Interval, TargetFunction, validate_convexity
from .segment import DEFAULT_TOL, SegmentFit, _fit, equioscillation_residuals

__all__ = [
    "DEFAULT_STEPSIZE", "DEFAULT_MAX_ROUNDS", "Partition", "PwlApproximation",
    "BalanceReport", "init_partition", "random_partition", "fit_partition",
    "sew", "balance", "optimality_check",
]

DEFAULT_STEPSIZE = 1e-5
DEFAULT_MAX_ROUNDS = 200_000
# breakpoints never come closer than this many steps to a neighbour
GUARD_STEPS = 10
# spread below which the outer loop stops regardless of the decrease test
GAP_FLOOR = 1e-12
# segment errors within this absolute difference count as equal
TIE_TOL = 1e-13


@dataclass(frozen=True)
class Partition:
    breakpoints: Tuple[float, ...]

    def __post_init__(self):
        bps = tuple(float(x) for x in self.breakpoints)
        if len(bps) < 2:
            raise ValueError("a partition needs at least two breakpoints")
        if not all(x < y for x, y in zip(bps, bps[1:])):
            raise ValueError(f"breakpoints must be strictly increasing: {bps}")
        object.__setattr__(self, "breakpoints", bps)

    @property
    def n(self) -> int:
        return len(self.breakpoints) - 1

    def intervals(self) -> List[Interval]:
        b = self.breakpoints
        return [Interval(b[i], b[i + 1]) for i in range(self.n)]


def init_partition(domain: Interval, n: int) -> Partition:
    """Evenly spaced partition of ``domain`` into ``n`` pieces."""
    if n < 1:
        raise ValueError(f"need n >= 1 segments, got {n}")
    lo, hi = domain.lo, domain.hi
    bps = [lo + (hi - lo) * i / n for i in range(n)] + [hi]
    return Partition(tuple(bps))


def random_partition(domain: Interval, n: int, seed: int = 0, min_fraction: float = 0.2) -> Partition:
    """Random strictly increasing partition; every piece is at least
    ``min_fraction`` of the even width, so balancing starts from a valid state."""
    if n < 1:
        raise ValueError(f"need n >= 1 segments, got {n}")
    rng = np.random.default_rng(seed)
    weights = min_fraction + rng.random(n)
    cuts = np.cumsum(weights) / weights.sum()
    bps = [domain.lo] + [domain.lo + domain.width * float(c) for c in cuts[:-1]] + [domain.hi]
    return Partition(tuple(bps))


@dataclass(frozen=True)
class PwlApproximation:
    """Per-interval optimal fits plus the continuous function sewn from them.

    ``node_values`` are the values of the sewn function at the breakpoints;
    between breakpoints it is linear and outside it is held constant.
    """

    segments: Tuple[SegmentFit, ...]
    node_values: Tuple[float, ...]
    max_sew_gap: float

    @property
    def n(self) -> int:
        return len(self.segments)

    @property
    def breakpoints(self) -> Tuple[float, ...]:
        return tuple(s.interval.lo for s in self.segments) + (self.segments[-1].interval.hi,)

    @property
    def errors(self) -> Tuple[float, ...]:
        return tuple(s.error for s in self.segments)

    @property
    def mean_error(self) -> float:
        return math.fsum(self.errors) / self.n

    @property
    def gap(self) -> float:
        return max(self.errors) - min(self.errors)

    @property
    def slopes(self) -> Tuple[float, ...]:
        """Slopes of the sewn function (not of the raw fits)."""
        x, v = self.breakpoints, self.node_values
        return tuple((v[i + 1] - v[i]) / (x[i + 1] - x[i]) for i in range(self.n))

    def __call__(self, x):
        return np.interp(x, self.breakpoints, self.node_values)


@dataclass
class BalanceReport:
    rounds: int
    per_round_gap: List[float]
    final_errors: List[float]
    mean_error: float
    converged: bool
    initial_gap: float = 0.0
    stop_reason: str = ""
    moves: int = field(default=0)

    @property
    def gap(self) -> float:
        """Spread of the returned segment errors."""
        return max(self.final_errors) - min(self.final_errors)


def fit_partition(f: TargetFunction, partition: Partition, tol: float = DEFAULT_TOL) -> List[SegmentFit]:
    """Independent optimal fit on every piece of ``partition``."""
    return [SegmentFit(iv, *_fit(f, iv.lo, iv.hi, tol)) for iv in partition.intervals()]


def sew(raw: Sequence[SegmentFit]) -> PwlApproximation:
    """Join contiguous fits into a continuous function by averaging at joints."""
    raw = tuple(raw)
    if not raw:
        raise ValueError("need at least one segment")
    nodes = [raw[0](raw[0].interval.lo)]
    gap = 0.0
    for left, right in zip(raw, raw[1:]):
        x = left.interval.hi
        if x != right.interval.lo:
            raise ValueError(f"segments are not contiguous at {x} / {right.interval.lo}")
        lv, rv = left(x), right(x)
        gap = max(gap, abs(lv - rv))
        nodes.append(0.5 * (lv + rv))
    nodes.append(raw[-1](raw[-1].interval.hi))
    return PwlApproximation(raw, tuple(nodes), gap)


class _Balancer:
    def __init__(self, f, bps, stepsize, tol, method, on_move):
        self.f = f
        self.bps = list(bps)
        self.s = stepsize
        self.tol = tol
        self.method = method
        self.on_move = on_move
        self.moves = 0
        self.errs = [self.err(self.bps[i], self.bps[i + 1]) for i in range(len(self.bps) - 1)]

    def err(self, a, b):
        return _fit(self.f, a, b, self.tol)[4]

    def gap(self):
        return max(self.errs) - min(self.errs)

    def adjust(self, j):
        """Run the stepping loop for interior breakpoint ``j``."""
        left, x0, right = self.bps[j - 1], self.bps[j], self.bps[j + 1]
        el, er = self.errs[j - 1], self.errs[j]
        if el > er + TIE_TOL:
            direction = -1
            room = x0 - left
        elif el < er - TIE_TOL:
            direction = 1
            room = right - x0
        else:
            return
        s = self.s
        guard = GUARD_STEPS * s
        kmax = int(math.floor((room - guard) / s))
        while kmax > 0 and room - kmax * s < guard:
            kmax -= 1
        if kmax < 1:
            return

        cache = {}

        def state(k):
            if k not in cache:
                x = x0 + direction * k * s
                cache[k] = (x, self.err(left, x), self.err(x, right))
            return cache[k]

        def keeps_going(k):
            _, a, b = state(k)
            return a > b + TIE_TOL if direction < 0 else a < b - TIE_TOL

        if self.method == "literal":
            k = 1
            while k < kmax and keeps_going(k):
                k += 1
        else:
            k = self._first_stop(keeps_going, kmax)
        x, el, er = state(k)
        self.bps[j] = x
        self.errs[j - 1], self.errs[j] = el, er
        self.moves += 1
        if self.on_move is not None:
            self.on_move(tuple(self.bps))

    @staticmethod
    def _first_stop(keeps_going, kmax):
        """Smallest k in [1, kmax] with keeps_going(k) false, else kmax."""
        lo, hi = 0, 1  # keeps_going(lo) holds (k = 0 is the start)
        while hi < kmax and keeps_going(hi):
            lo, hi = hi, min(2 * hi, kmax)
        if hi == kmax and keeps_going(hi):
            return kmax
        while hi - lo > 1:
            mid = (lo + hi) // 2
            if keeps_going(mid):
                lo = mid
            else:
                hi = mid
        return hi


def balance(
    f: TargetFunction,
    n: int,
    stepsize: float = DEFAULT_STEPSIZE,
    max_rounds: int = DEFAULT_MAX_ROUNDS,
    *,
    tol: float = DEFAULT_TOL,
    init: Optional[Partition] = None,
    method: str = "jump",
    check_convexity: bool = True,
    relaxed_convexity: bool = False,
    on_move: Optional[Callable[[Tuple[float, ...]], None]] = None,
) -> Tuple[PwlApproximation, BalanceReport]:
    """Optimal ``n``-piece continuous piecewise-linear approximation of ``f``.

    Starts from ``init`` (default: even partition). Stops when a round fails
    to shrink the error spread, when the spread falls below 1e-12, or after
    ``max_rounds`` rounds. A round that widens the spread is counted but
    undone, so the result is the best partition seen. ``on_move`` is called with the breakpoints after
    every breakpoint adjustment.
    """
    if n < 1:
        raise ValueError(f"need n >= 1 segments, got {n}")
    if not stepsize > 0:
        raise ValueError(f"stepsize must be positive, got {stepsize}")
    if max_rounds < 1:
        raise ValueError(f"max_rounds must be >= 1, got {max_rounds}")
    if method not in ("jump", "literal"):
        raise ValueError(f"method must be 'jump' or 'literal', got {method!r}")
    if check_convexity:
        validate_convexity(f, relaxed=relaxed_convexity)
    part = init if init is not None else init_partition(f.domain, n)
    if part.n != n:
        raise ValueError(f"initial partition has {part.n} pieces, expected {n}")
    if part.breakpoints[0] != f.domain.lo or part.breakpoints[-1] != f.domain.hi:
        raise ValueError("initial partition must span the function's domain")

    state = _Balancer(f, part.breakpoints, stepsize, tol, method, on_move)
    initial_gap = prev_gap = state.gap()
    gaps: List[float] = []
    converged, reason = False, "max_rounds"
    for _ in range(max_rounds):
        before = (list(state.bps), list(state.errs))
        for j in range(1, n):
            state.adjust(j)
        gap = state.gap()
        gaps.append(gap)
        if gap <= GAP_FLOOR:
            converged, reason = True, "gap_floor"
            break
        if not gap < prev_gap:
            # the round made things worse at step resolution; keep the prior state
            if gap > prev_gap:
                state.bps, state.errs = before
            converged, reason = True, "stalled"
            break
        prev_gap = gap

    pwl = sew(fit_partition(f, Partition(tuple(state.bps)), tol))
    report = BalanceReport(
        rounds=len(gaps),
        per_round_gap=gaps,
        final_errors=list(pwl.errors),
        mean_error=pwl.mean_error,
        converged=converged,
        initial_gap=initial_gap,
        stop_reason=reason,
        moves=state.moves,
    )
    return pwl, report


def optimality_check(f: TargetFunction, pwl: PwlApproximation, tol: float) -> bool:
    """True when all segment errors agree within ``tol`` and every segment
    equioscillates at its endpoints and interior point."""
    if pwl.gap > tol:
        return False
    for s in pwl.segments:
        scale = 1e-9 * max(1.0, s.error)
        ra, rc, rb = equioscillation_residuals(f, s)
        if abs(ra - s.error) > scale or abs(rc + s.error) > scale or abs(rb - s.error) > scale:
            return False
    return True
