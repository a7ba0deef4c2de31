"""Reproduction runs over the reference (function, n) grid."""

from __future__ import annotations

import time
from dataclasses import dataclass
from typing import List, Optional

from .balancer import DEFAULT_MAX_ROUNDS, DEFAULT_STEPSIZE, BalanceReport, PwlApproximation, balance
from .bounds import BoundsReport, error_bounds
from .functions import TargetFunction, builtin
from .reference import FUNCTIONS, MEAN_TOLERANCE, REFERENCE, SEGMENT_COUNTS, ReferenceCell

# f''(0) = 0 for x^3, so it is only convex in the boundary-relaxed sense
RELAXED = {"cube"}


@dataclass
class CellResult:
    function: str
    n: int
    f: TargetFunction
    pwl: PwlApproximation
    report: BalanceReport
    bounds: BoundsReport
    seconds: float
    reference: Optional[ReferenceCell]

    @property
    def mean_deviation(self) -> float:
        return abs(self.report.mean_error - self.reference.mean)

    @property
    def ok(self) -> bool:
        return self.reference is None or self.mean_deviation <= MEAN_TOLERANCE


def run_cell(name: str, n: int, stepsize: float = DEFAULT_STEPSIZE,
             max_rounds: int = DEFAULT_MAX_ROUNDS) -> CellResult:
    f = builtin(name)
    start = time.perf_counter()
    pwl, report = balance(f, n, stepsize, max_rounds, relaxed_convexity=name in RELAXED)
    seconds = time.perf_counter() - start
    return CellResult(name, n, f, pwl, report, error_bounds(f, n), seconds,
                      REFERENCE.get((name, n)))


def run_table(stepsize: float = DEFAULT_STEPSIZE) -> List[CellResult]:
    return [run_cell(name, n, stepsize) for name in FUNCTIONS for n in SEGMENT_COUNTS]
