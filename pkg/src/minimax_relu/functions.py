"""Strictly convex target functions on a finite interval."""

from __future__ import annotations

import math
from dataclasses import dataclass, field, replace
from typing import Callable, Optional, Tuple

import numpy as np

from . import expression as ex
from .errors import DomainError, NotStrictlyConvex, UnknownFunction

__all__ = [
    "Interval", "TargetFunction", "BUILTINS", "builtin", "from_expression",
    "validate_convexity",
]


@dataclass(frozen=True)
class Interval:
    lo: float
    hi: float

    def __post_init__(self):
        lo, hi = float(self.lo), float(self.hi)
        if not (math.isfinite(lo) and math.isfinite(hi)):
            raise DomainError(f"interval bounds must be finite, got [{lo}, {hi}]")
        if not lo < hi:
            raise DomainError(f"interval needs lo < hi, got [{lo}, {hi}]")
        object.__setattr__(self, "lo", lo)
        object.__setattr__(self, "hi", hi)

    @property
    def width(self) -> float:
        return self.hi - self.lo

    def contains(self, other: "Interval", slack: float = 0.0) -> bool:
        return self.lo - slack <= other.lo and other.hi <= self.hi + slack

    def grid(self, count: int) -> np.ndarray:
        """``count`` uniformly spaced points, both endpoints included."""
        return np.linspace(self.lo, self.hi, count)


@dataclass(frozen=True)
class TargetFunction:
    """A scalar function with its first and second derivatives.

    ``source`` identifies the function for serialization: ``("builtin", name)``
    or ``("expr", text)``. ``d2_monotone`` marks functions whose f'' is known to
    be monotone, so its extrema on any interval sit at the endpoints.
    """

    name: str
    eval: Callable[[float], float]
    d1: Callable[[float], float]
    d2: Callable[[float], float]
    domain: Interval
    source: Tuple[str, str] = ("custom", "")
    eval_array: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    d2_array: Optional[Callable[[np.ndarray], np.ndarray]] = field(default=None, repr=False)
    d2_monotone: bool = False

    def __call__(self, x: float) -> float:
        return self.eval(x)

    def values(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.eval_array is not None:
            return self.eval_array(xs)
        return np.array([self.eval(float(x)) for x in xs.ravel()]).reshape(xs.shape)

    def second_derivatives(self, xs) -> np.ndarray:
        xs = np.asarray(xs, dtype=float)
        if self.d2_array is not None:
            return self.d2_array(xs)
        return np.array([self.d2(float(x)) for x in xs.ravel()]).reshape(xs.shape)

    def on(self, domain: Interval) -> "TargetFunction":
        """Same function on a different domain."""
        return replace(self, domain=domain)


def _builtin_exp():
    return TargetFunction(
        name="exp", eval=math.exp, d1=math.exp, d2=math.exp,
        domain=Interval(0.0, 1.0), source=("builtin", "exp"),
        eval_array=np.exp, d2_array=np.exp, d2_monotone=True,
    )


def _builtin_square():
    return TargetFunction(
        name="square", eval=lambda x: x * x, d1=lambda x: 2.0 * x, d2=lambda x: 2.0,
        domain=Interval(-1.0, 1.0), source=("builtin", "square"),
        eval_array=np.square, d2_array=lambda xs: np.full(np.shape(xs), 2.0),
        d2_monotone=True,
    )


def _builtin_cube():
    return TargetFunction(
        name="cube", eval=lambda x: x * x * x, d1=lambda x: 3.0 * x * x, d2=lambda x: 6.0 * x,
        domain=Interval(0.0, 1.0), source=("builtin", "cube"),
        eval_array=lambda xs: xs ** 3, d2_array=lambda xs: 6.0 * xs, d2_monotone=True,
    )


BUILTINS = {"exp": _builtin_exp, "square": _builtin_square, "cube": _builtin_cube}


def builtin(name: str, domain: Optional[Interval] = None) -> TargetFunction:
    """One of ``exp``, ``square``, ``cube`` with analytic derivatives.

    Default domains are [0, 1], [-1, 1] and [0, 1] respectively.
    """
    try:
        f = BUILTINS[name]()
    except KeyError:
        raise UnknownFunction(f"unknown built-in {name!r}; choose from {sorted(BUILTINS)}") from None
    return f if domain is None else f.on(domain)


def from_expression(text: str, domain: Interval, name: Optional[str] = None) -> TargetFunction:
    """Build a target function from expression text, deriving f' and f'' symbolically."""
    tree = ex.parse_expression(text)
    first = ex.differentiate(tree, 1)
    second = ex.differentiate(first, 1)
    return TargetFunction(
        name=name or text,
        eval=ex.compile_expression(tree),
        d1=ex.compile_expression(first),
        d2=ex.compile_expression(second),
        domain=domain,
        source=("expr", text),
        eval_array=ex.compile_expression(tree, vectorized=True),
        d2_array=ex.compile_expression(second, vectorized=True),
    )


def validate_convexity(f: TargetFunction, grid_size: int = 1024, relaxed: bool = False) -> None:
    """Check f'' > 0 on ``grid_size`` uniform points of ``f.domain``.

    In relaxed mode the two endpoints only need f'' >= 0, which admits x^3 on
    [0, 1]. Raises :class:`NotStrictlyConvex` at the first failing point.
    """
    if grid_size < 64:
        raise ValueError(f"grid_size must be >= 64, got {grid_size}")
    xs = f.domain.grid(grid_size)
    for i, x in enumerate(xs):
        x = float(x)
        v = f.d2(x)
        endpoint = i == 0 or i == grid_size - 1
        ok = v >= 0.0 if (relaxed and endpoint) else v > 0.0
        if not ok or not math.isfinite(v):
            raise NotStrictlyConvex(x, v, f.name)
