"""Explicit ReLU networks that compute a continuous piecewise-linear function.

Segment ``i`` with slope ``k`` on ``[x_i, x_{i+1}]`` becomes the unit::

    O_i(x) = sgn(k) * relu(|k| * (relu(x - x_i) - relu(x - x_{i+1})))

which is 0 left of the segment, ``k (x - x_i)`` on it and ``k (x_{i+1} - x_i)``
to its right. The network output is ``v_0 + sum_i O_i(x)``, where ``v_0`` is the
function value at the left end. The result equals the function on
``[x_0, x_n]`` and is constant outside it.

Two layouts are built:

* ``fixed_depth``: two hidden layers of widths 2n and n, so 3n hidden neurons.
* ``fixed_width``: 4n hidden layers of width 5 with channels
  ``(t, p, q, o, acc)``. ``t = relu(x - x_0)`` carries the input,
  ``p``/``q`` hold the two shifted ramps, ``o`` builds ``|k| * ramp``, and
  ``acc`` holds ``C + partial sum``. Every carried value is non-negative, so
  passing it through a ReLU is lossless; ``C`` (``meta["shift"]``) is chosen
  large enough to keep ``acc`` positive.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import List, Optional, Sequence, Tuple

import numpy as np

from .balancer import PwlApproximation

__all__ = [
    "Layer", "ReluNetwork", "FIXED_DEPTH", "FIXED_WIDTH", "build_fixed_depth",
    "build_fixed_width", "build", "forward", "verify_equivalence",
]

FIXED_DEPTH = "fixed_depth"
FIXED_WIDTH = "fixed_width"
WIDTH = 5


def _frozen(a) -> np.ndarray:
    a = np.array(a, dtype=float)
    a.setflags(write=False)
    return a


@dataclass(frozen=True)
class Layer:
    weights: np.ndarray  # (out, in)
    biases: np.ndarray   # (out,)

    def __post_init__(self):
        w, b = _frozen(self.weights), _frozen(self.biases)
        if w.ndim != 2 or b.ndim != 1 or w.shape[0] != b.shape[0]:
            raise ValueError(f"bad layer shapes: weights {w.shape}, biases {b.shape}")
        object.__setattr__(self, "weights", w)
        object.__setattr__(self, "biases", b)

    @property
    def n_in(self) -> int:
        return self.weights.shape[1]

    @property
    def n_out(self) -> int:
        return self.weights.shape[0]


@dataclass(frozen=True)
class ReluNetwork:
    """Dense layers; ReLU after every layer except the last."""

    layers: Tuple[Layer, ...]
    architecture: str
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        layers = tuple(self.layers)
        if len(layers) < 2:
            raise ValueError("a network needs at least one hidden layer")
        if layers[0].n_in != 1 or layers[-1].n_out != 1:
            raise ValueError("networks map one input to one output")
        for k, (a, b) in enumerate(zip(layers, layers[1:])):
            if b.n_in != a.n_out:
                raise ValueError(f"layer {k + 1} expects {b.n_in} inputs, layer {k} gives {a.n_out}")
        object.__setattr__(self, "layers", layers)

    @property
    def hidden_widths(self) -> List[int]:
        return [layer.n_out for layer in self.layers[:-1]]

    @property
    def hidden_neurons(self) -> int:
        return sum(self.hidden_widths)

    @property
    def depth(self) -> int:
        """Number of hidden layers."""
        return len(self.layers) - 1

    def __call__(self, x):
        return forward(self, x)


def _sgn(k: float) -> float:
    return -1.0 if k < 0 else 1.0


def _check(pwl: PwlApproximation) -> Tuple[Sequence[float], Sequence[float], Sequence[float]]:
    xs, vs, ks = pwl.breakpoints, pwl.node_values, pwl.slopes
    if pwl.n < 1:
        raise ValueError("need at least one segment")
    for name, values in (("breakpoint", xs), ("node value", vs), ("slope", ks)):
        if not all(math.isfinite(v) for v in values):
            raise ValueError(f"non-finite {name} in approximation: {values}")
    return xs, vs, ks


def _meta(pwl, hidden, depth, **extra):
    return {"n_segments": pwl.n, "hidden_neurons": hidden, "depth": depth,
            "domain": [pwl.breakpoints[0], pwl.breakpoints[-1]], **extra}


def build_fixed_depth(pwl: PwlApproximation) -> ReluNetwork:
    """Two hidden layers: 2n ramps, then n scaled differences, summed at the output."""
    xs, vs, ks = _check(pwl)
    n = pwl.n
    w1 = np.ones((2 * n, 1))
    b1 = np.empty(2 * n)
    w2 = np.zeros((n, 2 * n))
    w3 = np.zeros((1, n))
    for i in range(n):
        b1[2 * i], b1[2 * i + 1] = -xs[i], -xs[i + 1]
        w2[i, 2 * i], w2[i, 2 * i + 1] = abs(ks[i]), -abs(ks[i])
        w3[0, i] = _sgn(ks[i])
    layers = (Layer(w1, b1), Layer(w2, np.zeros(n)), Layer(w3, [vs[0]]))
    return ReluNetwork(layers, FIXED_DEPTH, _meta(pwl, 3 * n, 2))


def build_fixed_width(pwl: PwlApproximation) -> ReluNetwork:
    """Four width-5 hidden layers per segment, 4n hidden layers in total."""
    xs, vs, ks = _check(pwl)
    n = pwl.n
    x0 = xs[0]
    shift = max(abs(v - vs[0]) for v in vs) + 1.0
    T, P, Q, O, A = range(WIDTH)
    eye = np.eye(WIDTH)
    layers = []
    for i in range(n):
        lo, hi = xs[i] - x0, xs[i + 1] - x0
        # ramps: (t, relu(t - lo), relu(t - hi), 0, acc)
        if i == 0:
            w = np.zeros((WIDTH, 1))
            w[[T, P, Q], 0] = 1.0
            b = np.array([-x0, -xs[0], -xs[1], 0.0, shift])
        else:
            w = np.zeros((WIDTH, WIDTH))
            w[T, T] = w[P, T] = w[Q, T] = w[A, A] = 1.0
            b = np.array([0.0, -lo, -hi, 0.0, 0.0])
        layers.append(Layer(w, b))
        # difference of ramps
        w = eye.copy()
        w[O] = 0.0
        w[O, P], w[O, Q] = 1.0, -1.0
        layers.append(Layer(w, np.zeros(WIDTH)))
        # scale by |k|
        w = eye.copy()
        w[O, O] = abs(ks[i])
        layers.append(Layer(w, np.zeros(WIDTH)))
        # accumulate with sign
        w = eye.copy()
        w[A, O] = _sgn(ks[i])
        layers.append(Layer(w, np.zeros(WIDTH)))
    out = np.zeros((1, WIDTH))
    out[0, A] = 1.0
    layers.append(Layer(out, [vs[0] - shift]))
    return ReluNetwork(tuple(layers), FIXED_WIDTH, _meta(pwl, WIDTH * 4 * n, 4 * n, shift=shift))


def build(pwl: PwlApproximation, architecture: str) -> ReluNetwork:
    arch = architecture.replace("-", "_")
    if arch == FIXED_DEPTH:
        return build_fixed_depth(pwl)
    if arch == FIXED_WIDTH:
        return build_fixed_width(pwl)
    raise ValueError(f"unknown architecture {architecture!r}")


def forward(net: ReluNetwork, x):
    """Evaluate ``net`` at a scalar or an array of inputs."""
    xs = np.asarray(x, dtype=float)
    h = xs.reshape(1, -1)
    last = len(net.layers) - 1
    for k, layer in enumerate(net.layers):
        h = layer.weights @ h + layer.biases[:, None]
        if k < last:
            h = np.maximum(h, 0.0)
    out = h[0]
    if xs.ndim == 0:
        return float(out[0])
    return out.reshape(xs.shape)


def verify_equivalence(net: ReluNetwork, pwl: PwlApproximation, grid: int = 10_000,
                       xs: Optional[np.ndarray] = None) -> float:
    """Max |net(x) - pwl(x)| over a uniform grid on the breakpoint span."""
    if xs is None:
        if grid < 1000:
            raise ValueError(f"grid must be >= 1000, got {grid}")
        bps = pwl.breakpoints
        xs = np.linspace(bps[0], bps[-1], grid)
    return float(np.max(np.abs(forward(net, xs) - pwl(xs))))
