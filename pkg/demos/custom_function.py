"""
Your own convex function
========================

Any strictly convex expression in x works. Derivatives are taken
symbolically, so no step sizes or finite differences are involved.
"""

import numpy as np

from minimax_relu import Interval, balance, error_bounds, from_expression
from minimax_relu.errors import NotStrictlyConvex

f = from_expression("x*ln(x) + exp(x)/4", Interval(0.5, 3))
print("f''(1) =", f.d2(1.0))

for n in (2, 4, 8, 16):
    pwl, report = balance(f, n)
    b = error_bounds(f, n)
    print(f"n={n:>2}  error={report.mean_error:.3e}  bounds=[{b.lower:.3e}, {b.upper:.3e}]  "
          f"error*n^2={report.mean_error * n * n:.4f}")

# the residual touches +-error three times on each piece
pwl, _ = balance(f, 3)
xs = np.linspace(0.5, 3, 7)
print("residual samples:", np.round(f.values(xs) - pwl(xs), 5))

try:
    balance(from_expression("sqrt(x)", Interval(1, 4)), 3)
except NotStrictlyConvex as exc:
    print("rejected:", exc)
