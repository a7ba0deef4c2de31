"""
From a piecewise-linear fit to ReLU weights
===========================================

The balanced fit is continuous and piecewise linear, so a ReLU network can
represent it exactly. Two layouts are built: a shallow one with two wide
hidden layers and a deep one that never exceeds five neurons per layer.
"""

import numpy as np

from minimax_relu import balance, build_fixed_depth, build_fixed_width, builtin, verify_equivalence

f = builtin("exp")
pwl, report = balance(f, 5)
print("breakpoints:", np.round(pwl.breakpoints, 5))
print("segment errors:", np.round(pwl.errors, 7))

shallow = build_fixed_depth(pwl)
deep = build_fixed_width(pwl)
for net in (shallow, deep):
    print(f"{net.architecture:<12} hidden widths {net.hidden_widths[:6]}{'...' if net.depth > 6 else ''} "
          f"({net.hidden_neurons} neurons, {net.depth} hidden layers)")
    print(f"{'':<12} max |net - pwl| on 10^4 points: {verify_equivalence(net, pwl):.2e}")

# outside the domain both networks are flat
print("net(-1) =", shallow(-1.0), " first node =", pwl.node_values[0])
print("net(2)  =", deep(2.0), " last node  =", pwl.node_values[-1])

# the network inherits the minimax error of the fit
xs = f.domain.grid(20_001)
print("max |net - f| =", float(np.max(np.abs(shallow(xs) - f.values(xs)))),
      " mean segment error =", report.mean_error)
