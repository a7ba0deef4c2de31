"""
Reproducing the reference runs
==============================

Balance e^x on [0, 1], x^2 on [-1, 1] and x^3 on [0, 1] with 2, 3, 5 and 10
pieces, and put the result next to the published numbers.
"""

from minimax_relu.experiments import run_table

results = run_table()

print(f"{'f':<7}{'n':>3}{'mean':>10}{'published':>11}{'lower':>9}{'upper':>9}{'gap':>11}")
for r in results:
    print(f"{r.function:<7}{r.n:>3}{r.report.mean_error:>10.5f}{r.reference.mean:>11.5f}"
          f"{r.bounds.lower:>9.5f}{r.bounds.upper:>9.5f}{r.report.gap:>11.2e}")

# x^2 has constant curvature, so both bounds collapse onto the optimum
square = [r for r in results if r.function == "square"]
print("\nx^2 error * n^2:", [round(r.report.mean_error * r.n ** 2, 6) for r in square])

# and every run lands inside its bounds, up to rounding
for r in results:
    slack = 1e-12 * r.bounds.upper
    assert r.bounds.lower - slack <= r.report.mean_error <= r.bounds.upper + slack
