import math

import numpy as np
import pytest

from minimax_relu.errors import ConvexityViolation, DomainError
from minimax_relu.functions import Interval, builtin, from_expression
from minimax_relu.segment import (equioscillation_residuals, error_of_interval, fit_segment,
                                  segment_error_oracle)

from oracles import grid_max_residual, half_sag


def test_square_whole_domain():
    s = fit_segment(builtin("square"), Interval(-1, 1))
    assert s.c == pytest.approx(0.0, abs=1e-12)
    assert s.slope == 0.0
    assert s.intercept == pytest.approx(0.5, abs=1e-15)
    assert s.d == pytest.approx(-0.5, abs=1e-12)
    assert s.error == pytest.approx(0.5, abs=1e-15)


def test_square_unit_interval():
    s = fit_segment(builtin("square"), Interval(0, 1))
    assert (s.c, s.d) == pytest.approx((0.5, 0.25), abs=1e-12)
    assert s.error == pytest.approx(0.125, abs=1e-15)
    assert (s.slope, s.intercept) == pytest.approx((1.0, -0.125), abs=1e-15)


def test_exp_unit_interval():
    f = builtin("exp")
    s = fit_segment(f, Interval(0, 1))
    assert s.c == pytest.approx(math.log(math.e - 1), abs=1e-12)
    # dense-grid oracle
    oracle = grid_max_residual(f, s.slope, s.intercept, 0.0, 1.0, 10**6 + 1)
    assert s.error == pytest.approx(oracle, abs=1e-6)
    assert s.error == pytest.approx(0.10593, abs=1e-5)


def test_oracle_on_square():
    f = builtin("square")
    s = fit_segment(f, Interval(-1, 1))
    assert segment_error_oracle(f, s, 10001) == pytest.approx(0.5, abs=1e-8)


def test_oracle_on_tiny_interval():
    f = builtin("square").on(Interval(0, 1))
    s = fit_segment(f, Interval(0, 0.001))
    expected = 0.001 ** 2 * 2 / 16
    assert s.error == pytest.approx(expected, rel=1e-9)
    assert segment_error_oracle(f, s, 10001) == pytest.approx(expected, rel=1e-6)


def test_oracle_on_exp():
    f = builtin("exp")
    s = fit_segment(f, Interval(0, 1))
    assert segment_error_oracle(f, s, 100_000) == pytest.approx(s.error, abs=1e-6)


def test_oracle_grid_minimum():
    f = builtin("exp")
    with pytest.raises(ValueError):
        segment_error_oracle(f, fit_segment(f, Interval(0, 1)), 999)


@pytest.mark.parametrize("a, b, expected", [(0, 1, 0.125), (0, 0.5, 0.03125)])
def test_error_of_interval(a, b, expected):
    assert error_of_interval(builtin("square"), Interval(a, b)) == pytest.approx(expected, abs=1e-15)


def test_shrinking_interval_reduces_error():
    f = builtin("square")
    assert error_of_interval(f, Interval(0, 0.5)) < error_of_interval(f, Interval(0, 1))


def _random_subintervals(f, count, seed):
    rng = np.random.default_rng(seed)
    lo, hi = f.domain.lo, f.domain.hi
    out = []
    while len(out) < count:
        a, b = sorted(rng.uniform(lo, hi, 2))
        if b - a > 1e-3:
            out.append(Interval(a, b))
    return out


def test_closed_form_matches_grid_oracle(builtin_fn):
    for iv in _random_subintervals(builtin_fn, 100, 1):
        s = fit_segment(builtin_fn, iv)
        brute = segment_error_oracle(builtin_fn, s, 100_000)
        assert abs(s.error - brute) <= 1e-7 * max(1.0, s.error)


def test_closed_form_matches_chord_gap_oracle(builtin_fn):
    for iv in _random_subintervals(builtin_fn, 30, 2):
        assert error_of_interval(builtin_fn, iv) == pytest.approx(
            half_sag(builtin_fn, iv.lo, iv.hi), rel=1e-9, abs=1e-15)


def test_equioscillation(builtin_fn):
    for iv in _random_subintervals(builtin_fn, 100, 3):
        s = fit_segment(builtin_fn, iv)
        ra, rc, rb = equioscillation_residuals(builtin_fn, s)
        tol = 1e-9 * max(1.0, s.error)
        assert abs(ra - s.error) <= tol
        assert abs(rc + s.error) <= tol
        assert abs(rb - s.error) <= tol


def test_characteristic_points_ordered(builtin_fn):
    for iv in _random_subintervals(builtin_fn, 50, 4):
        s = fit_segment(builtin_fn, iv)
        assert iv.lo < s.d < s.c < iv.hi
        assert s.error > 0


def test_c_and_d_solve_their_equations(builtin_fn):
    f = builtin_fn
    for iv in _random_subintervals(f, 20, 5):
        s = fit_segment(f, iv)
        # abscissa tolerance turned into a residual bound through f''
        bound = 1e-12 * max(f.d2(iv.lo), f.d2(iv.hi), 1.0) * 4
        assert abs(f.d1(s.c) - s.slope) <= bound
        mean = (f.eval(s.c) - f.eval(iv.lo)) / (s.c - iv.lo)
        assert abs(f.d1(s.d) - mean) <= bound + 1e-13


def test_midpoints_for_constant_curvature():
    f = builtin("square")
    rng = np.random.default_rng(6)
    for _ in range(50):
        a, b = sorted(rng.uniform(-1, 1, 2))
        s = fit_segment(f, Interval(a, b))
        assert s.c == pytest.approx(0.5 * (a + b), abs=1e-12)
        assert s.d == pytest.approx(0.5 * (a + s.c), abs=1e-12)


def test_monotone_in_right_endpoint(builtin_fn):
    f = builtin_fn
    rng = np.random.default_rng(7)
    lo_d, hi_d = f.domain.lo, f.domain.hi
    for _ in range(50):
        a, b1, b2 = sorted(rng.uniform(lo_d, hi_d, 3))
        if b1 - a < 1e-6 or b2 - b1 < 1e-9:
            continue
        assert error_of_interval(f, Interval(a, b1)) < error_of_interval(f, Interval(a, b2))


def test_monotone_in_left_endpoint(builtin_fn):
    f = builtin_fn
    rng = np.random.default_rng(8)
    lo_d, hi_d = f.domain.lo, f.domain.hi
    for _ in range(50):
        a1, a2, b = sorted(rng.uniform(lo_d, hi_d, 3))
        if b - a2 < 1e-6 or a2 - a1 < 1e-9:
            continue
        assert error_of_interval(f, Interval(a2, b)) < error_of_interval(f, Interval(a1, b))


def test_single_sign_change_of_slope_residual(builtin_fn):
    for iv in _random_subintervals(builtin_fn, 20, 9):
        s = fit_segment(builtin_fn, iv)
        xs = iv.grid(2001)
        g = np.array([builtin_fn.d1(float(x)) - s.slope for x in xs])
        signs = np.sign(g[g != 0])
        assert np.count_nonzero(np.diff(signs) != 0) == 1


def test_cube_from_zero():
    f = builtin("cube")
    s = fit_segment(f, Interval(0, 0.5))
    assert s.c == pytest.approx(0.5 / math.sqrt(3), abs=1e-12)
    assert segment_error_oracle(f, s, 100_000) == pytest.approx(s.error, abs=1e-9)


def test_degenerate_interval():
    f = builtin("exp")
    s = fit_segment(f, Interval(0.5, 0.5 + 1e-16))
    assert s.error == 0.0
    assert s.slope == pytest.approx(math.exp(0.5))


def test_outside_domain():
    with pytest.raises(DomainError):
        fit_segment(builtin("exp"), Interval(-0.5, 0.5))


def test_nonconvex_interval_fails_bracketing():
    f = from_expression("-x^2", Interval(0, 1))
    with pytest.raises(ConvexityViolation):
        fit_segment(f, Interval(0, 1))


def test_tolerance_must_be_positive():
    with pytest.raises(ValueError):
        fit_segment(builtin("exp"), Interval(0, 1), tol=0)


def test_expression_function_fit():
    f = from_expression("exp(x)", Interval(0, 1))
    assert fit_segment(f, Interval(0, 1)).error == pytest.approx(
        fit_segment(builtin("exp"), Interval(0, 1)).error, rel=1e-14)
