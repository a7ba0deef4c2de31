import math

import pytest

from minimax_relu.bounds import error_bounds, rate_check, second_derivative_extrema, size_bounds
from minimax_relu.functions import Interval, builtin, from_expression
from minimax_relu.reference import BOUND_TOLERANCE, REFERENCE


@pytest.mark.parametrize("name, expected", [("exp", (1.0, math.e)), ("square", (2.0, 2.0)),
                                            ("cube", (0.0, 6.0))])
def test_builtin_extrema(name, expected):
    assert second_derivative_extrema(builtin(name)) == pytest.approx(expected, rel=1e-15)


def test_grid_extrema_for_expression():
    # f'' = 12 x^2 + 2 has its minimum in the interior, at 0
    f = from_expression("x^4 + x^2", Interval(-1, 1))
    lo, hi = second_derivative_extrema(f, 4097)
    assert lo == pytest.approx(2.0, abs=1e-12)
    assert hi == pytest.approx(14.0, abs=1e-12)


def test_extrema_grid_minimum():
    with pytest.raises(ValueError):
        second_derivative_extrema(builtin("exp"), 1023)


@pytest.mark.parametrize("name, n, lower, upper", [
    ("exp", 2, 0.015625, 0.042473),
    ("square", 5, 0.02, 0.02),
    ("cube", 2, 0.0, 0.09375),
])
def test_error_bound_examples(name, n, lower, upper):
    b = error_bounds(builtin(name), n)
    assert b.lower == pytest.approx(lower, abs=1e-6)
    assert b.upper == pytest.approx(upper, abs=1e-6)
    assert b.n == n


@pytest.mark.parametrize("cell", sorted(REFERENCE))
def test_reference_bound_columns(cell):
    name, n = cell
    ref = REFERENCE[cell]
    b = error_bounds(builtin(name), n)
    assert abs(b.upper - ref.upper) <= BOUND_TOLERANCE
    assert abs(b.lower - ref.lower) <= BOUND_TOLERANCE
    assert b.lower <= b.upper


def test_bounds_equal_for_constant_curvature():
    b = error_bounds(builtin("square"), 3)
    assert b.lower == b.upper == pytest.approx(4 * 2 / (16 * 9), rel=1e-15)


@pytest.mark.parametrize("name", ["exp", "square", "cube"])
@pytest.mark.parametrize("n", [1, 2, 3, 7])
def test_quadratic_scaling(name, n):
    f = builtin(name)
    assert error_bounds(f, 2 * n).upper == error_bounds(f, n).upper / 4


@pytest.mark.parametrize("name", ["exp", "square", "cube"])
@pytest.mark.parametrize("n", [1, 2, 5, 10])
def test_size_bound_matches_piece_bound(name, n):
    f = builtin(name)
    _, upper = size_bounds(f, 3 * n, 3)
    assert upper == pytest.approx(error_bounds(f, n).upper, rel=1e-15)


def test_size_bound_examples():
    assert size_bounds(builtin("square"), 6, 5)[1] == pytest.approx(0.125, rel=1e-15)
    upper = size_bounds(builtin("exp"), 30, 3)[1]
    assert upper == pytest.approx(math.e / 1600, rel=1e-15)
    # the table prints 0.00171 for 0.0016989
    assert abs(upper - REFERENCE[("exp", 10)].upper) <= BOUND_TOLERANCE
    assert size_bounds(builtin("square"), 3, 3)[0] == pytest.approx(1 / 72, rel=1e-15)


def test_size_lower_bound_is_finite_for_deep_nets():
    lower, upper = size_bounds(builtin("exp"), 1000, 400)
    assert lower == 0.0 or (0 < lower < upper)
    assert lower >= 0.0


def test_size_lower_bound_zero_when_curvature_vanishes():
    assert size_bounds(builtin("cube"), 9, 4)[0] == 0.0


@pytest.mark.parametrize("neurons, layers", [(2, 3), (3, 2)])
def test_size_bounds_minimums(neurons, layers):
    with pytest.raises(ValueError):
        size_bounds(builtin("exp"), neurons, layers)


def test_error_bounds_need_a_piece():
    with pytest.raises(ValueError):
        error_bounds(builtin("exp"), 0)


def test_rate_check_on_square_reference():
    ratio = rate_check([(2, 0.125), (3, 0.05556), (5, 0.02), (10, 0.005)])
    assert ratio == pytest.approx(1.0, abs=1e-3)


def test_rate_check_on_exp_reference():
    # 0.02635 * 4 = 0.1054 against 0.00105 * 100 = 0.105
    assert rate_check([(2, 0.02635), (10, 0.00105)]) == pytest.approx(0.1054 / 0.105, rel=1e-12)


def test_rate_check_exact_scaling():
    assert rate_check([(k, 3.0 / k ** 2) for k in (1, 2, 4, 8)]) == pytest.approx(1.0, abs=1e-15)


@pytest.mark.parametrize("entries", [[], [(2, 0.1)], [(2, 0.1), (2, 0.2)], [(2, 0.1), (3, 0.0)]])
def test_rate_check_rejects_bad_input(entries):
    with pytest.raises(ValueError):
        rate_check(entries)
