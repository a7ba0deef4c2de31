"""Optimal minimax piecewise-linear approximation of convex functions and its
exact realization as ReLU networks."""

from .balancer import (BalanceReport, Partition, PwlApproximation, balance, fit_partition,
                       init_partition, optimality_check, random_partition, sew)
from .bounds import BoundsReport, error_bounds, rate_check, second_derivative_extrema, size_bounds
from .errors import (ConvexityViolation, DomainError, EvaluationError, ExpressionSyntaxError,
                     MinimaxReluError, NotStrictlyConvex, SchemaError, UnknownFunction,
                     UnknownIdentifier)
from .expression import differentiate, parse_expression, to_text
from .functions import Interval, TargetFunction, builtin, from_expression, validate_convexity
from .relu import ReluNetwork, build_fixed_depth, build_fixed_width, forward, verify_equivalence
from .segment import SegmentFit, error_of_interval, fit_segment, segment_error_oracle

__version__ = "0.1.0"
