"""Exception types raised across the package."""


class MinimaxReluError(Exception):
    """Base class for all errors raised by this package."""


class UnknownFunction(MinimaxReluError, KeyError):
    """A built-in target function name that does not exist."""

    def __str__(self):
        return Exception.__str__(self)


class DomainError(MinimaxReluError, ValueError):
    """An interval is invalid or lies outside a function's domain."""


class NotStrictlyConvex(MinimaxReluError, ValueError):
    """The second derivative is not positive at some sample point."""

    def __init__(self, x: float, d2: float, name: str = "f"):
        self.x = x
        self.d2 = d2
        super().__init__(f"{name} is not strictly convex: f''({x!r}) = {d2!r}")


class ConvexityViolation(MinimaxReluError, ArithmeticError):
    """Root bracketing failed because f' is not increasing on an interval."""


class ExpressionSyntaxError(MinimaxReluError, SyntaxError):
    """Malformed expression text; ``offset`` is the byte offset of the problem."""

    def __init__(self, message: str, source: str, offset: int):
        self.source = source
        self.pos = offset
        super().__init__(f"{message} at offset {offset}: {source!r}")


class UnknownIdentifier(ExpressionSyntaxError):
    """An identifier in an expression is neither ``x`` nor a known function."""


class EvaluationError(MinimaxReluError, ArithmeticError):
    """Expression evaluation produced a non-finite or undefined value."""


class SchemaError(MinimaxReluError, ValueError):
    """A serialized approximation or network file does not match its schema."""
