"""A small expression language over one variable ``x``.

Grammar, loosest binding first::

    expr   := term   (('+' | '-') term)*
    term   := unary  (('*' | '/') unary)*
    unary  := '-' unary | power
    power  := atom ('^' unary)?          # right-associative
    atom   := NUMBER | 'x' | FUNC '(' expr ')' | '(' expr ')'
    FUNC   := 'exp' | 'ln' | 'sqrt'

so ``^`` binds tighter than unary minus (``-x^2`` is ``-(x^2)``), which binds
tighter than ``*`` and ``/``, which bind tighter than ``+`` and ``-``.

Trees are immutable dataclasses. :func:`differentiate` works symbolically and
:func:`compile_expression` turns a tree into a plain Python callable (scalar or
numpy) for fast repeated evaluation.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass
from typing import Callable, Union

import numpy as np

from .errors import EvaluationError, ExpressionSyntaxError, UnknownIdentifier

__all__ = [
    "Expression", "Lit", "Var", "Neg", "Add", "Sub", "Mul", "Div", "Pow",
    "Exp", "Ln", "Sqrt", "parse_expression", "to_text", "differentiate",
    "evaluate", "compile_expression",
]


@dataclass(frozen=True)
class Lit:
    value: float


@dataclass(frozen=True)
class Var:
    pass


@dataclass(frozen=True)
class Neg:
    arg: "Expression"


@dataclass(frozen=True)
class Add:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Sub:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Mul:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Div:
    left: "Expression"
    right: "Expression"


@dataclass(frozen=True)
class Pow:
    base: "Expression"
    exponent: "Expression"


@dataclass(frozen=True)
class Exp:
    arg: "Expression"


@dataclass(frozen=True)
class Ln:
    arg: "Expression"


@dataclass(frozen=True)
class Sqrt:
    arg: "Expression"


Expression = Union[Lit, Var, Neg, Add, Sub, Mul, Div, Pow, Exp, Ln, Sqrt]

_FUNCS = {"exp": Exp, "ln": Ln, "sqrt": Sqrt}
_BINOPS = {"+": Add, "-": Sub, "*": Mul, "/": Div}
_SYMBOL = {Add: "+", Sub: "-", Mul: "*", Div: "/"}


# -- parsing -----------------------------------------------------------------

_TOKEN = re.compile(
    r"\s*(?:(?P<num>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()]))"
)


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = []  # (kind, text, char_index)
        pos = 0
        while pos < len(src):
            if src[pos:].strip() == "":
                break
            m = _TOKEN.match(src, pos)
            if m is None or m.end() == pos:
                start = pos + len(src[pos:]) - len(src[pos:].lstrip())
                self.fail(f"unexpected character {src[start]!r}", start)
            kind = m.lastgroup
            self.tokens.append((kind, m.group(kind), m.start(kind)))
            pos = m.end()
        self.i = 0

    def fail(self, message, char_index, cls=ExpressionSyntaxError):
        offset = len(self.src[:char_index].encode("utf-8"))
        raise cls(message, self.src, offset)

    def peek(self):
        if self.i < len(self.tokens):
            return self.tokens[self.i]
        return ("end", "", len(self.src))

    def take(self):
        tok = self.peek()
        self.i += 1
        return tok

    def expect(self, text):
        kind, tok, at = self.take()
        if tok != text or kind == "end":
            self.fail(f"expected {text!r}", at)

    def parse(self) -> Expression:
        if not self.tokens:
            self.fail("empty expression", 0)
        node = self.expr()
        kind, tok, at = self.peek()
        if kind != "end":
            self.fail(f"unexpected token {tok!r}", at)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = self.take()[1]
            node = _BINOPS[op](node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = self.take()[1]
            node = _BINOPS[op](node, self.unary())
        return node

    def unary(self):
        if self.peek()[:2] == ("op", "-"):
            self.take()
            return Neg(self.unary())
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            return Pow(base, self.unary())
        return base

    def atom(self):
        kind, tok, at = self.take()
        if kind == "num":
            value = float(tok)
            if not math.isfinite(value):
                self.fail(f"literal {tok!r} is not finite", at)
            return Lit(value)
        if kind == "name":
            if tok == "x":
                return Var()
            if tok in _FUNCS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return _FUNCS[tok](arg)
            self.fail(f"unknown identifier {tok!r}", at, UnknownIdentifier)
        if tok == "(" and kind == "op":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            self.fail("unexpected end of input", at)
        self.fail(f"unexpected token {tok!r}", at)


def parse_expression(src: str) -> Expression:
    """Parse ``src`` into an expression tree.

    Raises :class:`ExpressionSyntaxError` (with a byte ``offset``) on malformed
    input and :class:`UnknownIdentifier` for names other than ``x`` and the
    supported functions.
    """
    return _Parser(src).parse()


# -- printing ----------------------------------------------------------------

def _prec(e: Expression) -> int:
    if isinstance(e, (Add, Sub)):
        return 1
    if isinstance(e, (Mul, Div)):
        return 2
    if isinstance(e, Neg):
        return 3
    if isinstance(e, Pow):
        return 4
    if isinstance(e, Lit) and e.value < 0:
        return 3
    return 5


def _fmt_number(v: float) -> str:
    if v.is_integer() and abs(v) < 1e15:
        return str(int(v))
    return repr(v)


def to_text(e: Expression) -> str:
    """Render ``e`` with the minimal parentheses needed to parse back to ``e``."""
    def wrap(child, need):
        s = to_text(child)
        return f"({s})" if need else s

    if isinstance(e, Lit):
        s = _fmt_number(abs(e.value))
        return f"(-{s})" if e.value < 0 else s
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return "-" + wrap(e.arg, _prec(e.arg) < 3)
    if isinstance(e, Pow):
        return wrap(e.base, _prec(e.base) <= 4) + "^" + wrap(e.exponent, _prec(e.exponent) < 3)
    if isinstance(e, (Exp, Ln, Sqrt)):
        return f"{type(e).__name__.lower()}({to_text(e.arg)})"
    p = _prec(e)
    left = wrap(e.left, _prec(e.left) < p)
    right = wrap(e.right, _prec(e.right) <= p)
    return f"{left} {_SYMBOL[type(e)]} {right}"


# -- simplifying constructors ---------------------------------------------------

def _is(e, v):
    return isinstance(e, Lit) and e.value == v


def _neg(a):
    if isinstance(a, Lit):
        return Lit(-a.value)
    if isinstance(a, Neg):
        return a.arg
    return Neg(a)


def _add(a, b):
    if _is(a, 0):
        return b
    if _is(b, 0):
        return a
    if isinstance(a, Lit) and isinstance(b, Lit):
        return Lit(a.value + b.value)
    return Add(a, b)


def _sub(a, b):
    if _is(b, 0):
        return a
    if _is(a, 0):
        return _neg(b)
    if isinstance(a, Lit) and isinstance(b, Lit):
        return Lit(a.value - b.value)
    return Sub(a, b)


def _mul(a, b):
    if _is(a, 0) or _is(b, 0):
        return Lit(0.0)
    if _is(a, 1):
        return b
    if _is(b, 1):
        return a
    if isinstance(a, Lit) and isinstance(b, Lit):
        return Lit(a.value * b.value)
    return Mul(a, b)


def _div(a, b):
    if _is(a, 0):
        return Lit(0.0)
    if _is(b, 1):
        return a
    if isinstance(a, Lit) and isinstance(b, Lit) and b.value != 0:
        return Lit(a.value / b.value)
    return Div(a, b)


def _pow(a, b):
    if _is(b, 0):
        return Lit(1.0)
    if _is(b, 1):
        return a
    return Pow(a, b)


# -- differentiation ------------------------------------------------------------

def _d(e: Expression) -> Expression:
    if isinstance(e, Lit):
        return Lit(0.0)
    if isinstance(e, Var):
        return Lit(1.0)
    if isinstance(e, Neg):
        return _neg(_d(e.arg))
    if isinstance(e, Add):
        return _add(_d(e.left), _d(e.right))
    if isinstance(e, Sub):
        return _sub(_d(e.left), _d(e.right))
    if isinstance(e, Mul):
        u, v = e.left, e.right
        return _add(_mul(_d(u), v), _mul(u, _d(v)))
    if isinstance(e, Div):
        u, v = e.left, e.right
        return _div(_sub(_mul(_d(u), v), _mul(u, _d(v))), _pow(v, Lit(2.0)))
    if isinstance(e, Pow):
        u, v = e.base, e.exponent
        if isinstance(v, Lit):
            return _mul(_mul(v, _pow(u, Lit(v.value - 1.0))), _d(u))
        if isinstance(u, Lit):
            return _mul(_mul(e, Ln(u)), _d(v))
        # u^v * (v' ln u + v u' / u)
        return _mul(e, _add(_mul(_d(v), Ln(u)), _div(_mul(v, _d(u)), u)))
    if isinstance(e, Exp):
        return _mul(e, _d(e.arg))
    if isinstance(e, Ln):
        return _div(_d(e.arg), e.arg)
    if isinstance(e, Sqrt):
        return _div(_d(e.arg), _mul(Lit(2.0), e))
    raise TypeError(f"not an expression: {e!r}")


def differentiate(e: Expression, order: int = 1) -> Expression:
    """Symbolic derivative of ``e`` with respect to ``x``; ``order`` is 1 or 2."""
    if order not in (1, 2):
        raise ValueError(f"order must be 1 or 2, got {order}")
    for _ in range(order):
        e = _d(e)
    return e


# -- evaluation -----------------------------------------------------------------

def _checked(v: float) -> float:
    if not math.isfinite(v):
        raise EvaluationError(f"non-finite value {v!r}")
    return v


def evaluate(e: Expression, x: float) -> float:
    """Tree-walking evaluation; slow but obviously correct."""
    try:
        return _checked(_eval(e, float(x)))
    except (ValueError, OverflowError, ZeroDivisionError) as exc:
        raise EvaluationError(f"cannot evaluate {to_text(e)} at x={x!r}: {exc}") from exc


def _eval(e, x):
    if isinstance(e, Lit):
        return e.value
    if isinstance(e, Var):
        return x
    if isinstance(e, Neg):
        return -_eval(e.arg, x)
    if isinstance(e, Add):
        return _eval(e.left, x) + _eval(e.right, x)
    if isinstance(e, Sub):
        return _eval(e.left, x) - _eval(e.right, x)
    if isinstance(e, Mul):
        return _eval(e.left, x) * _eval(e.right, x)
    if isinstance(e, Div):
        return _eval(e.left, x) / _eval(e.right, x)
    if isinstance(e, Pow):
        return math.pow(_eval(e.base, x), _eval(e.exponent, x))
    if isinstance(e, Exp):
        return math.exp(_eval(e.arg, x))
    if isinstance(e, Ln):
        return math.log(_eval(e.arg, x))
    if isinstance(e, Sqrt):
        return math.sqrt(_eval(e.arg, x))
    raise TypeError(f"not an expression: {e!r}")


def _codegen(e, lib) -> str:
    if isinstance(e, Lit):
        return repr(e.value)
    if isinstance(e, Var):
        return "x"
    if isinstance(e, Neg):
        return f"(-{_codegen(e.arg, lib)})"
    if isinstance(e, Pow):
        return f"{lib}.pow({_codegen(e.base, lib)}, {_codegen(e.exponent, lib)})"
    if isinstance(e, (Exp, Ln, Sqrt)):
        fn = {Exp: "exp", Ln: "log", Sqrt: "sqrt"}[type(e)]
        return f"{lib}.{fn}({_codegen(e.arg, lib)})"
    return f"({_codegen(e.left, lib)} {_SYMBOL[type(e)]} {_codegen(e.right, lib)})"


class _NumpyLib:
    exp = staticmethod(np.exp)
    log = staticmethod(np.log)
    sqrt = staticmethod(np.sqrt)
    pow = staticmethod(np.power)


def compile_expression(e: Expression, vectorized: bool = False) -> Callable:
    """Compile ``e`` into ``x -> value``.

    The scalar form raises :class:`EvaluationError` on undefined or non-finite
    results. The vectorized form maps a float array to a float array and
    propagates nan/inf instead of raising.
    """
    if vectorized:
        code = _codegen(e, "lib")
        raw = eval(f"lambda x: {code}", {"lib": _NumpyLib})  # noqa: S307 - generated from a closed grammar

        def vec(xs):
            xs = np.asarray(xs, dtype=float)
            with np.errstate(all="ignore"):
                return np.broadcast_to(raw(xs), xs.shape).astype(float)
        return vec

    text = to_text(e)
    raw = eval(f"lambda x: {_codegen(e, 'lib')}", {"lib": math})  # noqa: S307

    def scalar(x):
        try:
            v = raw(x)
        except (ValueError, OverflowError, ZeroDivisionError) as exc:
            raise EvaluationError(f"cannot evaluate {text} at x={x!r}: {exc}") from exc
        if not math.isfinite(v):
            raise EvaluationError(f"{text} is non-finite at x={x!r}")
        return v
    return scalar
