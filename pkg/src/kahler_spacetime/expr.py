"""Scalar expressions over the four chart coordinates x0..x3.

Expressions are small immutable trees.  They are usually produced by
:func:`parse_expr` from the metric-file grammar::

    expr  := term (("+" | "-") term)*
    term  := unary (("*" | "/") unary)*
    unary := ("-" | "+") unary | power
    power := atom ("^" unary)?
    atom  := number | "x0".."x3" | func "(" expr ")" | "(" expr ")"
    func  := exp | ln | sin | cos | sinh | cosh | sqrt

``^`` binds tighter than a leading minus (``-x0^2`` is ``-(x0^2)``) and is
right associative.  Exponents must be constant; ``f^g`` with a
coordinate-dependent ``g`` is rewritten to ``exp(g*ln(f))``.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass

from .errors import DomainError, ParseError

UNARY_OPS = ("neg", "exp", "ln", "sin", "cos", "sinh", "cosh", "sqrt")
BINARY_OPS = ("add", "sub", "mul", "div")
FUNCTIONS = ("exp", "ln", "sin", "cos", "sinh", "cosh", "sqrt")


class Expr:
    """Base class of expression nodes; supports building trees with Python operators."""

    __slots__ = ()

    def __add__(self, other):
        return Binary("add", self, as_expr(other))

    def __radd__(self, other):
        return Binary("add", as_expr(other), self)

    def __sub__(self, other):
        return Binary("sub", self, as_expr(other))

    def __rsub__(self, other):
        return Binary("sub", as_expr(other), self)

    def __mul__(self, other):
        return Binary("mul", self, as_expr(other))

    def __rmul__(self, other):
        return Binary("mul", as_expr(other), self)

    def __truediv__(self, other):
        return Binary("div", self, as_expr(other))

    def __rtruediv__(self, other):
        return Binary("div", as_expr(other), self)

    def __neg__(self):
        return Unary("neg", self)

    def __pow__(self, exponent):
        if isinstance(exponent, Expr):
            if not exponent.is_constant():
                return Unary("exp", Binary("mul", exponent, Unary("ln", self)))
            exponent = exponent.evaluate((0.0, 0.0, 0.0, 0.0))
        return Pow(self, float(exponent))

    def is_constant(self) -> bool:
        return not any(isinstance(n, Coord) for n in self.walk())

    def walk(self):
        yield self

    def evaluate(self, point) -> float:
        """Plain floating-point value at ``point`` (no derivatives)."""
        raise NotImplementedError

    def to_text(self) -> str:
        return _format(self, 0)

    def __str__(self):
        return self.to_text()


@dataclass(frozen=True, eq=True, repr=True)
class Const(Expr):
    value: float

    def evaluate(self, point):
        return self.value


@dataclass(frozen=True, eq=True, repr=True)
class Coord(Expr):
    index: int

    def __post_init__(self):
        if self.index not in (0, 1, 2, 3):
            raise ValueError(f"coordinate index must be 0..3, got {self.index}")

    def evaluate(self, point):
        return float(point[self.index])


@dataclass(frozen=True, eq=True, repr=True)
class Unary(Expr):
    op: str
    arg: Expr

    def __post_init__(self):
        if self.op not in UNARY_OPS:
            raise ValueError(f"unknown unary op {self.op!r}")

    def walk(self):
        yield self
        yield from self.arg.walk()

    def evaluate(self, point):
        x = self.arg.evaluate(point)
        return _apply_unary(self.op, x)


@dataclass(frozen=True, eq=True, repr=True)
class Binary(Expr):
    op: str
    left: Expr
    right: Expr

    def __post_init__(self):
        if self.op not in BINARY_OPS:
            raise ValueError(f"unknown binary op {self.op!r}")

    def walk(self):
        yield self
        yield from self.left.walk()
        yield from self.right.walk()

    def evaluate(self, point):
        a = self.left.evaluate(point)
        b = self.right.evaluate(point)
        if self.op == "add":
            return a + b
        if self.op == "sub":
            return a - b
        if self.op == "mul":
            return a * b
        if b == 0.0:
            raise DomainError("division by zero")
        return a / b


@dataclass(frozen=True, eq=True, repr=True)
class Pow(Expr):
    base: Expr
    exponent: float

    def walk(self):
        yield self
        yield from self.base.walk()

    def evaluate(self, point):
        x = self.base.evaluate(point)
        return power(x, self.exponent)


def as_expr(value) -> Expr:
    if isinstance(value, Expr):
        return value
    return Const(float(value))


def x(index: int) -> Coord:
    return Coord(index)


def _apply_unary(op, x):
    if op == "neg":
        return -x
    if op == "exp":
        return math.exp(x)
    if op == "sin":
        return math.sin(x)
    if op == "cos":
        return math.cos(x)
    if op == "sinh":
        return math.sinh(x)
    if op == "cosh":
        return math.cosh(x)
    if op == "sqrt":
        if x < 0.0:
            raise DomainError(f"sqrt of negative argument {x!r}")
        return math.sqrt(x)
    if x <= 0.0:
        raise DomainError(f"ln of non-positive argument {x!r}")
    return math.log(x)


def power(x: float, c: float) -> float:
    if c == int(c):
        if x == 0.0 and c < 0:
            raise DomainError("zero raised to a negative power")
        return x ** int(c)
    if x < 0.0 or (x == 0.0 and c < 0):
        raise DomainError(f"{x!r} raised to non-integer power {c!r}")
    return x**c


# -- formatting ------------------------------------------------------------

_PREC = {"add": 1, "sub": 1, "mul": 2, "div": 2}


def _format_number(v: float) -> str:
    if v < 0 or math.copysign(1.0, v) < 0:
        return "(" + repr(v) + ")"
    text = repr(float(v))
    if text in ("inf", "nan"):
        raise ValueError(f"cannot format non-finite constant {v!r}")
    return text


def _format(node: Expr, parent_prec: int) -> str:
    if isinstance(node, Const):
        return _format_number(node.value)
    if isinstance(node, Coord):
        return f"x{node.index}"
    if isinstance(node, Unary):
        if node.op == "neg":
            text = "-" + _format(node.arg, 3)
            return f"({text})" if parent_prec > 0 else text
        return f"{node.op}({_format(node.arg, 0)})"
    if isinstance(node, Pow):
        text = f"{_format(node.base, 4)}^{_format_number(node.exponent)}"
        return f"({text})" if parent_prec >= 4 else text
    prec = _PREC[node.op]
    symbol = {"add": "+", "sub": "-", "mul": "*", "div": "/"}[node.op]
    # left-associative: the right operand needs parentheses at equal precedence
    text = f"{_format(node.left, prec)} {symbol} {_format(node.right, prec + 1)}"
    return f"({text})" if prec < parent_prec else text


# -- parsing ---------------------------------------------------------------

_TOKEN = re.compile(
    r"""
    (?P<ws>\s+)
  | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
  | (?P<name>[A-Za-z_][A-Za-z_0-9]*)
  | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)


def _tokenize(text):
    tokens = []
    pos = 0
    while pos < len(text):
        m = _TOKEN.match(text, pos)
        if m is None:
            raise ParseError(f"unexpected character {text[pos]!r}", pos)
        kind = m.lastgroup
        if kind != "ws":
            tokens.append((kind, m.group(), pos))
        pos = m.end()
    tokens.append(("end", "", len(text)))
    return tokens


class _Parser:
    def __init__(self, text):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, value):
        kind, text, pos = self.take()
        if text != value:
            found = "end of input" if kind == "end" else repr(text)
            raise ParseError(f"expected {value!r}, found {found}", pos)

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[1] in ("+", "-") and self.peek()[0] == "op":
            op = "add" if self.take()[1] == "+" else "sub"
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.peek()[1] in ("*", "/") and self.peek()[0] == "op":
            op = "mul" if self.take()[1] == "*" else "div"
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        kind, text, _ = self.peek()
        if kind == "op" and text == "-":
            self.take()
            return Unary("neg", self.unary())
        if kind == "op" and text == "+":
            self.take()
            return self.unary()
        return self.power()

    def power(self):
        base = self.atom()
        if self.peek()[1] == "^" and self.peek()[0] == "op":
            _, _, pos = self.take()
            exponent = self.unary()
            if exponent.is_constant():
                try:
                    value = exponent.evaluate((0.0, 0.0, 0.0, 0.0))
                except DomainError as exc:
                    raise ParseError(f"invalid constant exponent: {exc}", pos) from None
                return Pow(base, value)
            return Unary("exp", Binary("mul", exponent, Unary("ln", base)))
        return base

    def atom(self):
        kind, text, pos = self.take()
        if kind == "number":
            return Const(float(text))
        if kind == "name":
            m = re.fullmatch(r"x([0-3])", text)
            if m:
                return Coord(int(m.group(1)))
            if text in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Unary(text, arg)
            raise ParseError(f"unknown identifier {text!r}", pos)
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", pos)
        raise ParseError(f"unexpected {text!r}", pos)


def parse_expr(text: str) -> Expr:
    """Parse ``text`` into an expression tree.

    >>> parse_expr("x0^2 + 3*x1")
    Binary(op='add', left=Pow(base=Coord(index=0), exponent=2.0), right=Binary(op='mul', left=Const(value=3.0), right=Coord(index=1)))
    """
    if not isinstance(text, str):
        raise ParseError(f"expression must be a string, got {type(text).__name__}")
    return _Parser(text).parse()
