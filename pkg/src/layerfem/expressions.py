"""Parse and evaluate scalar coefficient expressions in the single variable x.

Grammar (EBNF):

    expr   := term (('+' | '-') term)*
    term   := factor (('*' | '/') factor)*
    factor := base ('^' factor)?
    base   := NUMBER | 'x' | IDENT '(' expr (',' expr)* ')' | '(' expr ')' | '-' factor

'+', '-', '*', '/' associate left; '^' associates right and binds tighter
than unary minus, so ``-x^2`` means ``-(x^2)`` and ``2^3^2`` means ``2^(3^2)``.
Recognised one-argument functions: exp, sin, cos, log, sqrt.
"""

from __future__ import annotations

import math
import re
from dataclasses import dataclass


class ExpressionError(ValueError):
    """Raised for malformed expression text; carries the offending position."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} (position {position})")
        self.position = position


_FUNCTIONS = {
    "exp": math.exp,
    "sin": math.sin,
    "cos": math.cos,
    "log": math.log,
    "sqrt": math.sqrt,
}

_TOKEN_RE = re.compile(
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<ident>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^(),])"
)


@dataclass(frozen=True)
class Constant:
    value: float

    def evaluate(self, x: float) -> float:
        return self.value


@dataclass(frozen=True)
class Variable:
    def evaluate(self, x: float) -> float:
        return x


@dataclass(frozen=True)
class Negate:
    operand: object

    def evaluate(self, x: float) -> float:
        return -self.operand.evaluate(x)


@dataclass(frozen=True)
class BinaryOp:
    op: str
    left: object
    right: object

    def evaluate(self, x: float) -> float:
        a = self.left.evaluate(x)
        b = self.right.evaluate(x)
        if self.op == "+":
            return a + b
        if self.op == "-":
            return a - b
        if self.op == "*":
            return a * b
        if self.op == "/":
            return a / b
        try:
            return math.pow(a, b)
        except ValueError as exc:
            raise ArithmeticError(f"{a!r} ^ {b!r} is not a real number") from exc


@dataclass(frozen=True)
class FunctionCall:
    name: str
    argument: object

    def evaluate(self, x: float) -> float:
        value = self.argument.evaluate(x)
        try:
            return _FUNCTIONS[self.name](value)
        except ValueError as exc:
            raise ArithmeticError(f"{self.name}({value!r}) is undefined") from exc


def _tokenize(text: str):
    tokens = []
    pos = 0
    n = len(text)
    while pos < n:
        if text[pos].isspace():
            pos += 1
            continue
        match = _TOKEN_RE.match(text, pos)
        if match is None:
            raise ExpressionError(f"unexpected character {text[pos]!r}", pos)
        kind = match.lastgroup
        tokens.append((kind, match.group(), pos))
        pos = match.end()
    tokens.append(("end", "", n))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.tokens = _tokenize(text)
        self.index = 0

    def peek(self):
        return self.tokens[self.index]

    def take(self):
        token = self.tokens[self.index]
        self.index += 1
        return token

    def expect_op(self, symbol: str):
        kind, text, pos = self.peek()
        if kind != "op" or text != symbol:
            raise ExpressionError(f"expected {symbol!r}, found {text or 'end of input'!r}", pos)
        return self.take()

    def parse(self):
        node = self.expr()
        kind, text, pos = self.peek()
        if kind != "end":
            raise ExpressionError(f"unexpected trailing input {text!r}", pos)
        return node

    def expr(self):
        node = self.term()
        while self.peek()[:2] in (("op", "+"), ("op", "-")):
            op = self.take()[1]
            node = BinaryOp(op, node, self.term())
        return node

    def term(self):
        node = self.factor()
        while self.peek()[:2] in (("op", "*"), ("op", "/")):
            op = self.take()[1]
            node = BinaryOp(op, node, self.factor())
        return node

    def factor(self):
        node = self.base()
        if self.peek()[:2] == ("op", "^"):
            self.take()
            node = BinaryOp("^", node, self.factor())
        return node

    def base(self):
        kind, text, pos = self.take()
        if kind == "number":
            return Constant(float(text))
        if kind == "ident":
            if text == "x":
                return Variable()
            if self.peek()[:2] != ("op", "("):
                raise ExpressionError(f"unknown identifier {text!r}", pos)
            if text not in _FUNCTIONS:
                raise ExpressionError(f"unknown function {text!r}", pos)
            self.take()
            args = [self.expr()]
            while self.peek()[:2] == ("op", ","):
                self.take()
                args.append(self.expr())
            self.expect_op(")")
            if len(args) != 1:
                raise ExpressionError(
                    f"function {text!r} takes 1 argument, got {len(args)}", pos
                )
            return FunctionCall(text, args[0])
        if kind == "op" and text == "(":
            node = self.expr()
            self.expect_op(")")
            return node
        if kind == "op" and text == "-":
            return Negate(self.factor())
        raise ExpressionError(f"unexpected {text or 'end of input'!r}", pos)


def parse_coefficient_expression(text: str):
    """Parse expression text into an evaluable tree.

    Raises :class:`ExpressionError` with the offending position for syntax
    errors, unknown identifiers, and wrong argument counts.
    """
    if not isinstance(text, str) or not text.strip():
        raise ExpressionError("empty expression", 0)
    return _Parser(text).parse()


def to_callable(tree):
    """Wrap a parsed tree as a plain ``x -> float`` evaluator."""
    return lambda x: tree.evaluate(float(x))
