"""Coefficient expression language.

Coefficients of A(t), B_k(t) and kernels C(t, theta) are written as small
arithmetic expressions. Grammar, from lowest to highest precedence::

    expr    := term (('+' | '-') term)*
    term    := unary (('*' | '/') unary)*
    unary   := ('-' | '+') unary | power
    power   := primary ('^' unary)?          # right associative
    primary := NUMBER | NAME | NAME '(' expr ')' | '(' expr ')'

Names are the variables ``t`` and ``theta``, the constants ``pi`` and ``e``,
and the functions ``sin cos exp abs sqrt``. Evaluation works on floats and on
numpy arrays alike, so a kernel entry can be sampled at a whole quadrature
rule in one call.
"""

import math
import re
from abc import ABC, abstractmethod
from dataclasses import dataclass
from typing import FrozenSet, Mapping, Tuple, Union

import numpy as np

from common.errors import ExprDomainError, ExprSyntaxError

VARIABLES = ("t", "theta")
CONSTANTS = {"pi": math.pi, "e": math.e}
FUNCTIONS = {
    "sin": np.sin,
    "cos": np.cos,
    "exp": np.exp,
    "abs": np.abs,
    "sqrt": np.sqrt,
}

# binding strength used by the pretty printer
_PREC_ADD = 1
_PREC_MUL = 2
_PREC_UNARY = 3
_PREC_POW = 4
_PREC_ATOM = 5

Number = Union[float, np.ndarray]


def format_number(value: float) -> str:
    """Shortest text that parses back to the same float (integers without a dot)."""
    if float(value).is_integer() and abs(value) < 1e15:
        return str(int(value))
    return repr(float(value))


class CoeffExpr(ABC):
    """Base class of expression tree nodes."""

    precedence = _PREC_ATOM

    @abstractmethod
    def evaluate(self, env: Mapping[str, Number]) -> Number:
        pass

    @abstractmethod
    def variables(self) -> FrozenSet[str]:
        pass

    @abstractmethod
    def pretty(self) -> str:
        pass

    def __str__(self):
        return self.pretty()


@dataclass(frozen=True)
class Num(CoeffExpr):
    value: float

    def evaluate(self, env):
        return self.value

    def variables(self):
        return frozenset()

    def pretty(self):
        text = format_number(self.value)
        return f"({text})" if self.value < 0 else text


@dataclass(frozen=True)
class Const(CoeffExpr):
    name: str

    def evaluate(self, env):
        return CONSTANTS[self.name]

    def variables(self):
        return frozenset()

    def pretty(self):
        return self.name


@dataclass(frozen=True)
class Var(CoeffExpr):
    name: str

    def evaluate(self, env):
        return env[self.name]

    def variables(self):
        return frozenset((self.name,))

    def pretty(self):
        return self.name


@dataclass(frozen=True)
class Unary(CoeffExpr):
    op: str
    operand: CoeffExpr

    precedence = _PREC_UNARY

    def evaluate(self, env):
        value = self.operand.evaluate(env)
        return -value if self.op == "-" else value

    def variables(self):
        return self.operand.variables()

    def pretty(self):
        inner = self.operand.pretty()
        if self.operand.precedence < _PREC_UNARY:
            inner = f"({inner})"
        return f"{self.op}{inner}"


@dataclass(frozen=True)
class Binary(CoeffExpr):
    op: str
    left: CoeffExpr
    right: CoeffExpr

    @property
    def precedence(self):
        if self.op in "+-":
            return _PREC_ADD
        if self.op in "*/":
            return _PREC_MUL
        return _PREC_POW

    def evaluate(self, env):
        left = self.left.evaluate(env)
        right = self.right.evaluate(env)
        if self.op == "+":
            return left + right
        if self.op == "-":
            return left - right
        if self.op == "*":
            return left * right
        if self.op == "/":
            if np.any(np.asarray(right) == 0):
                raise ExprDomainError(f"division by zero in '{self.pretty()}'")
            return left / right
        with np.errstate(invalid="ignore", divide="ignore", over="ignore"):
            result = np.power(np.asarray(left, dtype=float), right)
        if np.any(np.isnan(result)):
            raise ExprDomainError(f"invalid power in '{self.pretty()}'")
        if not np.all(np.isfinite(result)):
            raise ExprDomainError(f"power overflows or divides by zero in '{self.pretty()}'")
        return result if np.ndim(result) else float(result)

    def variables(self):
        return self.left.variables() | self.right.variables()

    def pretty(self):
        prec = self.precedence
        left = self.left.pretty()
        right = self.right.pretty()
        if self.op == "^":
            if self.left.precedence <= _PREC_POW:
                left = f"({left})"
            if self.right.precedence < _PREC_UNARY:
                right = f"({right})"
            return f"{left}^{right}"
        if self.left.precedence < prec:
            left = f"({left})"
        if self.right.precedence <= prec:
            right = f"({right})"
        return f"{left} {self.op} {right}"


@dataclass(frozen=True)
class Call(CoeffExpr):
    func: str
    arg: CoeffExpr

    def evaluate(self, env):
        value = self.arg.evaluate(env)
        if self.func == "sqrt" and np.any(np.asarray(value) < 0):
            raise ExprDomainError(f"sqrt of a negative value in '{self.pretty()}'")
        result = FUNCTIONS[self.func](value)
        return result if np.ndim(result) else float(result)

    def variables(self):
        return self.arg.variables()

    def pretty(self):
        return f"{self.func}({self.arg.pretty()})"


def add(left: CoeffExpr, right: CoeffExpr) -> CoeffExpr:
    """Sum of two expressions, used when merging terms with equal delays."""
    return Binary("+", left, right)


_TOKEN_RE = re.compile(
    r"\s*(?:"
    r"(?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)"
    r"|(?P<name>[A-Za-z_][A-Za-z_0-9]*)"
    r"|(?P<op>[-+*/^()])"
    r")"
)


@dataclass(frozen=True)
class _Token:
    kind: str  # number, name, op, end
    text: str
    offset: int


def _tokenize(src: str) -> Tuple[_Token, ...]:
    tokens = []
    pos = 0
    while True:
        while pos < len(src) and src[pos].isspace():
            pos += 1
        if pos >= len(src):
            tokens.append(_Token("end", "", _byte_offset(src, pos)))
            return tuple(tokens)
        match = _TOKEN_RE.match(src, pos)
        if match is None or match.end() == pos:
            raise ExprSyntaxError(f"unexpected character {src[pos]!r}", _byte_offset(src, pos),
                                  {"number", "name", "operator"})
        kind = match.lastgroup
        tokens.append(_Token(kind, match.group(kind), _byte_offset(src, match.start(kind))))
        pos = match.end()


def _byte_offset(src, index):
    return len(src[:index].encode("utf-8"))


class _Parser:
    """Recursive-descent parser over a token tuple; one instance per parse."""

    def __init__(self, tokens, allowed_vars):
        self.tokens = tokens
        self.pos = 0
        self.allowed_vars = allowed_vars

    @property
    def current(self):
        return self.tokens[self.pos]

    def advance(self):
        token = self.tokens[self.pos]
        self.pos += 1
        return token

    def expect(self, text):
        token = self.current
        if token.text != text or token.kind != "op":
            raise ExprSyntaxError(f"unexpected {self._describe(token)}", token.offset, {text})
        return self.advance()

    def parse(self):
        node = self.expr()
        if self.current.kind != "end":
            raise ExprSyntaxError(f"unexpected {self._describe(self.current)}", self.current.offset,
                                  {"+", "-", "*", "/", "^", "end of input"})
        return node

    def expr(self):
        node = self.term()
        while self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            node = Binary(op, node, self.term())
        return node

    def term(self):
        node = self.unary()
        while self.current.kind == "op" and self.current.text in "*/":
            op = self.advance().text
            node = Binary(op, node, self.unary())
        return node

    def unary(self):
        if self.current.kind == "op" and self.current.text in "+-":
            op = self.advance().text
            return Unary(op, self.unary())
        return self.power()

    def power(self):
        base = self.primary()
        if self.current.kind == "op" and self.current.text == "^":
            self.advance()
            return Binary("^", base, self.unary())
        return base

    def primary(self):
        token = self.current
        if token.kind == "number":
            value = float(token.text)
            if not math.isfinite(value):
                raise ExprSyntaxError(f"number '{token.text}' is out of range", token.offset, {"number"})
            self.advance()
            return Num(value)
        if token.kind == "name":
            self.advance()
            name = token.text
            if name in FUNCTIONS:
                self.expect("(")
                arg = self.expr()
                self.expect(")")
                return Call(name, arg)
            if name in CONSTANTS:
                return Const(name)
            if name in self.allowed_vars:
                return Var(name)
            if name in VARIABLES:
                raise ExprSyntaxError(f"variable '{name}' is not allowed here", token.offset,
                                      set(self.allowed_vars))
            raise ExprSyntaxError(f"unknown identifier '{name}'", token.offset,
                                  set(self.allowed_vars) | set(CONSTANTS) | set(FUNCTIONS))
        if token.kind == "op" and token.text == "(":
            self.advance()
            node = self.expr()
            self.expect(")")
            return node
        raise ExprSyntaxError(f"unexpected {self._describe(token)}", token.offset,
                              {"number", "name", "(", "-"})

    @staticmethod
    def _describe(token):
        return "end of input" if token.kind == "end" else f"'{token.text}'"


def parse_expr(src: str, allowed_vars=VARIABLES) -> CoeffExpr:
    """
    Parse a coefficient expression.

    Parameters:
        src (str): Expression text, e.g. ``"1 + 2*cos(t)"``.
        allowed_vars (Iterable[str]): Variables that may appear; kernels allow
            ``t`` and ``theta``, every other coefficient only ``t``.

    Returns:
        CoeffExpr: The expression tree.

    Raises:
        ExprSyntaxError: On malformed input or an unknown/forbidden identifier,
            with the byte offset and the set of tokens expected there.
    """
    return _Parser(_tokenize(src), tuple(allowed_vars)).parse()


def evaluate(expr: CoeffExpr, t: Number = 0.0, theta: Number = 0.0) -> Number:
    """Evaluate an expression at time t (and offset theta for kernels)."""
    return expr.evaluate({"t": t, "theta": theta})
