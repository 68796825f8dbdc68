# Copyright 2024 The fracpg authors
#
# Licensed under the Apache License, Version 2.0 (the "License");
# you may not use this file except in compliance with the License.
# You may obtain a copy of the License at
#
#     http://www.apache.org/licenses/LICENSE-2.0
#
# Unless required by applicable law or agreed to in writing, software
# distributed under the License is distributed on an "AS IS" BASIS,
# WITHOUT WARRANTIES OR CONDITIONS OF ANY KIND, either express or implied.
# See the License for the specific language governing permissions and
# limitations under the License.

"""
Coefficient expressions in the variable ``x``.

Grammar::

    expr     := term (('+' | '-') term)*
    term     := factor (('*' | '/') factor)*
    factor   := '-' factor | power
    power    := atom ('^' exponent)?
    exponent := signed-number | '(' signed-number ')'
    atom     := number | 'x' | '(' expr ')' | ident '(' expr ')'

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.
"""
from dataclasses import dataclass
import re
import typing as t

import numpy as np

from fracpg.exceptions import DomainError
from fracpg.exceptions import ExpressionSyntaxError
from fracpg.exceptions import UnknownIdentifier
from fracpg.fraccalc import PowerSum

FUNCTIONS: t.Dict[str, t.Callable[[np.ndarray], np.ndarray]] = {
    "exp": np.exp,
    "sin": np.sin,
    "cos": np.cos,
    "log": np.log,
    "sqrt": np.sqrt,
}

#: Largest integer power expanded when classifying a power of a sum
MAX_EXPANDED_POWER = 16

_token_pattern = re.compile(
    r"""
    (?P<ws>\s+)
    | (?P<number>(?:\d+\.?\d*|\.\d+)(?:[eE][+-]?\d+)?)
    | (?P<ident>[A-Za-z_][A-Za-z0-9_]*)
    | (?P<op>[-+*/^()])
    """,
    re.VERBOSE,
)

ATOM_START = frozenset(["number", "x", "(", "function", "-"])


class Node:
    """
    Base class for expression tree nodes
    """


@dataclass(frozen=True)
class Num(Node):
    value: float


@dataclass(frozen=True)
class Var(Node):
    pass


@dataclass(frozen=True)
class Neg(Node):
    operand: Node


@dataclass(frozen=True)
class BinOp(Node):
    op: str
    left: Node
    right: Node


@dataclass(frozen=True)
class Pow(Node):
    base: Node
    exponent: float


@dataclass(frozen=True)
class Call(Node):
    name: str
    arg: Node


@dataclass(frozen=True)
class Token:
    kind: str
    text: str
    offset: int


def tokenize(src: str) -> t.List[Token]:
    tokens = []
    pos = 0
    while pos < len(src):
        match = _token_pattern.match(src, pos)
        if match is None:
            raise ExpressionSyntaxError(
                "Unexpected character {!r}".format(src[pos]), src, pos
            )
        kind = match.lastgroup
        assert kind is not None
        if kind != "ws":
            tokens.append(Token(kind, match.group(), pos))
        pos = match.end()
    tokens.append(Token("end", "", len(src)))
    return tokens


class _Parser:
    def __init__(self, src: str):
        self.src = src
        self.tokens = tokenize(src)
        self.pos = 0

    @property
    def current(self) -> Token:
        return self.tokens[self.pos]

    def advance(self) -> Token:
        tok = self.tokens[self.pos]
        self.pos += 1
        return tok

    def at_op(self, *ops: str) -> bool:
        return self.current.kind == "op" and self.current.text in ops

    def fail(self, expected: t.Iterable[str]) -> t.NoReturn:
        tok = self.current
        what = "end of input" if tok.kind == "end" else repr(tok.text)
        raise ExpressionSyntaxError(
            "Unexpected {}".format(what), self.src, tok.offset, expected
        )

    def expect_op(self, op: str) -> Token:
        if not self.at_op(op):
            self.fail([op])
        return self.advance()

    def parse(self) -> Node:
        node = self.expr()
        if self.current.kind != "end":
            self.fail(["+", "-", "*", "/", "^", "end of input"])
        return node

    def expr(self) -> Node:
        node = self.term()
        while self.at_op("+", "-"):
            op = self.advance().text
            node = BinOp(op, node, self.term())
        return node

    def term(self) -> Node:
        node = self.factor()
        while self.at_op("*", "/"):
            op = self.advance().text
            node = BinOp(op, node, self.factor())
        return node

    def factor(self) -> Node:
        if self.at_op("-"):
            self.advance()
            return Neg(self.factor())
        return self.power()

    def power(self) -> Node:
        base = self.atom()
        if self.at_op("^"):
            self.advance()
            return Pow(base, self.exponent())
        return base

    def exponent(self) -> float:
        if self.at_op("("):
            self.advance()
            value = self.signed_number()
            self.expect_op(")")
            return value
        return self.signed_number()

    def signed_number(self) -> float:
        sign = 1.0
        if self.at_op("-", "+"):
            sign = -1.0 if self.advance().text == "-" else 1.0
        if self.current.kind != "number":
            self.fail(["number"])
        return sign * float(self.advance().text)

    def atom(self) -> Node:
        tok = self.current
        if tok.kind == "number":
            self.advance()
            return Num(float(tok.text))
        if tok.kind == "ident":
            if tok.text == "x":
                self.advance()
                return Var()
            if tok.text not in FUNCTIONS:
                raise UnknownIdentifier(tok.text, self.src, tok.offset)
            self.advance()
            self.expect_op("(")
            arg = self.expr()
            self.expect_op(")")
            return Call(tok.text, arg)
        if self.at_op("("):
            self.advance()
            node = self.expr()
            self.expect_op(")")
            return node
        self.fail(ATOM_START)


@dataclass(frozen=True)
class CoefficientExpr:
    """
    A parsed expression for a coefficient or source term
    """

    ast: Node
    source_text: str

    def __call__(self, x):
        return evaluate(self, x)

    def __str__(self):
        return to_source(self.ast)

    def classify(self) -> t.Optional[PowerSum]:
        return classify(self)

    def is_zero(self) -> bool:
        ps = classify(self)
        return ps is not None and not ps


def parse(src: str) -> CoefficientExpr:
    """
    Parse ``src`` into a :class:`CoefficientExpr`.

    Raises :class:`ExpressionSyntaxError` (with offset and expected tokens)
    or :class:`UnknownIdentifier`.
    """
    return CoefficientExpr(_Parser(src).parse(), src)


def constant(value: float) -> CoefficientExpr:
    return parse(repr(float(value)))


def to_source(node: Node) -> str:
    """
    Render ``node`` so that parsing the result yields the same tree
    """
    if isinstance(node, Num):
        return repr(node.value)
    if isinstance(node, Var):
        return "x"
    if isinstance(node, Neg):
        return "-" + to_source(node.operand)
    if isinstance(node, BinOp):
        return "({} {} {})".format(to_source(node.left), node.op, to_source(node.right))
    if isinstance(node, Pow):
        base = to_source(node.base)
        if not isinstance(node.base, (Num, Var, Call)):
            base = "({})".format(base)
        return "{}^({!r})".format(base, node.exponent)
    if isinstance(node, Call):
        return "{}({})".format(node.name, to_source(node.arg))
    raise TypeError(node)


def _eval(node: Node, x: np.ndarray) -> np.ndarray:
    if isinstance(node, Num):
        return np.full_like(x, node.value)
    if isinstance(node, Var):
        return x
    if isinstance(node, Neg):
        return -_eval(node.operand, x)
    if isinstance(node, BinOp):
        left = _eval(node.left, x)
        right = _eval(node.right, x)
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if np.any(right == 0):
            raise DomainError("Division by zero")
        return left / right
    if isinstance(node, Pow):
        base = _eval(node.base, x)
        e = node.exponent
        if float(e).is_integer():
            if e < 0 and np.any(base == 0):
                raise DomainError("0 raised to the negative power {}".format(e))
            return np.power(base, int(e)) if e >= 0 else 1.0 / np.power(base, -int(e))
        if np.any(base < 0) or (e < 0 and np.any(base == 0)):
            raise DomainError("Non-integer power {} of a nonpositive value".format(e))
        return np.power(base, e)
    if isinstance(node, Call):
        arg = _eval(node.arg, x)
        if node.name == "log" and np.any(arg <= 0):
            raise DomainError("log of a nonpositive value")
        if node.name == "sqrt" and np.any(arg < 0):
            raise DomainError("sqrt of a negative value")
        return FUNCTIONS[node.name](arg)
    raise TypeError(node)


def evaluate(e: CoefficientExpr, x):
    """
    Evaluate ``e`` at a point or an array of points.
    """
    xa = np.asarray(x, dtype=float)
    with np.errstate(all="ignore"):
        result = _eval(e.ast, xa)
    result = np.asarray(result, dtype=float)
    if result.shape != xa.shape:
        result = np.broadcast_to(result, xa.shape).copy()
    if result.ndim == 0:
        return float(result)
    return result


def _classify(node: Node) -> t.Optional[PowerSum]:
    if isinstance(node, Num):
        return PowerSum.constant(node.value)
    if isinstance(node, Var):
        return PowerSum.monomial(1.0, 1.0)
    if isinstance(node, Neg):
        inner = _classify(node.operand)
        return None if inner is None else -inner
    if isinstance(node, BinOp):
        left = _classify(node.left)
        right = _classify(node.right)
        if left is None or right is None:
            return None
        if node.op == "+":
            return left + right
        if node.op == "-":
            return left - right
        if node.op == "*":
            return left * right
        if len(right) != 1:
            return None
        ((c, p),) = right.terms
        return left * PowerSum.monomial(1.0 / c, -p)
    if isinstance(node, Pow):
        base = _classify(node.base)
        if base is None:
            return None
        e = node.exponent
        if not base:
            return PowerSum() if e > 0 else None
        if len(base) == 1:
            ((c, p),) = base.terms
            if c < 0 and not float(e).is_integer():
                return None
            return PowerSum.monomial(c**e, p * e)
        if float(e).is_integer() and 0 <= e <= MAX_EXPANDED_POWER:
            result = PowerSum.constant(1.0)
            for _ in range(int(e)):
                result = result * base
            return result
        return None
    if isinstance(node, Call):
        arg = _classify(node.arg)
        if arg is None or any(p != 0 for p in arg.exponents):
            return None
        value = evaluate(CoefficientExpr(node, ""), 0.5)
        return PowerSum.constant(value)
    raise TypeError(node)


def classify(e: CoefficientExpr) -> t.Optional[PowerSum]:
    """
    Return the equivalent :class:`PowerSum` if ``e`` is a linear combination
    of constant powers of x with exponents above -1, else None.
    """
    try:
        return _classify(e.ast)
    except (DomainError, ZeroDivisionError, OverflowError):
        return None
