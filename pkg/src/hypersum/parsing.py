"""Tokenizer and recursive-descent parser for the ASCII expression language.

One grammar serves terms, polynomials, rational functions and shift
operators; the consumers interpret the resulting tree differently.

    expr    := product (('+' | '-') product)*
    product := unary (('*' | '/') unary | unary)*      # juxtaposition multiplies
    unary   := ('-' | '+') unary | power
    power   := postfix ('^' unary)?
    postfix := atom '!'*
    atom    := INT | NAME | NAME '(' expr (',' expr)* ')' | '(' expr ')'
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Callable, Union

from .algebra import Polynomial, RationalFunction

__all__ = [
    "ParseError",
    "Node",
    "parse_expression",
    "parse_polynomial",
    "parse_rational",
    "parse_assignments",
]


class ParseError(ValueError):
    def __init__(self, message: str, text: str = "", pos: int | None = None):
        self.pos = pos
        self.text = text
        where = f" at position {pos}" if pos is not None else ""
        super().__init__(f"{message}{where}" + (f" in {text!r}" if text else ""))


@dataclass(frozen=True)
class Num:
    value: int
    pos: int


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int


@dataclass(frozen=True)
class Add:
    left: "Node"
    right: "Node"
    sign: int
    pos: int


@dataclass(frozen=True)
class Neg:
    operand: "Node"
    pos: int


@dataclass(frozen=True)
class Mul:
    left: "Node"
    right: "Node"
    pos: int


@dataclass(frozen=True)
class Div:
    left: "Node"
    right: "Node"
    pos: int


@dataclass(frozen=True)
class Pow:
    base: "Node"
    exponent: "Node"
    pos: int


@dataclass(frozen=True)
class Fact:
    argument: "Node"
    pos: int


@dataclass(frozen=True)
class Call:
    name: str
    args: tuple["Node", ...]
    pos: int


Node = Union[Num, Sym, Add, Neg, Mul, Div, Pow, Fact, Call]

_TOKEN = re.compile(r"\s*(?:(\d+)|([A-Za-z][A-Za-z0-9_]*)|(\*\*|[-+*/^!(),]))")


def _tokenize(text: str):
    tokens = []
    pos = 0
    while pos < len(text):
        if text[pos:].strip() == "":
            break
        m = _TOKEN.match(text, pos)
        if not m:
            start = pos + len(text[pos:]) - len(text[pos:].lstrip())
            raise ParseError(f"unexpected character {text[start]!r}", text, start)
        start = m.start(m.lastindex)
        if m.group(1):
            tokens.append(("int", int(m.group(1)), start))
        elif m.group(2):
            tokens.append(("name", m.group(2), start))
        else:
            op = "^" if m.group(3) == "**" else m.group(3)
            tokens.append(("op", op, start))
        pos = m.end()
    tokens.append(("end", None, len(text)))
    return tokens


class _Parser:
    def __init__(self, text: str):
        self.text = text
        self.tokens = _tokenize(text)
        self.i = 0

    def peek(self):
        return self.tokens[self.i]

    def take(self):
        tok = self.tokens[self.i]
        self.i += 1
        return tok

    def expect(self, op: str):
        kind, val, pos = self.take()
        if kind != "op" or val != op:
            raise ParseError(f"expected {op!r}", self.text, pos)

    def error(self, msg: str):
        raise ParseError(msg, self.text, self.peek()[2])

    def parse(self) -> Node:
        node = self.expr()
        kind, val, pos = self.peek()
        if kind != "end":
            raise ParseError(f"unexpected {val!r}", self.text, pos)
        return node

    def expr(self) -> Node:
        node = self.product()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "+-":
                self.take()
                node = Add(node, self.product(), 1 if val == "+" else -1, pos)
            else:
                return node

    def _starts_atom(self) -> bool:
        kind, val, _ = self.peek()
        return kind in ("int", "name") or (kind == "op" and val == "(")

    def product(self) -> Node:
        node = self.unary()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val in "*/":
                self.take()
                rhs = self.unary()
                node = Mul(node, rhs, pos) if val == "*" else Div(node, rhs, pos)
            elif self._starts_atom():
                node = Mul(node, self.unary(), pos)
            else:
                return node

    def unary(self) -> Node:
        kind, val, pos = self.peek()
        if kind == "op" and val in "+-":
            self.take()
            inner = self.unary()
            return Neg(inner, pos) if val == "-" else inner
        return self.power()

    def power(self) -> Node:
        base = self.postfix()
        kind, val, pos = self.peek()
        if kind == "op" and val == "^":
            self.take()
            return Pow(base, self.unary(), pos)
        return base

    def postfix(self) -> Node:
        node = self.atom()
        while True:
            kind, val, pos = self.peek()
            if kind == "op" and val == "!":
                self.take()
                node = Fact(node, pos)
            else:
                return node

    def atom(self) -> Node:
        kind, val, pos = self.take()
        if kind == "int":
            return Num(val, pos)
        if kind == "name":
            nk, nv, _ = self.peek()
            if nk == "op" and nv == "(":
                self.take()
                args = [self.expr()]
                while self.peek()[0] == "op" and self.peek()[1] == ",":
                    self.take()
                    args.append(self.expr())
                self.expect(")")
                return Call(val, tuple(args), pos)
            return Sym(val, pos)
        if kind == "op" and val == "(":
            node = self.expr()
            self.expect(")")
            return node
        if kind == "end":
            raise ParseError("unexpected end of input", self.text, pos)
        raise ParseError(f"unexpected {val!r}", self.text, pos)


def parse_expression(text: str) -> Node:
    if not text or not text.strip():
        raise ParseError("empty expression", text, 0)
    return _Parser(text).parse()


def fold_rational(node: Node, text: str = "", symbol: Callable[[Sym], object] | None = None) -> RationalFunction:
    """Interpret a tree as a rational function (no factorials or symbolic powers)."""

    def go(nd) -> RationalFunction:
        if isinstance(nd, Num):
            return RationalFunction(nd.value)
        if isinstance(nd, Sym):
            if symbol is not None:
                return symbol(nd)
            return RationalFunction(Polynomial.var(nd.name))
        if isinstance(nd, Add):
            left, right = go(nd.left), go(nd.right)
            return left + right if nd.sign > 0 else left - right
        if isinstance(nd, Neg):
            return -go(nd.operand)
        if isinstance(nd, Mul):
            return go(nd.left) * go(nd.right)
        if isinstance(nd, Div):
            d = go(nd.right)
            if d.is_zero():
                raise ParseError("division by zero", text, nd.pos)
            return go(nd.left) / d
        if isinstance(nd, Pow):
            e = go(nd.exponent)
            if not e.is_constant() or e.constant_value().denominator != 1:
                raise ParseError("exponent must be an integer constant here", text, nd.pos)
            b = go(nd.base)
            ev = int(e.constant_value())
            if ev < 0 and b.is_zero():
                raise ParseError("zero to a negative power", text, nd.pos)
            return b**ev
        raise ParseError("factorials and function calls are not allowed here", text, nd.pos)

    return go(node)


def parse_rational(text: str) -> RationalFunction:
    return fold_rational(parse_expression(text), text)


def parse_polynomial(text: str) -> Polynomial:
    r = parse_rational(text)
    if not r.is_polynomial():
        raise ParseError(f"not a polynomial: {r}", text, 0)
    return r.as_polynomial()


def parse_assignments(text: str) -> dict[str, str]:
    """Parse ``"b=3,c=5"`` or ``"n=-n-1,k=-k"`` style lists into raw strings."""
    out = {}
    if not text:
        return out
    for part in text.split(","):
        if "=" not in part:
            raise ParseError(f"expected name=value, got {part!r}", text, None)
        name, value = part.split("=", 1)
        out[name.strip()] = value.strip()
    return out
