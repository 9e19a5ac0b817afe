"""Recursive-descent parser for ring-element expressions.

Grammar (ASCII only, whitespace ignored)::

    expr   := term (("+" | "-") term)*
    term   := factor ("*" factor)*
    factor := "-"? base ("^" nat)?
    base   := nat | nat "/" nat | "i" | "x" | "y" | "(" expr ")"

``^`` binds tighter than unary minus, so ``-x^2`` is ``-(x^2)``.  There is no
implicit multiplication: ``2x`` is rejected.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from typing import Union

from gmpy2 import mpq

from .numerics import I
from .rings import CoefficientError, RingContext, RingElement, RingKind, power


class ParseError(ValueError):
    """Malformed input; ``position`` is a byte offset into the source."""

    def __init__(self, message: str, position: int):
        super().__init__(f"{message} at offset {position}")
        self.message = message
        self.position = position


class UnknownSymbol(ParseError):
    pass


class NegativeExponent(ParseError):
    pass


@dataclass(frozen=True)
class Token:
    kind: str  # "num", "name", "op", "end"
    text: str
    pos: int


_TOKEN_RE = re.compile(r"\s*(?:(\d+)|([A-Za-z_][A-Za-z0-9_]*)|(\S))")


def tokenize(text: str) -> list[Token]:
    for k, ch in enumerate(text):
        if not ch.isascii():
            raise ParseError(f"non-ASCII character {ch!r}", len(text[:k].encode("utf-8")))
    tokens = []
    pos = 0
    while True:
        m = _TOKEN_RE.match(text, pos)
        if m is None or m.end() == m.start() or m.lastindex is None:
            break
        byte_pos = m.start(m.lastindex)
        if m.group(1) is not None:
            tokens.append(Token("num", m.group(1), byte_pos))
        elif m.group(2) is not None:
            tokens.append(Token("name", m.group(2), byte_pos))
        else:
            tokens.append(Token("op", m.group(3), byte_pos))
        pos = m.end()
    tokens.append(Token("end", "", len(text.encode("utf-8"))))
    return tokens


# -- expression tree -----------------------------------------------------------

@dataclass(frozen=True)
class Num:
    value: object  # mpq
    pos: int


@dataclass(frozen=True)
class Sym:
    name: str
    pos: int


@dataclass(frozen=True)
class BinOp:
    op: str
    left: "ElementExpr"
    right: "ElementExpr"


@dataclass(frozen=True)
class Neg:
    operand: "ElementExpr"


@dataclass(frozen=True)
class Pow:
    base: "ElementExpr"
    exponent: int


ElementExpr = Union[Num, Sym, BinOp, Neg, Pow]


class _Parser:
    def __init__(self, text: str):
        self.tokens = tokenize(text)
        self.i = 0

    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def take(self) -> Token:
        t = self.tokens[self.i]
        self.i += 1
        return t

    def accept(self, op: str) -> bool:
        if self.tok.kind == "op" and self.tok.text == op:
            self.i += 1
            return True
        return False

    def expect(self, op: str) -> None:
        if not self.accept(op):
            raise ParseError(f"expected {op!r}, found {self.tok.text or 'end of input'!r}", self.tok.pos)

    def parse(self) -> ElementExpr:
        e = self.expr()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return e

    def expr(self) -> ElementExpr:
        e = self.term()
        while self.tok.kind == "op" and self.tok.text in "+-":
            op = self.take().text
            e = BinOp(op, e, self.term())
        return e

    def term(self) -> ElementExpr:
        e = self.factor()
        while self.accept("*"):
            e = BinOp("*", e, self.factor())
        return e

    def factor(self) -> ElementExpr:
        negate = self.accept("-")
        e = self.base()
        if self.accept("^"):
            t = self.tok
            if t.kind == "op" and t.text == "-":
                raise NegativeExponent("negative exponent", t.pos)
            if t.kind != "num":
                raise ParseError("exponent must be a nonnegative integer literal", t.pos)
            self.take()
            e = Pow(e, int(t.text))
        return Neg(e) if negate else e

    def base(self) -> ElementExpr:
        t = self.tok
        if t.kind == "num":
            self.take()
            if self.accept("/"):
                d = self.tok
                if d.kind != "num":
                    raise ParseError("expected a denominator", d.pos)
                self.take()
                if int(d.text) == 0:
                    raise ParseError("zero denominator", d.pos)
                return Num(mpq(int(t.text), int(d.text)), t.pos)
            return Num(mpq(int(t.text)), t.pos)
        if t.kind == "name":
            self.take()
            return Sym(t.text, t.pos)
        if self.accept("("):
            e = self.expr()
            self.expect(")")
            return e
        raise ParseError(f"unexpected {t.text or 'end of input'!r}", t.pos)


def parse_expr(text: str) -> ElementExpr:
    return _Parser(text).parse()


def evaluate(expr: ElementExpr, ctx: RingContext) -> RingElement:
    if isinstance(expr, Num):
        try:
            return ctx.constant(expr.value)
        except CoefficientError as exc:
            raise ParseError(str(exc), expr.pos) from None
    if isinstance(expr, Sym):
        if expr.name == "x":
            return ctx.x()
        if expr.name == "y" and ctx.kind is RingKind.QPLANE:
            return ctx.y()
        if expr.name == "i" and ctx.coeffs.value == "gaussian":
            return ctx.constant(I)
        raise UnknownSymbol(f"unknown symbol {expr.name!r} in {ctx.name}", expr.pos)
    if isinstance(expr, Neg):
        return -evaluate(expr.operand, ctx)
    if isinstance(expr, Pow):
        return power(evaluate(expr.base, ctx), expr.exponent)
    left = evaluate(expr.left, ctx)
    right = evaluate(expr.right, ctx)
    if expr.op == "+":
        return left + right
    if expr.op == "-":
        return left - right
    return left * right


def parse_element(text: str, ctx: RingContext) -> RingElement:
    """Parse ``text`` into a canonical element of ``ctx``."""
    return evaluate(parse_expr(text), ctx)
