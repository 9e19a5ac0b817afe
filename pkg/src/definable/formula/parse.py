"""Text syntax for formulas.

::

    formula    := implies
    implies    := or ("->" implies)?
    or         := and ("|" and)*
    and        := unary ("&" unary)*
    unary      := "!" unary | quantifier | "(" formula ")" | atom
    quantifier := ("exists" | "forall") NAME "in" domain ["exhaustive"] "." formula
    atom       := term ("=" term | "|" term | "|R" term | "in" NAME)
    domain     := "frag" [bounds] | "pow" "(" NAME "," NAT ")"
                | ("quot" | "quotR") "(" term "," term ")" | NAME [bounds]
    bounds     := "(" NAT ("," NAT)* ")"      -- degree[,ydegree],height

Terms use the element grammar with names and integer literals.  A ``|``
directly after a term is divisibility (divisor on the left); after a complete
atom it is disjunction.  Quantifier bodies extend as far right as possible.
"""

from __future__ import annotations

from ..divisibility import Side
from ..parser import ParseError, Token, tokenize
from .ast import (
    Add,
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    FoFormula,
    FoTerm,
    Implies,
    InSet,
    IntLit,
    Mul,
    NamedSet,
    Neg,
    Not,
    Or,
    Param,
    Pow,
    PowersOfParam,
    Quotient,
    RingFragment,
    Sub,
    Var,
    free_names,
)

KEYWORDS = {"exists", "forall", "in", "exhaustive", "frag", "pow", "quot", "quotR"}
GENERATORS = {"x", "y"}


class UnboundVariable(ParseError):
    pass


class _FormulaParser:
    def __init__(self, text: str):
        self.tokens: list[Token] = tokenize(text)
        self.i = 0
        self.bound: list[str] = []
        self.first_use: dict[str, int] = {}

    # -- token helpers
    @property
    def tok(self) -> Token:
        return self.tokens[self.i]

    def peek(self, k: int = 1) -> Token:
        return self.tokens[min(self.i + k, len(self.tokens) - 1)]

    def is_op(self, text: str) -> bool:
        return self.tok.kind == "op" and self.tok.text == text

    def is_name(self, text: str) -> bool:
        return self.tok.kind == "name" and self.tok.text == text

    def fail(self, what: str):
        found = self.tok.text or "end of input"
        raise ParseError(f"expected {what}, found {found!r}", self.tok.pos)

    def expect_op(self, text: str) -> None:
        if not self.is_op(text):
            self.fail(repr(text))
        self.i += 1

    def expect_name(self, text: str | None = None) -> str:
        if self.tok.kind != "name" or (text is not None and self.tok.text != text):
            self.fail(repr(text) if text else "a name")
        t = self.tok.text
        self.i += 1
        return t

    def expect_nat(self) -> int:
        if self.tok.kind != "num":
            self.fail("a natural number")
        n = int(self.tok.text)
        self.i += 1
        return n

    def at_arrow(self) -> bool:
        nxt = self.peek()
        return self.is_op("-") and nxt.kind == "op" and nxt.text == ">" and nxt.pos == self.tok.pos + 1

    def at_right_bar(self) -> bool:
        nxt = self.peek()
        return self.is_op("|") and nxt.kind == "name" and nxt.text == "R" and nxt.pos == self.tok.pos + 1

    # -- formulas
    def parse(self) -> FoFormula:
        f = self.implies()
        if self.tok.kind != "end":
            raise ParseError(f"unexpected {self.tok.text!r}", self.tok.pos)
        return f

    def implies(self) -> FoFormula:
        left = self.or_()
        if self.at_arrow():
            self.i += 2
            return Implies(left, self.implies())
        return left

    def or_(self) -> FoFormula:
        parts = [self.and_()]
        while self.is_op("|") and not self.at_right_bar():
            self.i += 1
            parts.append(self.and_())
        return parts[0] if len(parts) == 1 else Or(*parts)

    def and_(self) -> FoFormula:
        parts = [self.unary()]
        while self.is_op("&"):
            self.i += 1
            parts.append(self.unary())
        return parts[0] if len(parts) == 1 else And(*parts)

    def unary(self) -> FoFormula:
        if self.is_op("!"):
            self.i += 1
            return Not(self.unary())
        if self.is_name("exists") or self.is_name("forall"):
            return self.quantifier()
        if self.is_op("("):
            # Either a parenthesized term starting an atom or a parenthesized formula.
            start, bound = self.i, list(self.bound)
            try:
                return self.atom()
            except ParseError as exc:
                first = exc
            self.i, self.bound = start, bound
            try:
                self.expect_op("(")
                f = self.implies()
                self.expect_op(")")
                return f
            except ParseError as exc:
                raise max((first, exc), key=lambda e: e.position) from None
        return self.atom()

    def quantifier(self) -> FoFormula:
        kind = self.expect_name()
        var = self.expect_name()
        if var in KEYWORDS:
            raise ParseError(f"{var!r} is reserved", self.tokens[self.i - 1].pos)
        self.expect_name("in")
        domain = self.domain()
        exhaustive = False
        if self.is_name("exhaustive"):
            self.i += 1
            exhaustive = True
        self.expect_op(".")
        self.bound.append(var)
        body = self.implies()
        self.bound.pop()
        if kind == "exists":
            return Exists(var, domain, body, exhaustive=exhaustive)
        return Forall(var, domain, body, exhaustive=exhaustive)

    def bounds(self) -> RingFragment:
        if not self.is_op("("):
            return RingFragment()
        self.i += 1
        nums = [self.expect_nat()]
        while self.is_op(","):
            self.i += 1
            nums.append(self.expect_nat())
        pos = self.tok.pos
        self.expect_op(")")
        if len(nums) == 2:
            return RingFragment(nums[0], nums[1])
        if len(nums) == 3:
            return RingFragment((nums[0], nums[1]), nums[2])
        raise ParseError("fragment bounds are (degree,height) or (xdeg,ydeg,height)", pos)

    def domain(self):
        if self.is_name("frag"):
            self.i += 1
            return self.bounds()
        if self.is_name("pow"):
            self.i += 1
            self.expect_op("(")
            param = self.expect_name()
            self.use(param, self.tokens[self.i - 1].pos)
            self.expect_op(",")
            n = self.expect_nat()
            self.expect_op(")")
            return PowersOfParam(param, n)
        if self.is_name("quot") or self.is_name("quotR"):
            side = Side.LEFT if self.expect_name() == "quot" else Side.RIGHT
            self.expect_op("(")
            dividend = self.term()
            self.expect_op(",")
            divisor = self.term()
            self.expect_op(")")
            return Quotient(dividend, divisor, side)
        if self.tok.kind == "name" and self.tok.text not in KEYWORDS:
            name = self.expect_name()
            return NamedSet(name, self.bounds())
        self.fail("a quantifier domain")

    def atom(self) -> FoFormula:
        left = self.term()
        if self.is_op("="):
            self.i += 1
            return Eq(left, self.term())
        if self.at_right_bar():
            self.i += 2
            return Divides(left, self.term(), Side.RIGHT)
        if self.is_op("|"):
            self.i += 1
            return Divides(left, self.term(), Side.LEFT)
        if self.is_name("in"):
            self.i += 1
            return InSet(self.expect_name(), left)
        self.fail("'=', '|', '|R' or 'in'")

    # -- terms
    def use(self, name: str, pos: int) -> None:
        if name not in self.bound:
            self.first_use.setdefault(name, pos)

    def term(self) -> FoTerm:
        t = self.product()
        while (self.is_op("+") or self.is_op("-")) and not self.at_arrow():
            op = self.tok.text
            self.i += 1
            rhs = self.product()
            t = Add(t, rhs) if op == "+" else Sub(t, rhs)
        return t

    def product(self) -> FoTerm:
        t = self.factor()
        while self.is_op("*"):
            self.i += 1
            t = Mul(t, self.factor())
        return t

    def factor(self) -> FoTerm:
        negate = False
        if self.is_op("-"):
            negate = True
            self.i += 1
        t = self.base()
        if self.is_op("^"):
            self.i += 1
            if self.is_op("-"):
                raise ParseError("negative exponent", self.tok.pos)
            t = Pow(t, self.expect_nat())
        return Neg(t) if negate else t

    def base(self) -> FoTerm:
        tok = self.tok
        if tok.kind == "num":
            self.i += 1
            return IntLit(int(tok.text))
        if tok.kind == "name" and tok.text not in KEYWORDS:
            self.i += 1
            if tok.text in self.bound:
                return Var(tok.text)
            self.use(tok.text, tok.pos)
            return Param(tok.text) if tok.text in GENERATORS else Var(tok.text)
        if self.is_op("("):
            self.i += 1
            t = self.term()
            self.expect_op(")")
            return t
        self.fail("a term")


def parse_formula(text: str, free: set[str] | None = None) -> FoFormula:
    """Parse ``text``.  When ``free`` is given, any other free name is an error.

    The generators ``x`` and ``y`` are always allowed free.
    """
    p = _FormulaParser(text)
    f = p.parse()
    if free is not None:
        allowed = set(free) | GENERATORS
        for name in sorted(free_names(f) - allowed, key=lambda n: p.first_use.get(n, 0)):
            raise UnboundVariable(f"unbound variable {name!r}", p.first_use.get(name, 0))
    return f
