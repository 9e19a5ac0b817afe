"""Exact arithmetic in Z[x], Q[x], Q(i)[x] and the quantum plane over Q(i).

Quantum-plane elements are kept in x-before-y normal form.  Products are
normalized with the rewrite ``y*x -> q*x*y``, so that

    x^a y^b * x^c y^d = q^(b*c) x^(a+c) y^(b+d).

This orientation reproduces the worked example (2+y)(3+x) = 6+2x+3y+2xy at
q = 2.  Reading the defining relation ``xy = qyx`` literally would instead
give ``y*x -> q^-1 * x*y``; the example is treated as authoritative.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass, field
from functools import lru_cache
from typing import Iterable, Mapping, Union

from gmpy2 import mpq

from .numerics import (
    GaussianRational,
    Rational,
    Scalar,
    format_scalar,
    imag_part,
    is_rational_integer,
    real_part,
)

NEG_INF = float("-inf")


class ContextMismatch(TypeError):
    """Operands live in different rings."""


class CoefficientError(ValueError):
    """A scalar does not belong to the coefficient domain."""


class CoefficientDomain(enum.Enum):
    INTEGER = "integer"
    RATIONAL = "rational"
    GAUSSIAN = "gaussian"

    def contains(self, value: Scalar) -> bool:
        if self is CoefficientDomain.GAUSSIAN:
            return True
        if imag_part(value) != 0:
            return False
        if self is CoefficientDomain.RATIONAL:
            return True
        return is_rational_integer(value)[0]

    def includes(self, other: "CoefficientDomain") -> bool:
        order = list(CoefficientDomain)
        return order.index(other) <= order.index(self)

    def is_field(self) -> bool:
        return self is not CoefficientDomain.INTEGER


class RingKind(enum.Enum):
    UNIVARIATE = "univariate"
    QPLANE = "qplane"


@lru_cache(maxsize=4096)
def _q_power(q: GaussianRational, k: int) -> GaussianRational:
    return q**k


@dataclass(frozen=True)
class RingContext:
    kind: RingKind
    coeffs: CoefficientDomain
    q: GaussianRational | None = None

    def __post_init__(self):
        if self.kind is RingKind.QPLANE:
            if self.q is None:
                raise ValueError("the quantum plane needs a parameter q")
            object.__setattr__(self, "q", GaussianRational.coerce(self.q))
            if not self.q:
                raise ValueError("q must be nonzero")
            if self.coeffs is not CoefficientDomain.GAUSSIAN:
                raise ValueError("the quantum plane is defined over Q(i)")
        elif self.q is not None:
            raise ValueError("q only applies to the quantum plane")

    @property
    def name(self) -> str:
        if self.kind is RingKind.QPLANE:
            return f"Q(i)_q[x,y] (q={format_scalar(self.q)})"
        base = {"integer": "Z", "rational": "Q", "gaussian": "Q(i)"}[self.coeffs.value]
        return f"{base}[x]"

    def __str__(self) -> str:
        return self.name

    @property
    def commutative(self) -> bool:
        return self.kind is RingKind.UNIVARIATE

    @property
    def variables(self) -> tuple[str, ...]:
        return ("x", "y") if self.kind is RingKind.QPLANE else ("x",)

    def q_power(self, k: int) -> GaussianRational:
        return _q_power(self.q, k)

    def coerce(self, value: object) -> Scalar:
        """Convert ``value`` to this ring's scalar type, checking membership."""
        if isinstance(value, GaussianRational):
            g = value
        else:
            g = GaussianRational(value)
        if not self.coeffs.contains(g):
            raise CoefficientError(f"{format_scalar(g)} is not a coefficient of {self.name}")
        if self.coeffs is CoefficientDomain.GAUSSIAN:
            return g
        return g.re

    def scalar_zero(self) -> Scalar:
        return self.coerce(0)

    def scalar_one(self) -> Scalar:
        return self.coerce(1)

    def zero(self) -> "RingElement":
        return self.from_monomials({})

    def one(self) -> "RingElement":
        return self.constant(1)

    def constant(self, value: object) -> "RingElement":
        return self.from_monomials({self.unit_exponent: self.coerce(value)})

    def x(self) -> "RingElement":
        return self.from_monomials({1 if self.kind is RingKind.UNIVARIATE else (1, 0): self.scalar_one()})

    def y(self) -> "RingElement":
        if self.kind is not RingKind.QPLANE:
            raise ContextMismatch(f"{self.name} has no variable y")
        return self.from_monomials({(0, 1): self.scalar_one()})

    @property
    def unit_exponent(self):
        return 0 if self.kind is RingKind.UNIVARIATE else (0, 0)

    def from_monomials(self, terms: Mapping) -> "RingElement":
        """Build an element from ``{exponent: coefficient}``."""
        if self.kind is RingKind.UNIVARIATE:
            size = max(terms, default=-1) + 1
            coeffs = [self.scalar_zero()] * size
            for e, c in terms.items():
                coeffs[e] = self.coerce(c)
            return UniPoly(self, coeffs)
        return QPlaneElement(self, {e: self.coerce(c) for e, c in terms.items()})


def int_poly() -> RingContext:
    return RingContext(RingKind.UNIVARIATE, CoefficientDomain.INTEGER)


def rat_poly() -> RingContext:
    return RingContext(RingKind.UNIVARIATE, CoefficientDomain.RATIONAL)


def gauss_poly() -> RingContext:
    return RingContext(RingKind.UNIVARIATE, CoefficientDomain.GAUSSIAN)


def qplane(q: object) -> RingContext:
    return RingContext(RingKind.QPLANE, CoefficientDomain.GAUSSIAN, GaussianRational.coerce(q))


def _check_same(f: "RingElement", g: "RingElement") -> None:
    if f.ctx != g.ctx:
        raise ContextMismatch(f"cannot combine elements of {f.ctx.name} and {g.ctx.name}")


def _coerce_operand(f: "RingElement", g: object) -> "RingElement":
    if isinstance(g, RingElement):
        _check_same(f, g)
        return g
    if isinstance(g, int):
        return embed_integer(g, f.ctx)
    return NotImplemented


class RingElement:
    """Common surface of :class:`UniPoly` and :class:`QPlaneElement`."""

    __slots__ = ("ctx",)
    ctx: RingContext

    def __radd__(self, other):
        return self.__add__(other)

    def __rsub__(self, other):
        return (-self).__add__(other)

    def __rmul__(self, other):
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        return other * self

    def __pow__(self, n: int) -> "RingElement":
        return power(self, n)

    def __str__(self) -> str:
        return format_element(self)

    def __repr__(self) -> str:
        return f"<{self.ctx.name}: {format_element(self)}>"


class UniPoly(RingElement):
    """Dense univariate polynomial; ``coeffs[k]`` multiplies ``x^k``."""

    __slots__ = ("coeffs", "_hash")

    def __init__(self, ctx: RingContext, coeffs: Iterable):
        if ctx.kind is not RingKind.UNIVARIATE:
            raise ContextMismatch(f"{ctx.name} is not a univariate ring")
        self.ctx = ctx
        cs = [ctx.coerce(c) for c in coeffs]
        while cs and not cs[-1]:
            cs.pop()
        self.coeffs = tuple(cs)
        self._hash = None

    @classmethod
    def _raw(cls, ctx: RingContext, coeffs: list) -> "UniPoly":
        while coeffs and not coeffs[-1]:
            coeffs.pop()
        out = object.__new__(cls)
        out.ctx = ctx
        out.coeffs = tuple(coeffs)
        out._hash = None
        return out

    @property
    def degree(self):
        return len(self.coeffs) - 1 if self.coeffs else NEG_INF

    def is_zero(self) -> bool:
        return not self.coeffs

    def is_constant(self) -> bool:
        return len(self.coeffs) <= 1

    def constant_value(self) -> Scalar:
        return self.coeffs[0] if self.coeffs else self.ctx.scalar_zero()

    def coefficient(self, k: int) -> Scalar:
        return self.coeffs[k] if 0 <= k < len(self.coeffs) else self.ctx.scalar_zero()

    def monomials(self) -> dict:
        return {k: c for k, c in enumerate(self.coeffs) if c}

    def leading(self):
        return len(self.coeffs) - 1, self.coeffs[-1]

    def __eq__(self, other) -> bool:
        if isinstance(other, UniPoly):
            return self.ctx == other.ctx and self.coeffs == other.coeffs
        if isinstance(other, int):
            return self == embed_integer(other, self.ctx)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, self.coeffs))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.coeffs)

    def __neg__(self) -> "UniPoly":
        return UniPoly._raw(self.ctx, [-c for c in self.coeffs])

    def __add__(self, other) -> "UniPoly":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if len(a) < len(b):
            a, b = b, a
        out = list(a)
        for k, c in enumerate(b):
            out[k] = out[k] + c
        return UniPoly._raw(self.ctx, out)

    def __sub__(self, other) -> "UniPoly":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other) -> "UniPoly":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        a, b = self.coeffs, other.coeffs
        if not a or not b:
            return UniPoly._raw(self.ctx, [])
        out = [self.ctx.scalar_zero()] * (len(a) + len(b) - 1)
        for i, ca in enumerate(a):
            if not ca:
                continue
            for j, cb in enumerate(b):
                if cb:
                    out[i + j] = out[i + j] + ca * cb
        return UniPoly._raw(self.ctx, out)

    def scale(self, c: Scalar) -> "UniPoly":
        return UniPoly._raw(self.ctx, [c * a for a in self.coeffs])


def qplane_monomial_product(m1, m2, q) -> tuple[tuple[int, int], Scalar]:
    """Multiply ``(bidegree, coeff)`` pairs under ``y*x -> q*x*y``."""
    (a1, b1), c1 = m1
    (a2, b2), c2 = m2
    q = GaussianRational.coerce(q)
    if not q:
        raise ValueError("q must be nonzero")
    return (a1 + a2, b1 + b2), c1 * c2 * _q_power(q, b1 * a2)


class QPlaneElement(RingElement):
    """Sparse quantum-plane element: ``{(xdeg, ydeg): coeff}``, zeros dropped."""

    __slots__ = ("terms", "_hash")

    def __init__(self, ctx: RingContext, terms: Mapping):
        if ctx.kind is not RingKind.QPLANE:
            raise ContextMismatch(f"{ctx.name} is not a quantum plane")
        self.ctx = ctx
        clean = {}
        for (a, b), c in terms.items():
            if a < 0 or b < 0:
                raise ValueError("exponents must be nonnegative")
            c = ctx.coerce(c)
            if c:
                clean[(int(a), int(b))] = c
        self.terms = clean
        self._hash = None

    @classmethod
    def _raw(cls, ctx: RingContext, terms: dict) -> "QPlaneElement":
        out = object.__new__(cls)
        out.ctx = ctx
        out.terms = {k: c for k, c in terms.items() if c}
        out._hash = None
        return out

    @property
    def bidegree(self):
        if not self.terms:
            return NEG_INF
        return max(a for a, _ in self.terms), max(b for _, b in self.terms)

    degree = bidegree

    def is_zero(self) -> bool:
        return not self.terms

    def is_constant(self) -> bool:
        return not self.terms or set(self.terms) == {(0, 0)}

    def constant_value(self) -> Scalar:
        return self.terms.get((0, 0), self.ctx.scalar_zero())

    def coefficient(self, exp: tuple[int, int]) -> Scalar:
        return self.terms.get(exp, self.ctx.scalar_zero())

    def monomials(self) -> dict:
        return dict(self.terms)

    def leading(self):
        """Leading term under lex order on (xdeg, ydeg)."""
        e = max(self.terms)
        return e, self.terms[e]

    def __eq__(self, other) -> bool:
        if isinstance(other, QPlaneElement):
            return self.ctx == other.ctx and self.terms == other.terms
        if isinstance(other, int):
            return self == embed_integer(other, self.ctx)
        return NotImplemented

    def __hash__(self) -> int:
        if self._hash is None:
            self._hash = hash((self.ctx, frozenset(self.terms.items())))
        return self._hash

    def __bool__(self) -> bool:
        return bool(self.terms)

    def __neg__(self) -> "QPlaneElement":
        return QPlaneElement._raw(self.ctx, {k: -c for k, c in self.terms.items()})

    def __add__(self, other) -> "QPlaneElement":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        out = dict(self.terms)
        for k, c in other.terms.items():
            out[k] = out[k] + c if k in out else c
        return QPlaneElement._raw(self.ctx, out)

    def __sub__(self, other) -> "QPlaneElement":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        return self + (-other)

    def __mul__(self, other) -> "QPlaneElement":
        other = _coerce_operand(self, other)
        if other is NotImplemented:
            return other
        q = self.ctx.q
        out: dict = {}
        for (a1, b1), c1 in self.terms.items():
            for (a2, b2), c2 in other.terms.items():
                k = (a1 + a2, b1 + b2)
                c = c1 * c2
                if b1 and a2:
                    c = c * _q_power(q, b1 * a2)
                out[k] = out[k] + c if k in out else c
        return QPlaneElement._raw(self.ctx, out)

    def scale(self, c: Scalar) -> "QPlaneElement":
        return QPlaneElement._raw(self.ctx, {k: c * a for k, a in self.terms.items()})


Element = Union[UniPoly, QPlaneElement]

_OPS = {
    "add": lambda f, g: f + g,
    "sub": lambda f, g: f - g,
    "mul": lambda f, g: f * g,
}


def ring_op(op: str, f: RingElement, g: RingElement | None = None) -> RingElement:
    if op == "neg":
        return -f
    if op not in _OPS:
        raise ValueError(f"unknown ring operation {op!r}")
    _check_same(f, g)
    return _OPS[op](f, g)


@lru_cache(maxsize=4096)
def embed_integer(n: int, ctx: RingContext) -> RingElement:
    # elements are immutable, so sharing cached instances is safe
    return ctx.from_monomials({ctx.unit_exponent: mpq(n)} if n else {})


def power(f: RingElement, n: int) -> RingElement:
    if n < 0:
        raise ValueError("negative exponent")
    result = f.ctx.one()
    base = f
    while n:
        if n & 1:
            result = result * base
        n >>= 1
        if n:
            base = base * base
    return result


@dataclass(frozen=True)
class ElementInfo:
    degree: object
    is_constant: bool
    is_zero: bool
    constant_value: Scalar | None = field(default=None)


def inspect(f: RingElement) -> ElementInfo:
    const = f.is_constant()
    return ElementInfo(
        degree=f.degree,
        is_constant=const,
        is_zero=f.is_zero(),
        constant_value=f.constant_value() if const else None,
    )


# -- display -----------------------------------------------------------------

def _is_negative(c: Scalar) -> bool:
    re = real_part(c)
    return re < 0 or (re == 0 and imag_part(c) < 0)


def _monomial_text(ctx: RingContext, exp) -> str:
    if ctx.kind is RingKind.UNIVARIATE:
        exps = [("x", exp)]
    else:
        exps = [("x", exp[0]), ("y", exp[1])]
    parts = [v if e == 1 else f"{v}^{e}" for v, e in exps if e]
    return "*".join(parts)


def _coeff_text(c: Scalar, mono: str) -> str:
    text = format_scalar(c)
    if real_part(c) != 0 and imag_part(c) != 0:
        text = f"({text})"
    if not mono:
        return text
    if c == 1:
        return mono
    return f"{text}*{mono}"


def format_element(f: RingElement) -> str:
    """Canonical display: terms by descending (bi)degree, ``x^a*y^b`` order."""
    items = sorted(f.monomials().items(), reverse=True)
    if not items:
        return "0"
    out = []
    for idx, (exp, c) in enumerate(items):
        neg = _is_negative(c)
        text = _coeff_text(-c if neg else c, _monomial_text(f.ctx, exp))
        if idx == 0:
            out.append(f"-{text}" if neg else text)
        else:
            out.append(f" - {text}" if neg else f" + {text}")
    return "".join(out)
