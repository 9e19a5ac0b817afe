"""Exact scalar arithmetic: rationals and Gaussian rationals.

Rationals are ``gmpy2.mpq`` values, which are always stored in lowest terms
with a positive denominator.  Gaussian rationals are pairs of them.
"""

from __future__ import annotations

from typing import Union

import gmpy2
from gmpy2 import mpq

Rational = type(mpq(0))


class DivisionByZero(ZeroDivisionError):
    pass


def rational(num: int | str | object, den: int = 1) -> Rational:
    if den == 0:
        raise DivisionByZero("zero denominator")
    return mpq(num, den) if den != 1 else mpq(num)


class GaussianRational:
    """An element re + im*i of Q(i)."""

    __slots__ = ("re", "im")

    def __init__(self, re: object = 0, im: object = 0):
        self.re = mpq(re)
        self.im = mpq(im)

    @classmethod
    def coerce(cls, value: object) -> "GaussianRational":
        if isinstance(value, GaussianRational):
            return value
        return cls(value, 0)

    def __repr__(self) -> str:
        return f"GaussianRational({format_scalar(self)!r})"

    def __str__(self) -> str:
        return format_scalar(self)

    def __eq__(self, other: object) -> bool:
        if isinstance(other, GaussianRational):
            return self.re == other.re and self.im == other.im
        if isinstance(other, (int, Rational)):
            return self.im == 0 and self.re == other
        return NotImplemented

    def __hash__(self) -> int:
        if self.im == 0:
            return hash(self.re)
        return hash((self.re, self.im))

    def __bool__(self) -> bool:
        return bool(self.re) or bool(self.im)

    def __neg__(self) -> "GaussianRational":
        return GaussianRational(-self.re, -self.im)

    def __add__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re + other.re, self.im + other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re + other, self.im)
        return NotImplemented

    __radd__ = __add__

    def __sub__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            return GaussianRational(self.re - other.re, self.im - other.im)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re - other, self.im)
        return NotImplemented

    def __rsub__(self, other: object) -> "GaussianRational":
        return (-self).__add__(other)

    def __mul__(self, other: object) -> "GaussianRational":
        if isinstance(other, GaussianRational):
            a, b, c, d = self.re, self.im, other.re, other.im
            return GaussianRational(a * c - b * d, a * d + b * c)
        if isinstance(other, (int, Rational)):
            return GaussianRational(self.re * other, self.im * other)
        return NotImplemented

    __rmul__ = __mul__

    def conjugate(self) -> "GaussianRational":
        return GaussianRational(self.re, -self.im)

    def norm(self) -> Rational:
        return self.re * self.re + self.im * self.im

    def inverse(self) -> "GaussianRational":
        n = self.norm()
        if n == 0:
            raise DivisionByZero("inverse of zero")
        return GaussianRational(self.re / n, -self.im / n)

    def __truediv__(self, other: object) -> "GaussianRational":
        if isinstance(other, (int, Rational)):
            other = GaussianRational(other)
        if not isinstance(other, GaussianRational):
            return NotImplemented
        return self * other.inverse()

    def __rtruediv__(self, other: object) -> "GaussianRational":
        return GaussianRational.coerce(other) * self.inverse()

    def __pow__(self, n: int) -> "GaussianRational":
        if n < 0:
            return self.inverse() ** -n
        result, base = GaussianRational(1), self
        while n:
            if n & 1:
                result = result * base
            base = base * base
            n >>= 1
        return result


Scalar = Union[Rational, GaussianRational]

I = GaussianRational(0, 1)


def _rational_div(a: Rational, b: Rational) -> Rational:
    if b == 0:
        raise DivisionByZero("division by zero")
    return a / b


_RATIONAL_OPS = {
    "add": lambda a, b: a + b,
    "sub": lambda a, b: a - b,
    "mul": lambda a, b: a * b,
    "div": _rational_div,
    "neg": lambda a, b: -a,
}


def rational_arith(op: str, a: Rational, b: Rational | None = None) -> Rational:
    try:
        fn = _RATIONAL_OPS[op]
    except KeyError:
        raise ValueError(f"unknown operation {op!r}") from None
    return fn(mpq(a), mpq(0 if b is None else b))


def gaussian_arith(op: str, a: object, b: object = None) -> GaussianRational:
    a = GaussianRational.coerce(a)
    b = GaussianRational.coerce(0 if b is None else b)
    if op == "add":
        return a + b
    if op == "sub":
        return a - b
    if op == "mul":
        return a * b
    if op == "div":
        if not b:
            raise DivisionByZero("division by zero")
        return a / b
    if op == "neg":
        return -a
    raise ValueError(f"unknown operation {op!r}")


def is_rational_integer(a: object) -> tuple[bool, int | None]:
    """Return ``(True, n)`` when ``a`` is the rational integer ``n``."""
    if isinstance(a, GaussianRational):
        if a.im != 0:
            return False, None
        a = a.re
    if isinstance(a, int):
        return True, a
    a = mpq(a)
    if a.denominator == 1:
        return True, int(a.numerator)
    return False, None


def is_zero(a: object) -> bool:
    return not a


def real_part(a: Scalar) -> Rational:
    return a.re if isinstance(a, GaussianRational) else mpq(a)


def imag_part(a: Scalar) -> Rational:
    return a.im if isinstance(a, GaussianRational) else mpq(0)


def _format_rational(r: Rational) -> str:
    return str(int(r)) if r.denominator == 1 else f"{r.numerator}/{r.denominator}"


def format_scalar(a: Scalar) -> str:
    """Textual form: ``a/b``, ``a``, ``a+b*i`` or ``i``."""
    re, im = real_part(a), imag_part(a)
    if im == 0:
        return _format_rational(re)
    if abs(im) == 1:
        imag = "i" if im > 0 else "-i"
    else:
        imag = f"{_format_rational(im)}*i"
    if re == 0:
        return imag
    if imag.startswith("-"):
        return f"{_format_rational(re)}{imag}"
    return f"{_format_rational(re)}+{imag}"


def scalar_sort_key(a: Scalar) -> tuple[Rational, Rational]:
    return real_part(a), imag_part(a)


def lcm_denominator(values) -> int:
    out = 1
    for v in values:
        out = gmpy2.lcm(out, real_part(v).denominator)
        out = gmpy2.lcm(out, imag_part(v).denominator)
    return int(out)
