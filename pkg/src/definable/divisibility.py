"""Decision procedures for sided divisibility, units and powers.

``f | g`` on the left means ``g = f*h`` for some ``h``; on the right it means
``g = h*f``.  Every supported ring is a domain, so a quotient, when it
exists, is unique.
"""

from __future__ import annotations

import enum
from dataclasses import dataclass

from .enumeration import FragmentSpec, enumerate_fragment, fragment_size
from .linalg import KernelScanner, solve_exact
from .numerics import is_rational_integer
from .rings import (
    CoefficientDomain,
    ContextMismatch,
    QPlaneElement,
    RingElement,
    RingKind,
    UniPoly,
)

# Fragments larger than this are scanned in integer blocks (see linalg).
BATCH_THRESHOLD = 20_000


class DivisionByZeroElement(ZeroDivisionError):
    pass


class InvalidBase(ValueError):
    pass


class Side(enum.Enum):
    LEFT = "left"  # divisor on the left: g = f*h
    RIGHT = "right"  # divisor on the right: g = h*f


@dataclass(frozen=True)
class DivisionOutcome:
    divides: bool
    quotient: RingElement | None = None

    def __bool__(self) -> bool:
        return self.divides


NO = DivisionOutcome(False)


def compose(f: RingElement, h: RingElement, side: Side = Side.LEFT) -> RingElement:
    return f * h if side is Side.LEFT else h * f


def _divide_uni(g: UniPoly, f: UniPoly) -> DivisionOutcome:
    ctx = g.ctx
    if not g.coeffs:
        return DivisionOutcome(True, g)
    df, dg = len(f.coeffs) - 1, len(g.coeffs) - 1
    if dg < df:
        return NO
    integral = ctx.coeffs is CoefficientDomain.INTEGER
    fc = f.coeffs
    lc = fc[-1]
    rem = list(g.coeffs)
    quot = [None] * (dg - df + 1)
    for k in range(dg - df, -1, -1):
        c = rem[k + df] / lc
        # Q[x] quotients are unique, so a non-integral coefficient settles it.
        if integral and c.denominator != 1:
            return NO
        quot[k] = c
        if c:
            for j in range(df + 1):
                if fc[j]:
                    rem[k + j] = rem[k + j] - c * fc[j]
    if any(rem[:df]):
        return NO
    return DivisionOutcome(True, UniPoly._raw(ctx, quot))


def _quotient_box(g: RingElement, f: RingElement):
    """Exponents a quotient can use; empty when degrees already rule it out."""
    if g.ctx.kind is RingKind.UNIVARIATE:
        span = g.degree - f.degree
        return [k for k in range(int(span) + 1)] if span >= 0 else []
    (gx, gy), (fx, fy) = g.bidegree, f.bidegree
    if gx < fx or gy < fy:
        return []
    return [(a, b) for a in range(gx - fx + 1) for b in range(gy - fy + 1)]


def _divide_qplane(g: QPlaneElement, f: QPlaneElement, side: Side) -> DivisionOutcome:
    """Leading-term division under lex order on ``(xdeg, ydeg)``.

    The system for the quotient coefficients is triangular in this order, so
    each step fixes one coefficient; any step leaving the quotient box fails.
    """
    ctx = g.ctx
    if not g.terms:
        return DivisionOutcome(True, g)
    (gx, gy), (fx, fy) = g.bidegree, f.bidegree
    if gx < fx or gy < fy:
        return NO
    q = ctx.q
    (la, lb), lc = f.leading()
    fterms = list(f.terms.items())
    rem = dict(g.terms)
    quot = {}
    left = side is Side.LEFT
    while rem:
        ra, rb = max(rem)
        ma, mb = ra - la, rb - lb
        if ma < 0 or mb < 0 or ma > gx - fx or mb > gy - fy:
            return NO
        twist = ctx.q_power(lb * ma) if left else ctx.q_power(mb * la)
        c = rem[(ra, rb)] / (lc * twist)
        quot[(ma, mb)] = c
        for (a, b), fcoef in fterms:
            k = (a + ma, b + mb)
            t = fcoef * c * (ctx.q_power(b * ma) if left else ctx.q_power(mb * a))
            v = rem.get(k)
            v = -t if v is None else v - t
            if v:
                rem[k] = v
            else:
                rem.pop(k, None)
    return DivisionOutcome(True, QPlaneElement._raw(ctx, quot))


def divide_by_elimination(g: RingElement, f: RingElement, side: Side = Side.LEFT) -> DivisionOutcome:
    """Solve for the quotient as one linear system over the quotient box."""
    ctx = g.ctx
    if g.is_zero():
        return DivisionOutcome(True, g)
    box = _quotient_box(g, f)
    if not box:
        return NO
    images = [compose(f, ctx.from_monomials({e: 1}), side).monomials() for e in box]
    target = g.monomials()
    keys = sorted(set(target).union(*images))
    rows = [{j: img[k] for j, img in enumerate(images) if k in img} for k in keys]
    zero = ctx.scalar_zero()
    rhs = [target.get(k, zero) for k in keys]
    sol = solve_exact(rows, rhs, len(box))
    if sol is None:
        return NO
    if ctx.coeffs is CoefficientDomain.INTEGER and not all(is_rational_integer(c)[0] for c in sol):
        return NO
    h = ctx.from_monomials(dict(zip(box, sol)))
    if compose(f, h, side) != g:
        return NO
    return DivisionOutcome(True, h)


def divide_exact(g: RingElement, f: RingElement, side: Side = Side.LEFT, method: str = "direct") -> DivisionOutcome:
    """Decide whether ``f`` divides ``g`` on ``side``; return the quotient.

    ``method="elimination"`` solves the full linear system instead of the
    direct long-division route; both are exact and must agree.
    """
    if g.ctx != f.ctx:
        raise ContextMismatch(f"cannot divide {g.ctx.name} by {f.ctx.name}")
    if f.is_zero():
        raise DivisionByZeroElement("division by the zero element")
    if method == "elimination":
        return divide_by_elimination(g, f, side)
    if method != "direct":
        raise ValueError(f"unknown division method {method!r}")
    if isinstance(g, UniPoly):
        return _divide_uni(g, f)
    return _divide_qplane(g, f, side)


def divides(f: RingElement, g: RingElement, side: Side = Side.LEFT) -> bool:
    return divide_exact(g, f, side).divides


def is_unit(z: RingElement) -> bool:
    if z.is_zero() or not z.is_constant():
        return False
    if z.ctx.coeffs is CoefficientDomain.INTEGER:
        return abs(z.constant_value()) == 1
    return True


def is_power_of(z: RingElement, p: RingElement, max_exp: int) -> int | None:
    """Return ``n`` with ``1 <= n <= max_exp`` and ``z == p^n``, else None."""
    if p.is_zero() or is_unit(p):
        raise InvalidBase("the base must be a nonzero non-unit")
    one = z.ctx.one()
    cur = z
    for n in range(1, max_exp + 1):
        out = divide_exact(cur, p, Side.LEFT)
        if not out.divides:
            return None
        cur = out.quotient
        if cur == one:
            return n
        if is_unit(cur) or cur.is_zero():
            return None
    return None


@dataclass(frozen=True)
class FragmentCheck:
    """Outcome of an exhaustive scan; ``counterexample`` is the first violation."""

    holds: bool
    counterexample: RingElement | None = None
    checked: int = 0
    detail: str = ""


def _images(f: RingElement, spec: FragmentSpec, side: Side) -> list[dict]:
    ctx = spec.context
    return [compose(f, ctx.from_monomials({e: 1}), side).monomials() for e in spec.exponents]


def _use_batch(spec: FragmentSpec, method: str) -> bool:
    if method == "auto":
        return fragment_size(spec) > BATCH_THRESHOLD
    if method not in ("batch", "elementwise"):
        raise ValueError(f"unknown scan method {method!r}")
    return method == "batch"


def not_zero_divisor_brute(f: RingElement, spec: FragmentSpec, method: str = "auto") -> FragmentCheck:
    """Check ``f*g != 0`` and ``g*f != 0`` for every nonzero ``g`` in the fragment."""
    if f.ctx != spec.context:
        raise ContextMismatch("element and fragment live in different rings")
    if f.is_zero():
        raise ValueError("zero is a zero divisor trivially")
    n = fragment_size(spec)
    if _use_batch(spec, method):
        hits = []
        for side in (Side.LEFT, Side.RIGHT):
            k = KernelScanner(spec, _images(f, spec, side)).first_hit()
            if k is not None:
                hits.append((k, side))
        if not hits:
            return FragmentCheck(True, checked=n)
        k, side = min(hits, key=lambda t: t[0])
        return FragmentCheck(False, spec.element_at(k), k + 1, f"{side.value} product vanishes")
    for idx, g in enumerate(enumerate_fragment(spec)):
        if g.is_zero():
            continue
        if (f * g).is_zero():
            return FragmentCheck(False, g, idx + 1, "left product vanishes")
        if (g * f).is_zero():
            return FragmentCheck(False, g, idx + 1, "right product vanishes")
    return FragmentCheck(True, checked=n)


def constant_annihilation_check(spec: FragmentSpec, method: str = "auto") -> FragmentCheck:
    """Check that ``(x-1)*f`` constant forces ``f == 0`` across the fragment."""
    ctx = spec.context
    shift = ctx.x() - ctx.one()
    n = fragment_size(spec)
    if _use_batch(spec, method):
        images = _images(shift, spec, Side.LEFT)
        keys = {k for img in images for k in img} - {ctx.unit_exponent}
        k = KernelScanner(spec, images, watch=keys).first_hit()
        if k is None:
            return FragmentCheck(True, checked=n)
        return FragmentCheck(False, spec.element_at(k), k + 1, "(x-1)*f is a nonzero constant")
    for idx, f in enumerate(enumerate_fragment(spec)):
        if not f.is_zero() and (shift * f).is_constant():
            return FragmentCheck(False, f, idx + 1, "(x-1)*f is a nonzero constant")
    return FragmentCheck(True, checked=n)
