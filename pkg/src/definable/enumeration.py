"""Finite, deterministically ordered fragments of a ring.

A fragment is every element whose coefficients, over a fixed degree (or
bidegree) box, are drawn from a finite symmetric scalar set.  Coefficient
positions are listed lowest exponent first (lex on ``(xdeg, ydeg)`` in the
quantum plane); the canonical order is lexicographic on the resulting
coefficient tuples, first position most significant, scalars ordered by
``(real, imag)``.  Element ``k`` of a fragment is therefore the base-``s``
expansion of ``k`` with ``s`` the number of scalars.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import cached_property
from typing import Iterator

from gmpy2 import mpq

from .numerics import GaussianRational, scalar_sort_key
from .rings import CoefficientDomain, RingContext, RingElement, RingKind, UniPoly, QPlaneElement

DEFAULT_CAP = 10**7


class FragmentTooLarge(ValueError):
    pass


def scalar_set(domain: CoefficientDomain, height: int) -> list:
    """Distinct scalars of height at most ``height``, in canonical order.

    Rationals of height ``H`` are ``n/d`` with ``1 <= d <= H`` and
    ``|n/d| <= H``; Gaussian rationals take both parts from that set.
    """
    if domain is CoefficientDomain.INTEGER:
        return [mpq(n) for n in range(-height, height + 1)]
    rats = sorted(
        {mpq(n, d) for d in range(1, height + 1) for n in range(-height * d, height * d + 1)}
    )
    if domain is CoefficientDomain.RATIONAL:
        return rats
    return sorted((GaussianRational(a, b) for a in rats for b in rats), key=scalar_sort_key)


@dataclass(frozen=True)
class FragmentSpec:
    """Degree (or bidegree) box plus coefficient height over a context.

    ``scalars`` may narrow the coefficient set below the context's domain,
    e.g. integer coefficients inside the quantum plane.
    """

    context: RingContext
    degree: int | tuple[int, int]
    height: int
    scalars: CoefficientDomain | None = None
    cap: int = DEFAULT_CAP

    def __post_init__(self):
        if self.height < 1:
            raise ValueError("height must be at least 1")
        if self.context.kind is RingKind.QPLANE:
            if isinstance(self.degree, int):
                object.__setattr__(self, "degree", (self.degree, self.degree))
            dx, dy = self.degree
            if dx < 0 or dy < 0:
                raise ValueError("bidegree bounds must be nonnegative")
        elif not isinstance(self.degree, int) or self.degree < 0:
            raise ValueError("degree bound must be a nonnegative integer")
        if self.scalars is None:
            object.__setattr__(self, "scalars", self.context.coeffs)
        if not self.context.coeffs.includes(self.scalars):
            raise ValueError(f"{self.scalars.value} scalars do not lie in {self.context.name}")

    @cached_property
    def exponents(self) -> tuple:
        if self.context.kind is RingKind.UNIVARIATE:
            return tuple(range(self.degree + 1))
        dx, dy = self.degree
        return tuple((a, b) for a in range(dx + 1) for b in range(dy + 1))

    @cached_property
    def values(self) -> tuple:
        out = scalar_set(self.scalars, self.height)
        if self.context.coeffs is CoefficientDomain.GAUSSIAN:
            out = [GaussianRational.coerce(v) for v in out]
        return tuple(out)

    def describe(self) -> dict:
        deg = list(self.degree) if isinstance(self.degree, tuple) else self.degree
        return {
            "ring": self.context.name,
            "degree": deg,
            "height": self.height,
            "scalars": self.scalars.value,
            "size": fragment_size(self),
        }

    def label(self) -> str:
        key = "bidegree" if isinstance(self.degree, tuple) else "degree"
        deg = ",".join(map(str, self.degree)) if isinstance(self.degree, tuple) else self.degree
        return f"{self.context.name} {key}<={deg} height<={self.height} {self.scalars.value}"

    def element(self, coeffs) -> RingElement:
        if self.context.kind is RingKind.UNIVARIATE:
            return UniPoly._raw(self.context, list(coeffs))
        return QPlaneElement._raw(self.context, dict(zip(self.exponents, coeffs)))

    def element_at(self, index: int) -> RingElement:
        n = fragment_size(self)
        if not 0 <= index < n:
            raise IndexError(index)
        base = len(self.values)
        digits = []
        for _ in self.exponents:
            index, r = divmod(index, base)
            digits.append(self.values[r])
        return self.element(reversed(digits))

    def __iter__(self) -> Iterator[RingElement]:
        return enumerate_fragment(self)

    def __len__(self) -> int:
        return fragment_size(self)

    def with_degree(self, degree) -> "FragmentSpec":
        """Same scalars at a lower degree; a subsequence in canonical order."""
        return FragmentSpec(self.context, degree, self.height, self.scalars, self.cap)

    def constants(self) -> "FragmentSpec":
        """Sub-fragment of constants; a subsequence in canonical order."""
        deg = (0, 0) if self.context.kind is RingKind.QPLANE else 0
        return FragmentSpec(self.context, deg, self.height, self.scalars, self.cap)


def fragment_size(spec: FragmentSpec) -> int:
    return len(spec.values) ** len(spec.exponents)


def _check_cap(spec: FragmentSpec) -> None:
    n = fragment_size(spec)
    if n > spec.cap:
        raise FragmentTooLarge(f"{spec.label()} has {n} elements (cap {spec.cap})")


def enumerate_fragment(spec: FragmentSpec) -> Iterator[RingElement]:
    """Stream the fragment in canonical order (restartable: call again)."""
    _check_cap(spec)
    product = itertools.product(spec.values, repeat=len(spec.exponents))
    return map(spec.element, product)
