from __future__ import annotations

import sys
from fractions import Fraction

import pytest
from hypothesis import HealthCheck, settings
from hypothesis import strategies as st

from definable.enumeration import FragmentSpec, fragment_size
from definable.rings import gauss_poly, int_poly, qplane, rat_poly

settings.register_profile(
    "default",
    max_examples=60,
    deadline=None,
    suppress_health_check=[HealthCheck.too_slow],
)
settings.load_profile("default")

Q_VALUES = ["2", "1/3", "i", "-1"]


def all_contexts():
    return [int_poly(), rat_poly(), gauss_poly()] + [qplane(_q(q)) for q in Q_VALUES]


def _q(text):
    from definable.parser import parse_element

    return parse_element(text, gauss_poly()).constant_value()


CONTEXTS = all_contexts()


@pytest.fixture(params=CONTEXTS, ids=lambda c: c.name)
def ctx(request):
    return request.param


def sample_space(ctx, degree=3, height=3):
    deg = (degree, degree) if ctx.variables == ("x", "y") else degree
    return FragmentSpec(ctx, deg, height)


def elements(ctx, degree=3, height=3, nonzero=False):
    spec = sample_space(ctx, degree, height)
    s = st.integers(0, fragment_size(spec) - 1).map(spec.element_at)
    return s.filter(lambda e: not e.is_zero()) if nonzero else s


# -- independent oracles ------------------------------------------------------------


def word_product(f, g, q):
    """Quantum-plane product by expanding words in x, y and bubbling ``yx -> q xy``.

    Coefficients are kept as (re, im) pairs of Fractions, independent of the
    package's scalar types.
    """

    def cmul(a, b):
        return (a[0] * b[0] - a[1] * b[1], a[0] * b[1] + a[1] * b[0])

    def frac(c):
        return (Fraction(int(c.re.numerator), int(c.re.denominator)), Fraction(int(c.im.numerator), int(c.im.denominator)))

    qq = frac(q)
    out: dict = {}
    for (a1, b1), c1 in f.monomials().items():
        for (a2, b2), c2 in g.monomials().items():
            word = list("x" * a1 + "y" * b1 + "x" * a2 + "y" * b2)
            coeff = cmul(frac(c1), frac(c2))
            changed = True
            while changed:
                changed = False
                for k in range(len(word) - 1):
                    if word[k] == "y" and word[k + 1] == "x":
                        word[k], word[k + 1] = "x", "y"
                        coeff = cmul(coeff, qq)
                        changed = True
            key = (word.count("x"), word.count("y"))
            prev = out.get(key, (Fraction(0), Fraction(0)))
            out[key] = (prev[0] + coeff[0], prev[1] + coeff[1])
    return {k: v for k, v in out.items() if v != (0, 0)}


def as_fraction_pairs(f):
    return {
        k: (Fraction(int(c.re.numerator), int(c.re.denominator)), Fraction(int(c.im.numerator), int(c.im.denominator)))
        for k, c in f.monomials().items()
    }


def eval_at(f, point: Fraction):
    """Evaluate a univariate element at a rational point (complex as (re, im))."""
    re = im = Fraction(0)
    for k, c in f.monomials().items():
        c_re = Fraction(int(getattr(c, "re", c).numerator), int(getattr(c, "re", c).denominator))
        c_im = Fraction(int(c.im.numerator), int(c.im.denominator)) if hasattr(c, "im") else Fraction(0)
        re += c_re * point**k
        im += c_im * point**k
    return re, im


def pytest_terminal_summary(terminalreporter):
    module = sys.modules.get("test_acceptance")
    lines = getattr(module, "RESULTS", None)
    if lines:
        terminalreporter.section("acceptance criteria")
        for line in lines:
            terminalreporter.write_line(line)
