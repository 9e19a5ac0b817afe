import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import CONTEXTS, elements
from definable.divisibility import (
    DivisionByZeroElement,
    InvalidBase,
    Side,
    compose,
    constant_annihilation_check,
    divide_by_elimination,
    divide_exact,
    divides,
    is_power_of,
    is_unit,
    not_zero_divisor_brute,
)
from definable.enumeration import FragmentSpec
from definable.linalg import KernelScanner, solve_exact
from definable.parser import parse_element
from definable.rings import CoefficientDomain, gauss_poly, int_poly, qplane, rat_poly

SIDES = [Side.LEFT, Side.RIGHT]


def test_examples():
    z = int_poly()
    out = divide_exact(parse_element("x^3-1", z), parse_element("x-1", z), Side.LEFT)
    assert out.divides and out.quotient == parse_element("x^2+x+1", z)
    assert not divide_exact(z.x(), z.constant(2)).divides
    q = qplane(2)
    f, h = parse_element("x-1", q), parse_element("x*y", q)
    out = divide_exact(f * h, f, Side.LEFT)
    assert out.divides and out.quotient == h


def test_division_by_zero():
    with pytest.raises(DivisionByZeroElement):
        divide_exact(int_poly().x(), int_poly().zero())


def test_sides_differ_in_the_quantum_plane():
    q = qplane(2)
    x, y = q.x(), q.y()
    # left: y*(x/2) = x*y; right: x*y is already x times y
    assert divide_exact(x * y, y, Side.LEFT).quotient == q.constant(mpq(1, 2)) * x
    assert divide_exact(x * y, y, Side.RIGHT).quotient == x
    assert divide_exact(y * x, y, Side.LEFT).quotient == x
    assert divide_exact(y * x, y, Side.RIGHT).quotient == q.constant(2) * x


def test_is_unit_examples():
    z, r = int_poly(), rat_poly()
    assert is_unit(z.one())
    assert not is_unit(z.constant(2))
    assert is_unit(r.constant(2))
    assert is_unit(z.constant(-1))
    for ctx in CONTEXTS:
        assert not is_unit(ctx.x())
        assert not is_unit(ctx.zero())


def test_is_power_of_examples():
    z, r = int_poly(), rat_poly()
    assert is_power_of(parse_element("x^3", z), z.x(), 16) == 3
    assert is_power_of(z.one(), z.x(), 16) is None
    assert is_power_of(parse_element("2*x^2", r), r.x(), 16) is None
    assert is_power_of(parse_element("x^5", z), z.x(), 4) is None
    with pytest.raises(InvalidBase):
        is_power_of(z.x(), z.one(), 4)


def test_fragment_checks_examples():
    z = int_poly()
    chk = not_zero_divisor_brute(parse_element("x-1", z), FragmentSpec(z, 2, 2))
    assert chk.holds and chk.checked == 125
    q = qplane(2)
    assert not_zero_divisor_brute(parse_element("x-1", q), FragmentSpec(q, (1, 1), 1)).holds
    assert not_zero_divisor_brute(z.one(), FragmentSpec(z, 2, 2)).holds
    assert constant_annihilation_check(FragmentSpec(z, 3, 2)).holds
    assert constant_annihilation_check(FragmentSpec(gauss_poly(), 1, 1)).holds
    with pytest.raises(ValueError):
        not_zero_divisor_brute(z.zero(), FragmentSpec(z, 1, 1))


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
def test_batch_and_elementwise_agree(ctx):
    spec = FragmentSpec(ctx, (1, 1) if ctx.variables == ("x", "y") else 2, 1)
    f = ctx.x() - ctx.one()
    for check in (lambda m: not_zero_divisor_brute(f, spec, m), lambda m: constant_annihilation_check(spec, m)):
        a, b = check("batch"), check("elementwise")
        assert (a.holds, a.counterexample) == (b.holds, b.counterexample)


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
@given(data=st.data())
def test_round_trip(ctx, data):
    f = data.draw(elements(ctx, 2, 2, nonzero=True))
    h = data.draw(elements(ctx, 2, 2))
    for side in SIDES:
        g = compose(f, h, side)
        out = divide_exact(g, f, side)
        assert out.divides and out.quotient == h
        assert compose(f, out.quotient, side) == g


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
@given(data=st.data())
def test_direct_matches_elimination(ctx, data):
    f = data.draw(elements(ctx, 2, 2, nonzero=True))
    g = data.draw(elements(ctx, 2, 2))
    for side in SIDES:
        direct = divide_exact(g, f, side)
        assert direct == divide_by_elimination(g, f, side)
        shifted = compose(f, g, side) + ctx.one()
        assert divide_exact(shifted, f, side) == divide_by_elimination(shifted, f, side)
        assert divide_exact(shifted, f, side).divides == is_unit(f)


@pytest.mark.parametrize("ctx", [c for c in CONTEXTS if c.commutative], ids=lambda c: c.name)
@given(data=st.data())
def test_commutative_sides_agree(ctx, data):
    f = data.draw(elements(ctx, 2, 2, nonzero=True))
    g = data.draw(elements(ctx, 2, 2))
    assert divide_exact(g, f, Side.LEFT) == divide_exact(g, f, Side.RIGHT)


@pytest.mark.parametrize("ctx", [int_poly(), qplane(2)], ids=lambda c: c.name)
def test_quotient_uniqueness_brute(ctx):
    # every g = f*h from the fragment has exactly one fragment quotient
    spec = FragmentSpec(ctx, (1, 0) if ctx.variables == ("x", "y") else 1, 1)
    items = list(spec)
    for f in items:
        if f.is_zero():
            continue
        for side in SIDES:
            products = {}
            for h in items:
                products.setdefault(compose(f, h, side), []).append(h)
            for g, hs in products.items():
                assert len(hs) == 1
                assert divide_exact(g, f, side).quotient == hs[0]


def test_divides_helper():
    z = int_poly()
    assert divides(z.x(), parse_element("x^2+x", z))
    assert not divides(parse_element("x+2", z), parse_element("x^2+x", z))


def test_solve_exact():
    rows = [{0: mpq(1), 1: mpq(1)}, {0: mpq(1), 1: mpq(-1)}]
    assert solve_exact(rows, [mpq(3), mpq(1)], 2) == [2, 1]
    assert solve_exact([{0: mpq(1)}, {0: mpq(1)}], [mpq(1), mpq(2)], 1) is None


@given(
    st.lists(st.lists(st.integers(-2, 2), min_size=2, max_size=2), min_size=3, max_size=3),
)
def test_kernel_scanner_matches_brute_force(matrix):
    ctx = int_poly()
    spec = FragmentSpec(ctx, 2, 1)
    images = [{k: mpq(v) for k, v in enumerate(row) if v} for row in matrix]
    expected = None
    for idx, e in enumerate(spec):
        if e.is_zero():
            continue
        coeffs = [e.coefficient(j) for j in range(3)]
        if all(sum(coeffs[j] * matrix[j][k] for j in range(3)) == 0 for k in range(2)):
            expected = idx
            break
    assert KernelScanner(spec, images).first_hit() == expected


def test_kernel_scanner_object_fallback():
    ctx = int_poly()
    spec = FragmentSpec(ctx, 1, 1)
    huge = mpq(2**70)
    scanner = KernelScanner(spec, [{0: huge}, {0: huge}])
    assert not scanner.native
    assert scanner.first_hit() == spec_index(spec, "x - 1")


def test_kernel_scanner_gaussian():
    ctx = gauss_poly()
    spec = FragmentSpec(ctx, 1, 1)
    i = parse_element("i", ctx).constant_value()
    # c0 + i*c1 = 0 on the first coordinate
    scanner = KernelScanner(spec, [{0: mpq(1)}, {0: i}])
    k = scanner.first_hit()
    e = spec.element_at(k)
    assert e.coefficient(0) + i * e.coefficient(1) == 0 and not e.is_zero()
    brute = next(n for n, g in enumerate(spec) if not g.is_zero() and g.coefficient(0) + i * g.coefficient(1) == 0)
    assert k == brute


def spec_index(spec, text):
    target = parse_element(text, spec.context)
    return next(n for n, e in enumerate(spec) if e == target)


def test_integer_scalars_in_qplane_fragment():
    q = qplane(2)
    spec = FragmentSpec(q, (2, 2), 1, CoefficientDomain.INTEGER)
    assert not_zero_divisor_brute(q.x() - q.one(), spec, "batch").holds
