import pytest
from gmpy2 import mpq
from hypothesis import given
from hypothesis import strategies as st

from conftest import CONTEXTS, elements
from definable.enumeration import FragmentSpec
from definable.parser import NegativeExponent, ParseError, UnknownSymbol, parse_element, tokenize
from definable.rings import format_element, gauss_poly, int_poly, power, qplane, rat_poly


def test_examples():
    assert parse_element("x^2 - 1/2*x + 1", rat_poly()).coeffs == (1, mpq(-1, 2), 1)
    assert format_element(parse_element("y*x", qplane(2))) == "2*x*y"
    with pytest.raises(UnknownSymbol):
        parse_element("y+1", int_poly())


def test_juxtaposition_rejected():
    with pytest.raises(ParseError) as exc:
        parse_element("2x", int_poly())
    assert exc.value.position == 1


def test_negative_exponent():
    with pytest.raises(NegativeExponent):
        parse_element("x^-1", int_poly())


def test_unicode_minus_rejected_with_byte_offset():
    with pytest.raises(ParseError) as exc:
        parse_element("x − 1", int_poly())
    assert exc.value.position == 2


def test_symbols_per_context():
    with pytest.raises(UnknownSymbol):
        parse_element("i*x", rat_poly())
    with pytest.raises(UnknownSymbol):
        parse_element("z", int_poly())
    assert parse_element("i*x", gauss_poly()).coefficient(1) == gauss_poly().coerce(parse_element("i", gauss_poly()).constant_value())


def test_non_integral_coefficient_in_int_poly():
    with pytest.raises(ParseError):
        parse_element("1/2*x", int_poly())


def test_zero_denominator():
    with pytest.raises(ParseError):
        parse_element("1/0", rat_poly())


def test_precedence():
    z = int_poly()
    x = z.x()
    assert parse_element("2*x^3", z) == 2 * power(x, 3)
    assert parse_element("-x^2", z) == -power(x, 2)
    assert parse_element("1 - x - x", z) == parse_element("1 - (x + x)", z)
    assert parse_element("(x+1)^2", z) == power(x + 1, 2)


def test_whitespace_insensitive():
    ctx = qplane(2)
    assert parse_element(" ( 3 + x ) *\t( 2 + y ) ", ctx) == parse_element("(3+x)*(2+y)", ctx)


def test_tokenize_positions():
    toks = tokenize("x + 10")
    assert [(t.kind, t.text, t.pos) for t in toks if t.kind != "end"] == [
        ("name", "x", 0),
        ("op", "+", 2),
        ("num", "10", 4),
    ]


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
@given(data=st.data())
def test_round_trip(ctx, data):
    f = data.draw(elements(ctx))
    assert parse_element(format_element(f), ctx) == f


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
def test_round_trip_whole_fragment(ctx):
    deg = (1, 1) if ctx.variables == ("x", "y") else 2
    for f in FragmentSpec(ctx, deg, 1):
        assert parse_element(format_element(f), ctx) == f
