import warnings
from fractions import Fraction

import pytest
from hypothesis import given
from hypothesis import strategies as st

from conftest import CONTEXTS, elements, eval_at
from definable.definitions import (
    BoundTooSmall,
    Decision,
    build_constants_formula,
    build_natural_formula,
    build_phi_int,
    build_phi_pow,
    check_hypotheses,
    classify,
    constants_membership,
    decide_integer_semantic,
    decide_natural_semantic,
    decompose_power,
    geometric_sum,
    pow_characterization_check,
    standard_environment,
    syntactic_power_exponent,
    telescoping_cofactor,
    verify_geometric_identity,
    verify_telescoping_identity,
)
from definable.divisibility import Side, divide_exact
from definable.enumeration import FragmentSpec
from definable.formula import (
    And,
    Divides,
    Environment,
    Exists,
    Forall,
    ProvenFalse,
    ProvenTrue,
    RingFragment,
    UnknownUpTo,
    eval_formula,
)
from definable.parser import parse_element
from definable.rings import CoefficientDomain, gauss_poly, int_poly, power, qplane, rat_poly

Z, QX = int_poly(), rat_poly()


def el(text, ctx=Z):
    return parse_element(text, ctx)


# -- phi(t) --------------------------------------------------------------------------


def test_phi_int_shape():
    f = build_phi_int()
    assert isinstance(f, Exists) and f.var == "y"
    inner = f.body
    assert isinstance(inner, Exists) and inner.var == "w" and inner.exhaustive is True
    assert isinstance(inner.body, And) and len(inner.body.parts) == 5


def test_phi_int_hint():
    f = build_phi_int(bound=16)
    env = standard_environment(Z).bind("t", Z.constant(3))
    assert f.hint(env) == [power(Z.x(), 3)]
    assert f.hint(env.bind("t", Z.x())) == []
    assert f.hint(env.bind("t", Z.constant(40))) == []


def test_phi_int_quantum_plane_left_sided():
    f = build_phi_int()
    body = f.body.body
    assert all(p.side is Side.LEFT for p in body.parts if isinstance(p, Divides))
    assert f.body.domain.side is Side.LEFT


def test_natural_formula_verdicts():
    env = standard_environment(QX, FragmentSpec(QX, 1, 1), bound=8)
    f = build_natural_formula(8)
    assert isinstance(eval_formula(f, env.bind("t", QX.constant(5))), ProvenTrue)
    assert eval_formula(f, env.bind("t", el("1/2", QX))) == ProvenFalse()
    assert eval_formula(f, env.bind("t", QX.x())) == ProvenFalse()
    assert isinstance(eval_formula(f, env.bind("t", QX.constant(9))), UnknownUpTo)
    v = eval_formula(build_phi_int(bound=8), env.bind("t", QX.constant(5)))
    assert v.as_dict() == {"y": power(QX.x(), 5), "w": el("x^4+x^3+x^2+x+1", QX)}


def test_phi_int_in_quantum_plane():
    q = qplane(2)
    env = standard_environment(q, FragmentSpec(q, (1, 1), 1, CoefficientDomain.INTEGER), bound=6)
    f = build_natural_formula(6)
    assert isinstance(eval_formula(f, env.bind("t", q.constant(4))), ProvenTrue)
    assert eval_formula(f, env.bind("t", el("x*y", q))) == ProvenFalse()
    assert eval_formula(f, env.bind("t", el("-2", q))) == ProvenFalse()


# -- semantic deciders ----------------------------------------------------------------


def test_decide_natural_examples():
    assert decide_natural_semantic(QX.zero(), 8) == Decision(True, 0)
    assert decide_natural_semantic(QX.constant(5), 8) == Decision(True, 5)
    assert decide_natural_semantic(el("1/2", QX), 8) == Decision(False)
    assert not decide_natural_semantic(QX.constant(-2), 8).member


def test_half_fails_through_divisibility():
    # cross-check: for each n, (x-1) does not divide w - 1/2
    x, one = QX.x(), QX.one()
    for n in range(2, 9):
        w = divide_exact(power(x, n) - one, x - one).quotient
        assert not divide_exact(w - el("1/2", QX), x - one).divides


def test_bound_too_small_warns():
    with pytest.warns(BoundTooSmall):
        assert not decide_natural_semantic(QX.constant(9), 8).member
    with warnings.catch_warnings():
        warnings.simplefilter("error")
        decide_natural_semantic(QX.constant(8), 8)


def test_decide_integer_examples():
    assert decide_integer_semantic(QX.constant(-3), 8)
    assert not decide_integer_semantic(QX.x(), 8)
    assert decide_integer_semantic(QX.zero(), 8)


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
def test_theorem_soundness_on_small_fragments(ctx):
    if ctx.variables == ("x", "y"):
        spec = FragmentSpec(ctx, (1, 1), 1, CoefficientDomain.INTEGER)
    else:
        spec = FragmentSpec(ctx, 2, 1 if ctx.coeffs is CoefficientDomain.GAUSSIAN else 2)
    env = standard_environment(ctx, spec, bound=6)
    assert check_hypotheses(env, ctx.x(), "A", spec, 6).all_hold
    formula = build_natural_formula(6)
    for t in spec:
        rec = classify(t, env, 6, formula)
        assert rec.agrees, t


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
def test_unique_w(ctx):
    x, one = ctx.x(), ctx.one()
    spec = FragmentSpec(ctx, (3, 0) if ctx.variables == ("x", "y") else 3, 1)
    for n in (2, 3, 4):
        y = power(x, n)
        sols = [w for w in spec if y - one == (x - one) * w]
        assert len(sols) == 1
        assert sols[0] == geometric_sum(x, n)


# -- hypotheses -------------------------------------------------------------------------


def test_hypotheses_hold():
    for ctx, deg in [(Z, 2), (qplane(2), (2, 2))]:
        scalars = CoefficientDomain.INTEGER if ctx.variables == ("x", "y") else None
        spec = FragmentSpec(ctx, deg, 2 if scalars is None else 1, scalars)
        env = standard_environment(ctx, spec)
        report = check_hypotheses(env, ctx.x(), "A", spec, 16)
        assert report.all_hold
        assert {o.status for o in report.outcomes.values()} == {"checked-up-to"}


def test_degenerate_p_violates_annihilation():
    spec = FragmentSpec(Z, 0, 2)
    env = standard_environment(Z, spec, p=Z.constant(2))
    report = check_hypotheses(env, Z.constant(2), "A", spec, 16)
    assert not report.all_hold
    out = report.outcomes["A-annihilation"]
    assert out.status == "violated" and not out.counterexample.is_zero()
    assert report.outcomes["p-1-not-zero-divisor"].ok


def test_violations_carry_counterexamples():
    spec = FragmentSpec(Z, 1, 1)
    # p = 1: p - 1 = 0 is a zero divisor and powers repeat
    env = standard_environment(Z, spec, p=Z.constant(-1))
    report = check_hypotheses(env, Z.constant(-1), "A", spec, 4)
    assert report.outcomes["powers-distinct"].status == "violated"
    assert report.outcomes["powers-distinct"].counterexample is not None
    # nonnegative constants: 1 - 2 escapes the set once the fragment holds 2
    spec = FragmentSpec(Z, 1, 2)
    env = Environment(Z, spec).with_params(p=Z.x())
    from definable.formula import register_set

    env = register_set(env, "B", lambda z: z.is_constant() and z.constant_value() >= 0)
    report = check_hypotheses(env, Z.x(), "B", spec, 4)
    out = report.outcomes["A-closure-n-minus-a"]
    assert out.status == "violated" and out.counterexample == Z.constant(2)
    for o in report.outcomes.values():
        if o.status == "violated":
            assert o.counterexample is not None


# -- identities --------------------------------------------------------------------------


def test_geometric_examples():
    assert geometric_sum(Z.x(), 3) == el("x^2+x+1")
    assert verify_geometric_identity(Z, Z.x(), 3)
    assert verify_geometric_identity(Z, Z.x(), 1)
    q = qplane(el("i", gauss_poly()).constant_value())
    assert verify_geometric_identity(q, q.x(), 4)
    with pytest.raises(ValueError):
        verify_geometric_identity(Z, Z.x(), 0)


def test_telescoping_examples():
    assert telescoping_cofactor(Z.x(), 2) == Z.one()
    assert verify_telescoping_identity(Z, Z.x(), 2, el("7"))
    assert verify_telescoping_identity(Z, Z.x(), 5, el("x^2+1"))
    q = qplane(2)
    assert verify_telescoping_identity(q, q.x(), 4, el("x*y", q))
    with pytest.raises(ValueError):
        verify_telescoping_identity(Z, Z.x(), 1, Z.one())


@given(n=st.integers(2, 12), point=st.fractions(min_value=-3, max_value=3, max_denominator=5))
def test_telescoping_cofactor_by_evaluation(n, point):
    # independent oracle: evaluate both sides at a rational point
    x = QX.x()
    w = geometric_sum(x, n)
    c = telescoping_cofactor(x, n)
    lhs = eval_at(w, point)[0]
    rhs = eval_at(c, point)[0] * (point - 1) + n
    assert lhs == rhs
    assert lhs == sum(Fraction(point) ** i for i in range(n))


@pytest.mark.parametrize("ctx", CONTEXTS, ids=lambda c: c.name)
@given(data=st.data())
def test_telescoping_any_t(ctx, data):
    t = data.draw(elements(ctx))
    n = data.draw(st.integers(2, 10))
    assert verify_telescoping_identity(ctx, ctx.x(), n, t)


# -- constants and POW(x) ---------------------------------------------------------------------


def test_constants_examples():
    assert constants_membership(Z.constant(7))
    assert not constants_membership(Z.x())
    f = build_constants_formula()
    for ctx in (QX, gauss_poly()):
        env = Environment(ctx)
        for z in FragmentSpec(ctx, 1, 1):
            v = eval_formula(f, env.bind("z", z))
            assert isinstance(v, ProvenTrue) == constants_membership(z)


def test_constants_formula_needs_a_field():
    # in Z[x] the formula misses 2
    v = eval_formula(build_constants_formula(), Environment(Z).bind("z", Z.constant(2)))
    assert v == ProvenFalse()


def test_phi_pow_shape_and_examples():
    f = build_phi_pow(RingFragment(1, 2))
    assert isinstance(f, And) and isinstance(f.parts[0], Forall) and isinstance(f.parts[1], Divides)
    env = Environment(Z, FragmentSpec(Z, 1, 2))
    v = eval_formula(f.parts[0], env.bind("t", el("2*x")))
    assert isinstance(v, ProvenFalse) and v.as_dict()["d"] == el("-2")
    assert isinstance(eval_formula(f, env.bind("t", Z.x())), UnknownUpTo)
    env = Environment(QX, FragmentSpec(QX, 1, 1))
    assert isinstance(eval_formula(f, env.bind("t", QX.constant(3))), ProvenFalse)


def test_decompose_power():
    assert decompose_power(el("x^2")) == (Z.one(), 2)
    assert decompose_power(el("3", QX)) == (QX.constant(3), 0)
    assert decompose_power(el("2*x^3+x^2")) == (el("2*x+1"), 2)
    assert decompose_power(Z.zero()) is None


def test_syntactic_oracle():
    assert syntactic_power_exponent(el("x^3")) == 3
    assert syntactic_power_exponent(Z.one()) is None
    assert syntactic_power_exponent(el("2*x")) is None
    assert syntactic_power_exponent(el("x^2", qplane(2))) == 2
    assert syntactic_power_exponent(el("x*y", qplane(2))) is None


def test_pow_characterization_small():
    report = pow_characterization_check(Z, FragmentSpec(Z, 2, 1), FragmentSpec(Z, 3, 2))
    assert report.ok
    assert report.members == 2
    assert report.checked == 27
    with pytest.raises(ValueError):
        pow_characterization_check(qplane(2), FragmentSpec(qplane(2), (1, 1), 1), FragmentSpec(qplane(2), (1, 1), 1))
