"""Definitions of N, Z and POW(p) inside the supported rings, and their checks.

With ``A`` the constants and ``p = x``, a ring element ``t`` is a natural
number iff ``t = 0``, ``t = 1`` or

    phi(t):  exists y, w.  y in POW(p) & p^2 | y & y - 1 = (p-1)*w
                           & t in A & (p-1) | (w - t).

The powers of ``x`` are in turn described by

    forall d. (!(d | 1) & d | t) -> x | d,   together with   (x-1) | (t-1).

Divisibility is divisor-on-the-left everywhere, which is what the quantum
plane requires; in the commutative rings the side is immaterial.
"""

from __future__ import annotations

import warnings
from dataclasses import dataclass, field
from typing import NamedTuple

from .divisibility import (
    FragmentCheck,
    Side,
    compose,
    divide_exact,
    is_power_of,
    is_unit,
    not_zero_divisor_brute,
)
from .enumeration import FragmentSpec, enumerate_fragment
from .formula.ast import (
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    FoFormula,
    Implies,
    InSet,
    IntLit,
    Mul,
    Not,
    Or,
    Param,
    Pow,
    PowersOfParam,
    Quotient,
    RingFragment,
    Sub,
    Var,
)
from .formula.evaluate import (
    Environment,
    ProvenFalse,
    ProvenTrue,
    UnknownUpTo,
    Verdict,
    eval_formula,
    register_set,
)
from .numerics import is_rational_integer
from .rings import RingContext, RingElement, RingKind, power

DEFAULT_BOUND = 16


class BoundTooSmall(UserWarning):
    """The search bound is below the integer being classified."""


# -- the constants set A -------------------------------------------------------


def constants_membership(z: RingElement) -> bool:
    return z.is_constant()


def build_constants_formula(var: str = "z") -> FoFormula:
    """``z = 0 | z | 1``: the constants, valid when coefficients form a field."""
    z = Var(var)
    return Or(Eq(z, IntLit(0)), Divides(z, IntLit(1)))


def _constant_members(spec: FragmentSpec):
    return enumerate_fragment(spec.constants())


def integer_value(t: RingElement) -> int | None:
    """The rational integer ``t`` stands for, if any."""
    if not t.is_constant():
        return None
    ok, n = is_rational_integer(t.constant_value())
    return n if ok else None


def standard_environment(
    ctx: RingContext,
    fragment: FragmentSpec | None = None,
    bound: int = DEFAULT_BOUND,
    p: RingElement | None = None,
) -> Environment:
    """Environment with ``p`` bound and the sets ``A`` (constants) and ``POW``."""
    p = ctx.x() if p is None else p
    env = Environment(ctx, fragment).with_params(p=p)
    formula = build_constants_formula() if ctx.coeffs.is_field() else None
    env = register_set(env, "A", constants_membership, formula, members=_constant_members)
    return register_set(env, "POW", lambda z: is_power_of(z, p, bound) is not None)


# -- formula builders ----------------------------------------------------------------


def build_phi_int(
    p_name: str = "p",
    a_name: str = "A",
    pow_name: str = "POW",
    bound: int = DEFAULT_BOUND,
    t_name: str = "t",
    side: Side = Side.LEFT,
) -> FoFormula:
    """phi(t) as an AST: ``exists y. exists w. <five conjuncts>``.

    The y-quantifier runs over ``p^1..p^bound`` and is seeded with ``y = p^t``
    when ``t`` is an integer in ``[2, bound]``.  It counts as exhaustive unless
    ``t`` is an integer above the bound: a witness needs ``(p-1) | (n - t)``
    for ``y = p^n``, and since ``n - t`` is a constant this forces ``n = t``
    (the annihilation hypothesis), so no witness can hide outside the domain.
    The w-quantifier ranges over the exact quotient of ``y - 1`` by ``p - 1``,
    the only possible solution because ``p - 1`` is not a zero divisor.
    """
    p, t, y, w = Param(p_name), Var(t_name), Var("y"), Var("w")
    one = IntLit(1)
    pm1 = Sub(p, one)
    product = Mul(pm1, w) if side is Side.LEFT else Mul(w, pm1)
    body = And(
        InSet(pow_name, y),
        Divides(Pow(p, 2), y, side),
        Eq(Sub(y, one), product),
        InSet(a_name, t),
        Divides(pm1, Sub(w, t), side),
    )

    def hint(env: Environment):
        n = integer_value(env.lookup(t_name))
        if n is not None and 2 <= n <= bound:
            return [power(env.lookup(p_name), n)]
        return []

    def exhaustive(env: Environment) -> bool:
        n = integer_value(env.lookup(t_name))
        return n is None or n <= bound

    inner = Exists("w", Quotient(Sub(y, one), pm1, side), body, exhaustive=True)
    return Exists("y", PowersOfParam(p_name, bound), inner, hint=hint, exhaustive=exhaustive)


def build_natural_formula(bound: int = DEFAULT_BOUND, t_name: str = "t", **kw) -> FoFormula:
    """``t = 0 | t = 1 | phi(t)``."""
    t = Var(t_name)
    return Or(Eq(t, IntLit(0)), Eq(t, IntLit(1)), build_phi_int(bound=bound, t_name=t_name, **kw))


def build_phi_pow(
    divisors: RingFragment = RingFragment(),
    x_name: str = "x",
    t_name: str = "t",
    side: Side = Side.LEFT,
) -> FoFormula:
    """``(forall d. (!(d|1) & d|t) -> x|d) & (x-1) | (t-1)``.

    The universal quantifier is bounded and never exhaustive, so true powers
    come out as UnknownUpTo, never ProvenTrue.
    """
    d, t, x, one = Var("d"), Var(t_name), Param(x_name), IntLit(1)

    def restrict(env: Environment, spec: FragmentSpec) -> FragmentSpec:
        # In a univariate domain d | t with t != 0 forces deg d <= deg t, so
        # higher-degree d fail the antecedent and satisfy the body.
        target = env.lookup(t_name)
        if env.ctx.kind is not RingKind.UNIVARIATE or target.is_zero() or target.degree >= spec.degree:
            return spec
        return spec.with_degree(target.degree)

    divisor_condition = Forall(
        "d",
        divisors,
        Implies(And(Not(Divides(d, one, side)), Divides(d, t, side)), Divides(x, d, side)),
        restrict=restrict,
    )
    return And(divisor_condition, Divides(Sub(x, one), Sub(t, one), side))


# -- semantic deciders ----------------------------------------------------------------


class Decision(NamedTuple):
    member: bool
    witness: int | None = None


def decide_natural_semantic(t: RingElement, bound: int = DEFAULT_BOUND, p: RingElement | None = None) -> Decision:
    """Decide ``t = 0 | t = 1 | phi(t)`` by direct computation.

    Complete on naturals only when ``bound`` is at least the value of ``t``;
    otherwise a :class:`BoundTooSmall` warning is issued.
    """
    ctx = t.ctx
    p = ctx.x() if p is None else p
    if t.is_zero():
        return Decision(True, 0)
    if t == ctx.one():
        return Decision(True, 1)
    n_t = integer_value(t)
    if n_t is not None and n_t > bound:
        warnings.warn(f"bound {bound} is below {n_t}", BoundTooSmall, stacklevel=2)
    if not constants_membership(t):
        return Decision(False)
    pm1 = p - ctx.one()
    for n in range(2, bound + 1):
        y = power(p, n)
        w = divide_exact(y - ctx.one(), pm1, Side.LEFT).quotient
        if divide_exact(w - t, pm1, Side.LEFT).divides:
            return Decision(True, n)
    return Decision(False)


def decide_integer_semantic(t: RingElement, bound: int = DEFAULT_BOUND, p: RingElement | None = None) -> bool:
    return decide_natural_semantic(t, bound, p).member or decide_natural_semantic(-t, bound, p).member


# -- hypotheses ------------------------------------------------------------------------


@dataclass(frozen=True)
class Outcome:
    status: str  # "holds" | "violated" | "checked-up-to"
    counterexample: RingElement | None = None
    bounds: str = ""
    detail: str = ""

    @property
    def ok(self) -> bool:
        return self.status != "violated"

    def to_json(self) -> dict:
        out = {"status": self.status}
        if self.bounds:
            out["bounds"] = self.bounds
        if self.counterexample is not None:
            out["counterexample"] = str(self.counterexample)
        if self.detail:
            out["detail"] = self.detail
        return out


@dataclass(frozen=True)
class HypothesisReport:
    outcomes: dict = field(default_factory=dict)

    @property
    def all_hold(self) -> bool:
        return all(o.ok for o in self.outcomes.values())

    def to_json(self) -> dict:
        return {name: o.to_json() for name, o in self.outcomes.items()}


def _violated(counterexample, detail="") -> Outcome:
    return Outcome("violated", counterexample, detail=detail)


def check_hypotheses(
    env: Environment,
    p: RingElement,
    a_name: str,
    fragment: FragmentSpec,
    bound: int = DEFAULT_BOUND,
    method: str = "auto",
) -> HypothesisReport:
    """Check the four hypotheses on ``p`` and the set ``a_name`` over a fragment."""
    ctx = env.ctx
    entry = env.sets[a_name]
    one = ctx.one()
    pm1 = p - one
    out = {}

    seen = {}
    dup = None
    for i in range(1, bound + 1):
        pi = power(p, i)
        if pi in seen:
            dup = (seen[pi], i, pi)
            break
        seen[pi] = i
    out["powers-distinct"] = (
        _violated(dup[2], f"p^{dup[0]} = p^{dup[1]}") if dup else Outcome("checked-up-to", bounds=f"n <= {bound}")
    )

    if pm1.is_zero():
        g = next(e for e in enumerate_fragment(fragment) if not e.is_zero())
        out["p-1-not-zero-divisor"] = _violated(g, "p - 1 = 0")
    else:
        chk: FragmentCheck = not_zero_divisor_brute(pm1, fragment, method)
        out["p-1-not-zero-divisor"] = (
            Outcome("checked-up-to", bounds=fragment.label())
            if chk.holds
            else _violated(chk.counterexample, chk.detail)
        )

    members = list(entry.members(fragment) if entry.members else (e for e in fragment if entry.decider(e)))
    a_bounds = f"{a_name} within {fragment.label()}"
    bad = None
    if not pm1.is_zero():
        bad = next((a for a in members if not a.is_zero() and divide_exact(a, pm1, Side.LEFT).divides), None)
    out["A-annihilation"] = (
        _violated(bad, "(p-1) | a with a != 0") if bad is not None else Outcome("checked-up-to", bounds=a_bounds)
    )

    bad = None
    for a in members:
        n = next((n for n in range(1, bound + 1) if not entry.decider(ctx.constant(n) - a)), None)
        if n is not None:
            bad = (a, n)
            break
    out["A-closure-n-minus-a"] = (
        _violated(bad[0], f"{bad[1]} - a not in {a_name}")
        if bad
        else Outcome("checked-up-to", bounds=f"{a_bounds}, 1 <= n <= {bound}")
    )
    return HypothesisReport(out)


# -- identities ------------------------------------------------------------------------


def geometric_sum(p: RingElement, n: int) -> RingElement:
    """``p^(n-1) + ... + p + 1``."""
    total, term = p.ctx.zero(), p.ctx.one()
    for _ in range(n):
        total = total + term
        term = term * p
    return total


def verify_geometric_identity(ctx: RingContext, p: RingElement, n: int) -> bool:
    """Check ``p^n - 1`` against both ``S*(p-1)`` and ``(p-1)*S``."""
    if n < 1:
        raise ValueError("n must be at least 1")
    one = ctx.one()
    target = power(p, n) - one
    s = geometric_sum(p, n)
    return s * (p - one) == target and (p - one) * s == target


def telescoping_cofactor(p: RingElement, n: int) -> RingElement:
    """``p^(n-2) + 2p^(n-3) + ... + (n-1)``."""
    ctx = p.ctx
    total, term = ctx.zero(), ctx.one()
    for i in range(n - 1):
        total = total + ctx.constant(n - 1 - i) * term
        term = term * p
    return total


def verify_telescoping_identity(ctx: RingContext, p: RingElement, n: int, t: RingElement) -> bool:
    """Check ``w - t = c*(p-1) + n - t`` with ``w`` the geometric sum.

    Noncommutative rings use the left-factored form ``(p-1)*c``.
    """
    if n < 2:
        raise ValueError("n must be at least 2")
    one = ctx.one()
    w = geometric_sum(p, n)
    c = telescoping_cofactor(p, n)
    side = Side.RIGHT if ctx.commutative else Side.LEFT
    rhs = compose(p - one, c, side) + ctx.constant(n) - t
    return w - t == rhs


# -- POW(x) characterization ---------------------------------------------------------


def decompose_power(z: RingElement) -> tuple[RingElement, int] | None:
    """Write ``z = a*x^n`` with ``x`` not dividing ``a``; None for ``z = 0``.

    Terminates because each division lowers the degree.
    """
    if z.is_zero():
        return None
    x = z.ctx.x()
    n, cur = 0, z
    while True:
        out = divide_exact(cur, x, Side.LEFT)
        if not out.divides:
            return cur, n
        cur, n = out.quotient, n + 1


def syntactic_power_exponent(z: RingElement) -> int | None:
    """``n >= 1`` when the coefficients of ``z`` are exactly those of ``x^n``."""
    mono = z.monomials()
    if len(mono) != 1:
        return None
    (exp, c), = mono.items()
    if c != 1:
        return None
    n = exp if isinstance(exp, int) else (exp[0] if exp[1] == 0 else 0)
    return n if n >= 1 else None


@dataclass
class PowReport:
    checked: int = 0
    members: int = 0
    non_members: int = 0
    proven_false_non_members: int = 0
    unknown: int = 0
    semantic_mismatches: list = field(default_factory=list)
    contradictions: list = field(default_factory=list)

    @property
    def ok(self) -> bool:
        return not self.semantic_mismatches and not self.contradictions

    @property
    def coverage(self) -> float:
        return self.proven_false_non_members / self.non_members if self.non_members else 1.0

    def to_json(self) -> dict:
        return {
            "checked": self.checked,
            "members": self.members,
            "non_members": self.non_members,
            "proven_false_non_members": self.proven_false_non_members,
            "unknown": self.unknown,
            "coverage": f"{self.proven_false_non_members}/{self.non_members}",
            "semantic_mismatches": [str(z) for z in self.semantic_mismatches],
            "contradictions": [{"element": str(z), "reason": r} for z, r in self.contradictions],
        }


def _kleene_and(a: Verdict, b: Verdict) -> Verdict:
    if isinstance(a, ProvenFalse):
        return a
    if isinstance(b, ProvenFalse):
        return b
    if isinstance(a, ProvenTrue) and isinstance(b, ProvenTrue):
        return ProvenTrue(a.witnesses + b.witnesses)
    bounds = (a.bounds if isinstance(a, UnknownUpTo) else ()) + (b.bounds if isinstance(b, UnknownUpTo) else ())
    return UnknownUpTo(tuple(dict.fromkeys(bounds)))


def pow_characterization_check(
    ctx: RingContext,
    fragment: FragmentSpec,
    divisor_fragment: FragmentSpec,
    bound: int | None = None,
) -> PowReport:
    """Compare the bounded POW(x) formula with exact power membership.

    For each ``z``: decompose ``z = a*x^n``; evaluate the divisor condition
    over ``divisor_fragment``; flag a contradiction if it is ProvenFalse while
    ``a`` is a unit, or ProvenTrue at all; then compare the whole formula's
    verdict with exact membership in ``{x^n : n >= 1}``.
    """
    if not ctx.commutative:
        raise ValueError("the POW(x) characterization is for commutative rings")
    if bound is None:
        bound = max(fragment.degree, 1)
    phi = build_phi_pow(RingFragment(divisor_fragment.degree, divisor_fragment.height))
    divisor_part, shift_part = phi.parts
    env = Environment(ctx, divisor_fragment)
    report = PowReport()
    x = ctx.x()
    for z in enumerate_fragment(fragment):
        report.checked += 1
        member = is_power_of(z, x, bound) is not None
        if (syntactic_power_exponent(z) is not None) != member:
            report.semantic_mismatches.append(z)
        zenv = env.bind("t", z)
        shift_v = eval_formula(shift_part, zenv)
        div_v = eval_formula(divisor_part, zenv)
        decomposition = decompose_power(z)
        if isinstance(div_v, ProvenTrue):
            report.contradictions.append((z, "bounded divisor condition claimed ProvenTrue"))
        if isinstance(div_v, ProvenFalse) and decomposition is not None and is_unit(decomposition[0]):
            report.contradictions.append((z, "divisor condition refuted on a unit times a power of x"))
        verdict = _kleene_and(div_v, shift_v)
        if member:
            report.members += 1
            if isinstance(verdict, ProvenFalse):
                report.contradictions.append((z, "formula ProvenFalse on a power of x"))
        else:
            report.non_members += 1
            if isinstance(verdict, ProvenFalse):
                report.proven_false_non_members += 1
            elif isinstance(verdict, ProvenTrue):
                report.contradictions.append((z, "formula ProvenTrue on a non-power"))
        if isinstance(verdict, UnknownUpTo):
            report.unknown += 1
    return report


# -- classification ------------------------------------------------------------------------


@dataclass(frozen=True)
class ClassificationRecord:
    element: RingElement
    ground_truth_natural: bool
    semantic_natural: bool
    witness: int | None
    formula_verdict: Verdict
    ground_truth_integer: bool
    semantic_integer: bool

    @property
    def formula_consistent(self) -> bool:
        v = self.formula_verdict
        if isinstance(v, ProvenTrue):
            return self.semantic_natural
        if isinstance(v, ProvenFalse):
            return not self.semantic_natural
        return True

    @property
    def agrees(self) -> bool:
        return (
            self.ground_truth_natural == self.semantic_natural
            and self.ground_truth_integer == self.semantic_integer
            and self.formula_consistent
        )


def classify(t: RingElement, env: Environment, bound: int = DEFAULT_BOUND, formula: FoFormula | None = None) -> ClassificationRecord:
    """Classify ``t`` by ground truth, the semantic decider and the formula."""
    n = integer_value(t)
    p = env.lookup("p")
    with warnings.catch_warnings():
        warnings.simplefilter("ignore", BoundTooSmall)
        decision = decide_natural_semantic(t, bound, p)
        integer = decision.member or decide_natural_semantic(-t, bound, p).member
    formula = build_natural_formula(bound) if formula is None else formula
    verdict = eval_formula(formula, env.bind("t", t))
    return ClassificationRecord(
        element=t,
        ground_truth_natural=n is not None and 0 <= n <= bound,
        semantic_natural=decision.member,
        witness=decision.witness,
        formula_verdict=verdict,
        ground_truth_integer=n is not None and abs(n) <= bound,
        semantic_integer=integer,
    )
