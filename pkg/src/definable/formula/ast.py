"""First-order formulas over the ring language, with bounded quantifiers."""

from __future__ import annotations

from dataclasses import dataclass, field
from typing import Callable, Iterable, Union

from ..divisibility import Side

# -- terms -------------------------------------------------------------------


@dataclass(frozen=True)
class Var:
    name: str


@dataclass(frozen=True)
class Param:
    """A named parameter such as ``p``, or a ring generator ``x``/``y``."""

    name: str


@dataclass(frozen=True)
class IntLit:
    value: int


@dataclass(frozen=True)
class Add:
    left: "FoTerm"
    right: "FoTerm"


@dataclass(frozen=True)
class Sub:
    left: "FoTerm"
    right: "FoTerm"


@dataclass(frozen=True)
class Mul:
    left: "FoTerm"
    right: "FoTerm"


@dataclass(frozen=True)
class Neg:
    operand: "FoTerm"


@dataclass(frozen=True)
class Pow:
    base: "FoTerm"
    exponent: int

    def __post_init__(self):
        if self.exponent < 0:
            raise ValueError("exponents must be nonnegative")


FoTerm = Union[Var, Param, IntLit, Add, Sub, Mul, Neg, Pow]

# -- atoms -------------------------------------------------------------------


@dataclass(frozen=True)
class Eq:
    left: FoTerm
    right: FoTerm


@dataclass(frozen=True)
class Divides:
    divisor: FoTerm
    dividend: FoTerm
    side: Side = Side.LEFT


@dataclass(frozen=True)
class InSet:
    set_name: str
    term: FoTerm


# -- quantifier domains --------------------------------------------------------


@dataclass(frozen=True)
class RingFragment:
    """Fragment of the ambient ring; ``None`` fields fall back to the environment."""

    degree: int | tuple[int, int] | None = None
    height: int | None = None


@dataclass(frozen=True)
class PowersOfParam:
    param: str
    max_exp: int


@dataclass(frozen=True)
class NamedSet:
    set_name: str
    fragment: RingFragment = RingFragment()


@dataclass(frozen=True)
class Quotient:
    """All ``w`` with ``dividend = divisor*w`` (left) or ``w*divisor`` (right).

    At most one element in a domain, so this domain is always complete.
    """

    dividend: FoTerm
    divisor: FoTerm
    side: Side = Side.LEFT


DomainSpec = Union[RingFragment, PowersOfParam, NamedSet, Quotient]

# -- formulas ------------------------------------------------------------------


@dataclass(frozen=True)
class Not:
    body: "FoFormula"


@dataclass(frozen=True)
class And:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Or:
    parts: tuple

    def __init__(self, *parts):
        object.__setattr__(self, "parts", tuple(parts))


@dataclass(frozen=True)
class Implies:
    antecedent: "FoFormula"
    consequent: "FoFormula"


# Hints map the environment to candidate witnesses tried before the domain.
WitnessHint = Callable[["object"], Iterable]
# ``exhaustive`` may be a bool or a predicate on the environment.
Exhaustive = Union[bool, Callable[["object"], bool]]


@dataclass(frozen=True)
class Exists:
    var: str
    domain: DomainSpec
    body: "FoFormula"
    hint: WitnessHint | None = field(default=None, compare=False)
    exhaustive: Exhaustive = field(default=False, compare=False)


# A restriction maps (environment, fragment) to a sub-fragment whose canonical
# order is a subsequence of the original; the body must be known to hold on
# every element left out, so the verdict is unchanged.
Restriction = Callable[["object", "object"], "object"]


@dataclass(frozen=True)
class Forall:
    var: str
    domain: DomainSpec
    body: "FoFormula"
    exhaustive: Exhaustive = field(default=False, compare=False)
    restrict: Restriction | None = field(default=None, compare=False)


FoAtom = Union[Eq, Divides, InSet]
FoFormula = Union[Eq, Divides, InSet, Not, And, Or, Implies, Exists, Forall]


def conj(*parts) -> "FoFormula":
    return parts[0] if len(parts) == 1 else And(*parts)


# -- free names ---------------------------------------------------------------


def term_names(t: FoTerm) -> set[str]:
    if isinstance(t, (Var, Param)):
        return {t.name}
    if isinstance(t, IntLit):
        return set()
    if isinstance(t, (Neg,)):
        return term_names(t.operand)
    if isinstance(t, Pow):
        return term_names(t.base)
    return term_names(t.left) | term_names(t.right)


def _domain_names(d: DomainSpec) -> set[str]:
    if isinstance(d, PowersOfParam):
        return {d.param}
    if isinstance(d, Quotient):
        return term_names(d.dividend) | term_names(d.divisor)
    return set()


def free_names(f: FoFormula) -> set[str]:
    """Names a formula needs from its environment (generators included)."""
    if isinstance(f, Eq):
        return term_names(f.left) | term_names(f.right)
    if isinstance(f, Divides):
        return term_names(f.divisor) | term_names(f.dividend)
    if isinstance(f, InSet):
        return term_names(f.term)
    if isinstance(f, Not):
        return free_names(f.body)
    if isinstance(f, (And, Or)):
        return set().union(*(free_names(p) for p in f.parts))
    if isinstance(f, Implies):
        return free_names(f.antecedent) | free_names(f.consequent)
    if isinstance(f, (Exists, Forall)):
        return _domain_names(f.domain) | (free_names(f.body) - {f.var})
    raise TypeError(f"not a formula: {f!r}")


# -- display ----------------------------------------------------------------------

_TERM_PREC = {Add: 1, Sub: 1, Mul: 2, Neg: 3, Pow: 4}


def format_term(t: FoTerm, prec: int = 0) -> str:
    if isinstance(t, (Var, Param)):
        return t.name
    if isinstance(t, IntLit):
        s = str(t.value)
        return f"({s})" if t.value < 0 else s
    p = _TERM_PREC[type(t)]
    if isinstance(t, Neg):
        s = f"-{format_term(t.operand, 4)}"
    elif isinstance(t, Pow):
        s = f"{format_term(t.base, 5)}^{t.exponent}"
    else:
        op = {Add: " + ", Sub: " - ", Mul: "*"}[type(t)]
        # right operand binds one level tighter: a - (b - c)
        s = f"{format_term(t.left, p)}{op}{format_term(t.right, p + 1)}"
    return f"({s})" if p < prec else s


def _format_fragment(d: RingFragment) -> str:
    if d.degree is None and d.height is None:
        return ""
    deg = d.degree if isinstance(d.degree, tuple) else (d.degree,)
    return "(" + ",".join(str(v) for v in (*deg, d.height)) + ")"


def format_domain(d: DomainSpec) -> str:
    if isinstance(d, RingFragment):
        return "frag" + _format_fragment(d)
    if isinstance(d, PowersOfParam):
        return f"pow({d.param},{d.max_exp})"
    if isinstance(d, NamedSet):
        return d.set_name + _format_fragment(d.fragment)
    name = "quot" if d.side is Side.LEFT else "quotR"
    return f"{name}({format_term(d.dividend)}, {format_term(d.divisor)})"


_FORM_PREC = {Implies: 1, Or: 2, And: 3}


def format_formula(f: FoFormula, prec: int = 0) -> str:
    if isinstance(f, Eq):
        s = f"{format_term(f.left)} = {format_term(f.right)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Divides):
        bar = "|" if f.side is Side.LEFT else "|R"
        s = f"{format_term(f.divisor, 2)} {bar} {format_term(f.dividend, 2)}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, InSet):
        s = f"{format_term(f.term)} in {f.set_name}"
        return f"({s})" if prec > 0 else s
    if isinstance(f, Not):
        return f"!{format_formula(f.body, 4)}"
    if isinstance(f, (Exists, Forall)):
        q = "exists" if isinstance(f, Exists) else "forall"
        ex = " exhaustive" if f.exhaustive is True else ""
        s = f"{q} {f.var} in {format_domain(f.domain)}{ex}. {format_formula(f.body)}"
        return f"({s})" if prec > 0 else s
    p = _FORM_PREC[type(f)]
    if isinstance(f, Implies):
        s = f"{format_formula(f.antecedent, p + 1)} -> {format_formula(f.consequent, p)}"
    else:
        op = " | " if isinstance(f, Or) else " & "
        s = op.join(format_formula(part, p + 1) for part in f.parts)
    return f"({s})" if p < prec else s
