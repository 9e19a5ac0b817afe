"""Three-valued evaluation of bounded first-order formulas.

Atoms are decided exactly.  Quantifiers range over finite domains; running
out of candidates only settles an existential as false (or a universal as
true) when the domain is known to be complete, otherwise the verdict is
:class:`UnknownUpTo` with the bounds that were searched.  Connectives follow
strong Kleene logic.
"""

from __future__ import annotations

from dataclasses import dataclass, field, replace
from functools import lru_cache
from itertools import chain
from typing import Callable, Iterable, Mapping, Union

from ..divisibility import divide_exact
from ..enumeration import FragmentSpec, enumerate_fragment
from ..rings import ContextMismatch, RingContext, RingElement, embed_integer, power
from .ast import (
    Add,
    And,
    Divides,
    Eq,
    Exists,
    Forall,
    FoFormula,
    FoTerm,
    Implies,
    InSet,
    IntLit,
    Mul,
    NamedSet,
    Neg,
    Not,
    Or,
    Param,
    Pow,
    PowersOfParam,
    Quotient,
    RingFragment,
    Sub,
    Var,
    format_domain,
)


class UnboundName(NameError):
    pass


class UnknownSetName(KeyError):
    pass


class DuplicateSetName(ValueError):
    pass


# -- verdicts -----------------------------------------------------------------

Bindings = tuple  # ((name, element), ...)


@dataclass(frozen=True)
class ProvenTrue:
    witnesses: Bindings = ()

    def as_dict(self) -> dict:
        return dict(self.witnesses)


@dataclass(frozen=True)
class ProvenFalse:
    counterexample: Bindings = ()

    def as_dict(self) -> dict:
        return dict(self.counterexample)


@dataclass(frozen=True)
class UnknownUpTo:
    bounds: tuple = ()


Verdict = Union[ProvenTrue, ProvenFalse, UnknownUpTo]


def _merge_bounds(*groups: Iterable[str]) -> tuple:
    return tuple(dict.fromkeys(chain(*groups)))


def negate(v: Verdict) -> Verdict:
    if isinstance(v, ProvenTrue):
        return ProvenFalse(v.witnesses)
    if isinstance(v, ProvenFalse):
        return ProvenTrue(v.counterexample)
    return v


def verdict_to_json(v: Verdict) -> dict:
    if isinstance(v, ProvenTrue):
        return {"verdict": "ProvenTrue", "witnesses": {k: str(e) for k, e in v.witnesses}}
    if isinstance(v, ProvenFalse):
        return {"verdict": "ProvenFalse", "counterexample": {k: str(e) for k, e in v.counterexample}}
    return {"verdict": "UnknownUpTo", "bounds": list(v.bounds)}


# -- environment -----------------------------------------------------------------


@dataclass(frozen=True)
class RegisteredSet:
    name: str
    decider: Callable[[RingElement], bool]
    formula: FoFormula | None = None
    variable: str = "z"
    # Optional fast path listing the members of a fragment in canonical order.
    members: Callable[[FragmentSpec], Iterable[RingElement]] | None = None


@dataclass(frozen=True)
class Environment:
    ctx: RingContext
    fragment: FragmentSpec | None = None
    bindings: Mapping[str, RingElement] = field(default_factory=dict)
    sets: Mapping[str, RegisteredSet] = field(default_factory=dict)
    params: Mapping[str, RingElement] = field(default_factory=dict)

    def bind(self, name: str, value: RingElement) -> "Environment":
        if value.ctx is not self.ctx and value.ctx != self.ctx:
            raise ContextMismatch(f"{name} is bound to an element of {value.ctx.name}, not {self.ctx.name}")
        b = dict(self.bindings)
        b[name] = value
        return Environment(self.ctx, self.fragment, b, self.sets, self.params)

    def bind_many(self, values: Mapping[str, RingElement]) -> "Environment":
        env = self
        for k, v in values.items():
            env = env.bind(k, v)
        return env

    def with_params(self, **params: RingElement) -> "Environment":
        """Bind parameters (recorded separately for reports)."""
        env = self.bind_many(params)
        return replace(env, params={**self.params, **params})

    def lookup(self, name: str) -> RingElement:
        try:
            return self.bindings[name]
        except KeyError:
            pass
        if name == "x":
            return self.ctx.x()
        if name == "y" and "y" in self.ctx.variables:
            return self.ctx.y()
        raise UnboundName(f"{name} is not bound")

    def resolve_fragment(self, d: RingFragment) -> FragmentSpec:
        base = self.fragment
        if base is None and (d.degree is None or d.height is None):
            raise ValueError("no default fragment in the environment")
        degree = base.degree if d.degree is None else d.degree
        height = base.height if d.height is None else d.height
        if base is not None and degree == base.degree and height == base.height:
            return base
        scalars = base.scalars if base is not None else None
        return FragmentSpec(self.ctx, degree, height, scalars)


def register_set(
    env: Environment,
    name: str,
    decider: Callable[[RingElement], bool],
    formula: FoFormula | None = None,
    variable: str = "z",
    members=None,
) -> Environment:
    if name in env.sets:
        raise DuplicateSetName(name)
    sets = dict(env.sets)
    sets[name] = RegisteredSet(name, decider, formula, variable, members)
    return replace(env, sets=sets)


# -- terms ------------------------------------------------------------------------


def eval_term(t: FoTerm, env: Environment) -> RingElement:
    try:
        handler = _TERM_HANDLERS[type(t)]
    except KeyError:
        raise TypeError(f"not a term: {t!r}") from None
    return handler(t, env)


_TERM_HANDLERS = {
    Var: lambda t, env: env.lookup(t.name),
    Param: lambda t, env: env.lookup(t.name),
    IntLit: lambda t, env: embed_integer(t.value, env.ctx),
    Add: lambda t, env: eval_term(t.left, env) + eval_term(t.right, env),
    Sub: lambda t, env: eval_term(t.left, env) - eval_term(t.right, env),
    Mul: lambda t, env: eval_term(t.left, env) * eval_term(t.right, env),
    Neg: lambda t, env: -eval_term(t.operand, env),
    Pow: lambda t, env: power(eval_term(t.base, env), t.exponent),
}


# -- quantifier domains -------------------------------------------------------------


# Small fragments are reused across many quantifier evaluations.
_CACHE_LIMIT = 100_000


@lru_cache(maxsize=32)
def _cached_elements(spec: FragmentSpec) -> tuple:
    return tuple(enumerate_fragment(spec))


def fragment_elements(spec: FragmentSpec) -> Iterable[RingElement]:
    if len(spec) <= _CACHE_LIMIT:
        return _cached_elements(spec)
    return enumerate_fragment(spec)


def _domain(d, env: Environment, restrict=None) -> tuple[Iterable[RingElement], str, bool]:
    """Return (candidates, description, complete)."""
    if isinstance(d, RingFragment):
        spec = env.resolve_fragment(d)
        sub = spec if restrict is None else restrict(env, spec)
        return fragment_elements(sub), spec.label(), False
    if isinstance(d, PowersOfParam):
        p = env.lookup(d.param)
        return (power(p, n) for n in range(1, d.max_exp + 1)), format_domain(d), False
    if isinstance(d, NamedSet):
        entry = _set(env, d.set_name)
        spec = env.resolve_fragment(d.fragment)
        if entry.members is not None:
            items = entry.members(spec)
        else:
            items = (e for e in fragment_elements(spec) if entry.decider(e))
        return items, f"{d.set_name} within {spec.label()}", False
    if isinstance(d, Quotient):
        divisor = eval_term(d.divisor, env)
        if divisor.is_zero():
            raise ValueError("quotient domain with zero divisor")
        out = divide_exact(eval_term(d.dividend, env), divisor, d.side)
        return ([out.quotient] if out.divides else []), format_domain(d), True
    raise TypeError(f"not a domain: {d!r}")


def _set(env: Environment, name: str) -> RegisteredSet:
    try:
        return env.sets[name]
    except KeyError:
        raise UnknownSetName(name) from None


def _complete(flag, env: Environment) -> bool:
    return flag(env) if callable(flag) else bool(flag)


# -- formulas -----------------------------------------------------------------------


def eval_formula(f: FoFormula, env: Environment) -> Verdict:
    try:
        handler = _FORMULA_HANDLERS[type(f)]
    except KeyError:
        raise TypeError(f"not a formula: {f!r}") from None
    return handler(f, env)


def _eq(f: Eq, env: Environment) -> Verdict:
    return _TRUE if eval_term(f.left, env) == eval_term(f.right, env) else _FALSE


def _inset(f: InSet, env: Environment) -> Verdict:
    return _TRUE if _set(env, f.set_name).decider(eval_term(f.term, env)) else _FALSE


def atom_divides(f: Divides, env: Environment) -> bool:
    divisor = eval_term(f.divisor, env)
    dividend = eval_term(f.dividend, env)
    if divisor.is_zero():
        # 0 | g  iff  g = 0*h for some h  iff  g = 0
        return dividend.is_zero()
    return divide_exact(dividend, divisor, f.side).divides


def _and(parts, env: Environment) -> Verdict:
    witnesses, bounds = [], []
    for part in parts:
        v = eval_formula(part, env)
        if isinstance(v, ProvenFalse):
            return v
        if isinstance(v, ProvenTrue):
            witnesses.extend(v.witnesses)
        else:
            bounds.append(v.bounds)
    if bounds:
        return UnknownUpTo(_merge_bounds(*bounds))
    return ProvenTrue(tuple(witnesses))


def _or(parts, env: Environment) -> Verdict:
    counter, bounds = [], []
    for part in parts:
        v = eval_formula(part, env)
        if isinstance(v, ProvenTrue):
            return v
        if isinstance(v, ProvenFalse):
            counter.extend(v.counterexample)
        else:
            bounds.append(v.bounds)
    if bounds:
        return UnknownUpTo(_merge_bounds(*bounds))
    return ProvenFalse(tuple(counter))


def _implies(f: Implies, env: Environment) -> Verdict:
    # same as _or over (!antecedent, consequent), without building the Not node
    a = negate(eval_formula(f.antecedent, env))
    if isinstance(a, ProvenTrue):
        return a
    c = eval_formula(f.consequent, env)
    if isinstance(c, ProvenTrue):
        return c
    if isinstance(a, ProvenFalse) and isinstance(c, ProvenFalse):
        return ProvenFalse(a.counterexample + c.counterexample)
    return UnknownUpTo(_merge_bounds(*(v.bounds for v in (a, c) if isinstance(v, UnknownUpTo))))


def _exists(f: Exists, env: Environment) -> Verdict:
    items, label, complete = _domain(f.domain, env)
    hinted = list(f.hint(env)) if f.hint is not None else []
    tried = set(hinted)
    bounds = []
    for cand in chain(hinted, (c for c in items if c not in tried)):
        v = eval_formula(f.body, env.bind(f.var, cand))
        if isinstance(v, ProvenTrue):
            return ProvenTrue(((f.var, cand),) + v.witnesses)
        if isinstance(v, UnknownUpTo):
            bounds.append(v.bounds)
    if not (complete or _complete(f.exhaustive, env)):
        bounds.append((f"{f.var} in {label}",))
    if bounds:
        return UnknownUpTo(_merge_bounds(*bounds))
    return ProvenFalse()


def _forall(f: Forall, env: Environment) -> Verdict:
    items, label, complete = _domain(f.domain, env, f.restrict)
    bounds = []
    for cand in items:
        v = eval_formula(f.body, env.bind(f.var, cand))
        if isinstance(v, ProvenFalse):
            return ProvenFalse(((f.var, cand),) + v.counterexample)
        if isinstance(v, UnknownUpTo):
            bounds.append(v.bounds)
    if not (complete or _complete(f.exhaustive, env)):
        bounds.append((f"{f.var} in {label}",))
    if bounds:
        return UnknownUpTo(_merge_bounds(*bounds))
    return ProvenTrue()


_TRUE, _FALSE = ProvenTrue(), ProvenFalse()

_FORMULA_HANDLERS = {
    Eq: _eq,
    Divides: lambda f, env: _TRUE if atom_divides(f, env) else _FALSE,
    InSet: _inset,
    Not: lambda f, env: negate(eval_formula(f.body, env)),
    And: lambda f, env: _and(f.parts, env),
    Or: lambda f, env: _or(f.parts, env),
    Implies: _implies,
    Exists: _exists,
    Forall: _forall,
}
