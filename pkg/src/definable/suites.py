"""Verification suites producing JSON-ready, deterministic reports.

Every suite returns a list of ``{"name", "status", ...}`` dicts with status
``"pass"`` or ``"fail"``; failing entries carry a counterexample when one
exists.  Element order is canonical and nothing depends on wall-clock time,
so the same arguments always give byte-identical JSON.
"""

from __future__ import annotations

import json
import random
from concurrent.futures import ProcessPoolExecutor
from typing import Iterable

from .definitions import (
    DEFAULT_BOUND,
    build_constants_formula,
    build_natural_formula,
    check_hypotheses,
    classify,
    pow_characterization_check,
    standard_environment,
    verify_geometric_identity,
    verify_telescoping_identity,
)
from .divisibility import Side, compose, divide_by_elimination, divide_exact, is_unit
from .enumeration import FragmentSpec, enumerate_fragment, fragment_size
from .formula.evaluate import Environment, ProvenTrue, eval_formula, verdict_to_json
from .parser import parse_element
from .rings import CoefficientDomain, RingContext, RingKind, format_element

SEED = 20240601


def _entry(name: str, ok: bool, **extra) -> dict:
    out = {"name": name, "status": "pass" if ok else "fail"}
    out.update({k: v for k, v in extra.items() if v is not None})
    return out


def dumps(report) -> str:
    return json.dumps(report, sort_keys=True, indent=2)


def all_pass(suites: Iterable[dict]) -> bool:
    return all(s["status"] == "pass" for s in suites)


# -- individual suites -----------------------------------------------------------------


def worked_example_suite(ctx: RingContext) -> list[dict]:
    """The two products of ``3+x`` and ``2+y``; the second picks up a factor q."""
    if ctx.kind is not RingKind.QPLANE:
        return []
    a, b = parse_element("3+x", ctx), parse_element("2+y", ctx)
    q = ctx.q
    cases = [
        ("(3+x)*(2+y)", a * b, parse_element("6+2*x+3*y+x*y", ctx)),
        ("(2+y)*(3+x)", b * a, parse_element("6+2*x+3*y", ctx) + ctx.constant(q) * parse_element("x*y", ctx)),
    ]
    return [
        _entry(f"worked-example {label}", got == want, value=format_element(got), expected=format_element(want))
        for label, got, want in cases
    ]


def hypothesis_suite(env: Environment, fragment: FragmentSpec, bound: int) -> list[dict]:
    p = env.lookup("p")
    report = check_hypotheses(env, p, "A", fragment, bound)
    entries = []
    for name, outcome in report.outcomes.items():
        detail = outcome.to_json()
        entries.append(_entry(f"hypothesis {name}", outcome.ok, outcome=detail.pop("status"), **detail))
    return entries


def geometric_suite(ctx: RingContext, max_n: int) -> list[dict]:
    p = ctx.x()
    bad = next((n for n in range(1, max_n + 1) if not verify_geometric_identity(ctx, p, n)), None)
    return [_entry("geometric-identity", bad is None, checked=f"1 <= n <= {max_n}, both sides", counterexample=bad)]


def sample_fragment(spec: FragmentSpec, count: int, seed: int = SEED) -> list:
    """``count`` distinct elements at seeded random canonical indices (sorted)."""
    size = fragment_size(spec)
    rng = random.Random(seed)
    if size <= 10 * count:
        idx = sorted(rng.sample(range(size), min(count, size)))
    else:
        # range() is too long for sample() on huge fragments
        chosen: set[int] = set()
        while len(chosen) < count:
            chosen.add(rng.randrange(size))
        idx = sorted(chosen)
    return [spec.element_at(i) for i in idx]


def telescoping_suite(ctx: RingContext, max_n: int, sample: FragmentSpec, count: int = 200) -> list[dict]:
    p = ctx.x()
    ts = sample_fragment(sample, count)
    for n in range(2, max_n + 1):
        for t in ts:
            if not verify_telescoping_identity(ctx, p, n, t):
                return [_entry("telescoping-identity", False, counterexample=f"n={n}, t={format_element(t)}")]
    return [_entry("telescoping-identity", True, checked=f"2 <= n <= {max_n}, {len(ts)} sampled t")]


def pow_suite(ctx: RingContext, fragment: FragmentSpec, divisors: FragmentSpec) -> list[dict]:
    if not ctx.commutative:
        return []
    report = pow_characterization_check(ctx, fragment, divisors)
    return [
        _entry(
            "pow-characterization",
            report.ok,
            fragment=fragment.label(),
            divisors=divisors.label(),
            report=report.to_json(),
        )
    ]


def constants_suite(ctx: RingContext, fragment: FragmentSpec) -> list[dict]:
    """Cross-check ``z = 0 | z | 1`` against the constants decider (fields only)."""
    if not ctx.coeffs.is_field():
        return []
    env = standard_environment(ctx, fragment)
    formula = build_constants_formula("z")
    checked = 0
    for z in enumerate_fragment(fragment):
        checked += 1
        by_formula = isinstance(eval_formula(formula, env.bind("z", z)), ProvenTrue)
        if by_formula != z.is_constant():
            return [_entry("constants-formula", False, counterexample=format_element(z))]
    return [_entry("constants-formula", True, fragment=fragment.label(), checked=checked)]


def classification_suite(ctx: RingContext, fragment: FragmentSpec, bound: int) -> list[dict]:
    env = standard_environment(ctx, fragment, bound)
    formula = build_natural_formula(bound)
    checked, counts = 0, {"natural": 0, "integer": 0, "ProvenTrue": 0, "ProvenFalse": 0, "UnknownUpTo": 0}
    for t in enumerate_fragment(fragment):
        rec = classify(t, env, bound, formula)
        checked += 1
        counts["natural"] += rec.semantic_natural
        counts["integer"] += rec.semantic_integer
        counts[type(rec.formula_verdict).__name__] += 1
        if not rec.agrees:
            return [_entry("classification", False, counterexample=format_element(t), record=record_to_json(rec))]
    return [_entry("classification", True, fragment=fragment.label(), bound=bound, checked=checked, counts=counts)]


def division_roundtrip_suite(ctx: RingContext, spec: FragmentSpec, pairs: int, seed: int = SEED) -> list[dict]:
    """Random ``(f, h)``: exact recovery of ``h``, and ``f*h + 1`` against the elimination oracle."""
    rng = random.Random(seed)
    size = fragment_size(spec)
    checked = 0
    while checked < pairs:
        f, h = spec.element_at(rng.randrange(size)), spec.element_at(rng.randrange(size))
        if f.is_zero():
            continue
        checked += 1
        for side in (Side.LEFT, Side.RIGHT):
            g = compose(f, h, side)
            out = divide_exact(g, f, side)
            if not (out.divides and out.quotient == h):
                return [_entry("division-roundtrip", False, counterexample=_pair(f, h, side))]
            shifted = g + ctx.one()
            direct = divide_exact(shifted, f, side)
            oracle = divide_by_elimination(shifted, f, side)
            if direct != oracle or direct.divides != is_unit(f):
                return [_entry("division-shifted", False, counterexample=_pair(f, h, side))]
    return [_entry("division-roundtrip", True, pairs=checked, sides="left,right", fragment=spec.label())]


def _pair(f, h, side: Side) -> str:
    return f"f={format_element(f)}, h={format_element(h)}, side={side.name.lower()}"


def record_to_json(rec) -> dict:
    return {
        "element": format_element(rec.element),
        "natural": rec.semantic_natural,
        "integer": rec.semantic_integer,
        "ground_truth_natural": rec.ground_truth_natural,
        "ground_truth_integer": rec.ground_truth_integer,
        "witness": rec.witness,
        "formula": verdict_to_json(rec.formula_verdict),
    }


# -- whole-ring verification -----------------------------------------------------------------


def pow_fragments(fragment: FragmentSpec) -> tuple[FragmentSpec, FragmentSpec]:
    """Integer-scalar fragments for the POW(x) check, capped at degree 3 and height 2.

    The divisor fragment is one degree and one height larger.
    """
    ctx = fragment.context
    degree, height = min(fragment.degree, 3), min(fragment.height, 2)
    ints = CoefficientDomain.INTEGER
    return FragmentSpec(ctx, degree, height, ints), FragmentSpec(ctx, degree + 1, height + 1, ints)


def telescoping_sample_space(ctx: RingContext) -> FragmentSpec:
    return FragmentSpec(ctx, (3, 3) if ctx.kind is RingKind.QPLANE else 4, 3)


FORMULA_SWEEP_LIMIT = 200_000


def shrink(fragment: FragmentSpec, limit: int = FORMULA_SWEEP_LIMIT) -> FragmentSpec:
    """Lower the degree (then the height) until the fragment has at most ``limit`` elements."""
    spec = fragment
    while fragment_size(spec) > limit:
        deg = spec.degree
        if isinstance(deg, tuple) and max(deg) > 0:
            i = 0 if deg[0] >= deg[1] else 1
            spec = spec.with_degree(tuple(d - (j == i) for j, d in enumerate(deg)))
        elif not isinstance(deg, tuple) and deg > 0:
            spec = spec.with_degree(deg - 1)
        elif spec.height > 1:
            spec = FragmentSpec(spec.context, spec.degree, spec.height - 1, spec.scalars, spec.cap)
        else:
            break
    return spec


def _suite_task(task: tuple) -> list[dict]:
    # module-level so a process pool can pickle it; the environment is rebuilt per worker
    name, ctx, fragment, bound = task
    if name == "worked-example":
        return worked_example_suite(ctx)
    if name == "hypotheses":
        return hypothesis_suite(standard_environment(ctx, fragment, bound), fragment, bound)
    if name == "geometric":
        return geometric_suite(ctx, bound)
    if name == "telescoping":
        return telescoping_suite(ctx, bound, telescoping_sample_space(ctx))
    if name == "pow":
        return pow_suite(ctx, *pow_fragments(fragment))
    if name == "constants":
        return constants_suite(ctx, shrink(fragment))
    raise ValueError(f"unknown suite {name!r}")


SUITE_ORDER = ("worked-example", "hypotheses", "geometric", "telescoping", "pow", "constants")


def verify_ring(ctx: RingContext, fragment: FragmentSpec, bound: int = DEFAULT_BOUND, jobs: int = 1) -> list[dict]:
    """Run every suite for one ring.

    With ``jobs > 1`` the suites run in a process pool; results are
    concatenated in ``SUITE_ORDER`` either way, so the report is identical.
    """
    names = [n for n in SUITE_ORDER if ctx.commutative or n != "pow"]
    tasks = [(name, ctx, fragment, bound) for name in names]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            parts = list(pool.map(_suite_task, tasks))
    else:
        parts = [_suite_task(t) for t in tasks]
    return [entry for part in parts for entry in part]
