"""Command-line front end.

Exit status: 0 on success, 1 when a check fails or a classification
disagrees with ground truth, 2 on usage or parse errors.
"""

from __future__ import annotations

import argparse
import sys
import warnings
from pathlib import Path

try:
    import tomllib
except ModuleNotFoundError:  # Python < 3.11
    import tomli as tomllib

from .definitions import (
    BoundTooSmall,
    build_natural_formula,
    classify,
    integer_value,
    standard_environment,
)
from .divisibility import InvalidBase
from .enumeration import FragmentSpec, FragmentTooLarge
from .formula.evaluate import eval_formula, verdict_to_json
from .formula.parse import parse_formula
from .numerics import format_scalar
from .parser import ParseError, parse_element
from .rings import CoefficientDomain, RingContext, format_element, gauss_poly, int_poly, power, qplane, rat_poly
from .suites import all_pass, dumps, record_to_json, verify_ring

EXIT_OK, EXIT_VIOLATION, EXIT_USAGE = 0, 1, 2

RINGS = ("int-poly", "rat-poly", "gauss-poly", "qplane")
SCALARS = tuple(d.value for d in CoefficientDomain)

# (degree, height, scalars) per ring; Gaussian coefficients blow up fast.
DEFAULT_FRAGMENTS = {
    "int-poly": (2, 3, None),
    "rat-poly": (2, 3, None),
    "gauss-poly": (2, 1, None),
    "qplane": ((2, 2), 2, "integer"),
}
DEFAULTS = {"ring": "int-poly", "q": "2", "bound": 16, "json": False, "jobs": 1}
CONFIG_KEYS = {"ring", "q", "bound", "degree", "bidegree", "height", "scalars", "json", "jobs"}


class UsageError(Exception):
    pass


# -- configuration --------------------------------------------------------------------


def _load_config(path: str | None, command: str) -> dict:
    if path is None:
        return {}
    try:
        with Path(path).open("rb") as fh:
            data = tomllib.load(fh)
    except (OSError, tomllib.TOMLDecodeError) as exc:
        raise UsageError(f"cannot read config {path}: {exc}") from None
    # top-level keys, overridden by a table named after the command
    merged = {k: v for k, v in data.items() if not isinstance(v, dict)}
    merged.update(data.get(command, {}))
    unknown = set(merged) - CONFIG_KEYS
    if unknown:
        raise UsageError(f"unknown config keys: {', '.join(sorted(unknown))}")
    return merged


def _parse_bidegree(value) -> tuple[int, int]:
    if isinstance(value, (list, tuple)):
        parts = list(value)
    else:
        parts = str(value).split(",")
    try:
        dx, dy = (int(v) for v in parts)
    except ValueError:
        raise UsageError(f"bidegree must be 'Dx,Dy', got {value!r}") from None
    return dx, dy


def _parse_q(text: str):
    try:
        q = parse_element(str(text), gauss_poly())
    except ParseError as exc:
        raise UsageError(f"bad --q {text!r}: {exc}") from None
    if not q.is_constant() or q.is_zero():
        raise UsageError(f"q must be a nonzero scalar, got {text!r}")
    return q.constant_value()


def resolve(args: argparse.Namespace) -> dict:
    """Merge flags over config-file values over defaults and validate."""
    cfg = dict(DEFAULTS)
    cfg.update(_load_config(args.config, args.command))
    for key in CONFIG_KEYS:
        value = getattr(args, key, None)
        # identity tests: 0 == False would hide --height 0
        if value is not None and value is not False:
            cfg[key] = value
    if cfg["ring"] not in RINGS:
        raise UsageError(f"unknown ring {cfg['ring']!r}; choose from {', '.join(RINGS)}")
    degree, height, scalars = DEFAULT_FRAGMENTS[cfg["ring"]]
    if cfg["ring"] == "qplane":
        if cfg.get("degree") is not None:
            raise UsageError("use --bidegree for the quantum plane")
        cfg["degree"] = _parse_bidegree(cfg["bidegree"]) if cfg.get("bidegree") is not None else degree
    else:
        if cfg.get("bidegree") is not None:
            raise UsageError("--bidegree applies to the quantum plane only")
        cfg["degree"] = int(cfg["degree"]) if cfg.get("degree") is not None else degree
    cfg.pop("bidegree", None)
    cfg["height"] = int(cfg["height"]) if cfg.get("height") is not None else height
    cfg["scalars"] = cfg.get("scalars") or scalars
    cfg["bound"] = int(cfg["bound"])
    if cfg["bound"] < 2:
        raise UsageError("--bound must be at least 2")
    cfg["jobs"] = int(cfg["jobs"])
    if cfg["jobs"] < 1:
        raise UsageError("--jobs must be at least 1")
    if cfg["height"] < 1:
        raise UsageError("--height must be at least 1")
    if min(cfg["degree"] if isinstance(cfg["degree"], tuple) else (cfg["degree"],)) < 0:
        raise UsageError("degrees must be nonnegative")
    if cfg["scalars"] is not None and cfg["scalars"] not in SCALARS:
        raise UsageError(f"unknown scalars {cfg['scalars']!r}")
    return cfg


def make_context(cfg: dict) -> RingContext:
    ring = cfg["ring"]
    if ring == "qplane":
        return qplane(_parse_q(cfg["q"]))
    return {"int-poly": int_poly, "rat-poly": rat_poly, "gauss-poly": gauss_poly}[ring]()


def make_fragment(ctx: RingContext, cfg: dict) -> FragmentSpec:
    scalars = CoefficientDomain(cfg["scalars"]) if cfg["scalars"] else None
    try:
        return FragmentSpec(ctx, cfg["degree"], cfg["height"], scalars)
    except ValueError as exc:
        raise UsageError(str(exc)) from None


def config_json(ctx: RingContext, fragment: FragmentSpec, cfg: dict) -> dict:
    out = {"ring": cfg["ring"], "bound": cfg["bound"], "fragment": fragment.describe()}
    if cfg["ring"] == "qplane":
        out["q"] = format_scalar(ctx.q)
    return out


# -- output ------------------------------------------------------------------------------


def _emit(report: dict, as_json: bool, lines: list[str]) -> None:
    if as_json:
        print(dumps(report))
    else:
        print("\n".join(lines))


def _suite_line(s: dict) -> str:
    extra = s.get("counterexample") or s.get("bounds") or s.get("checked") or s.get("value") or ""
    if "report" in s:
        extra = f"coverage {s['report']['coverage']}, contradictions {len(s['report']['contradictions'])}"
    return f"{s['status'].upper():5} {s['name']}" + (f"  [{extra}]" if extra != "" else "")


# -- commands ------------------------------------------------------------------------------


def cmd_verify(args, cfg) -> int:
    ctx = make_context(cfg)
    fragment = make_fragment(ctx, cfg)
    suites = verify_ring(ctx, fragment, cfg["bound"], jobs=cfg["jobs"])
    report = {"config": config_json(ctx, fragment, cfg), "suites": suites}
    _emit(report, cfg["json"], [f"# {fragment.label()}, N={cfg['bound']}"] + [_suite_line(s) for s in suites])
    return EXIT_OK if all_pass(suites) else EXIT_VIOLATION


def cmd_classify(args, cfg) -> int:
    ctx = make_context(cfg)
    fragment = make_fragment(ctx, cfg)
    bound = cfg["bound"]
    env = standard_environment(ctx, fragment, bound)
    formula = build_natural_formula(bound)
    records, lines, parsed, disagree = [], [], 0, False
    for text in args.elements:
        try:
            t = parse_element(text, ctx)
        except ParseError as exc:
            records.append({"input": text, "error": str(exc), "position": exc.position})
            lines.append(f"{text!r}: parse error at offset {exc.position}: {exc}")
            continue
        parsed += 1
        rec = classify(t, env, bound, formula)
        entry = {"input": text, **record_to_json(rec)}
        n = integer_value(t)
        if n is not None and abs(n) > bound:
            entry["warning"] = f"bound {bound} is below |{n}|"
        disagree |= not rec.agrees
        records.append(entry)
        witness = "" if rec.witness is None else f" (n={rec.witness})"
        lines.append(
            f"{format_element(t)}: natural:{str(rec.semantic_natural).lower()}{witness}"
            f" integer:{str(rec.semantic_integer).lower()} formula:{type(rec.formula_verdict).__name__}"
        )
    _emit({"config": config_json(ctx, fragment, cfg), "records": records}, cfg["json"], lines)
    if args.elements and not parsed:
        return EXIT_USAGE
    return EXIT_VIOLATION if disagree else EXIT_OK


def cmd_eval(args, cfg) -> int:
    ctx = make_context(cfg)
    fragment = make_fragment(ctx, cfg)
    bindings = {}
    for item in args.bind:
        name, sep, value = item.partition("=")
        if not sep or not name.strip():
            raise UsageError(f"--bind expects name=value, got {item!r}")
        try:
            bindings[name.strip()] = parse_element(value, ctx)
        except ParseError as exc:
            raise UsageError(f"bad value for {name}: {exc}") from None
    try:
        formula = parse_formula(args.formula, free=set(bindings) | {"p"})
    except ParseError as exc:
        raise UsageError(str(exc)) from None
    env = standard_environment(ctx, fragment, cfg["bound"]).bind_many(bindings)
    verdict = eval_formula(formula, env)
    body = verdict_to_json(verdict)
    lines = [body["verdict"]]
    for key in ("witnesses", "counterexample"):
        lines += [f"  {k} = {v}" for k, v in body.get(key, {}).items()]
    lines += [f"  searched {b}" for b in body.get("bounds", [])]
    _emit({"config": config_json(ctx, fragment, cfg), "verdict": body}, cfg["json"], lines)
    return EXIT_OK


def cmd_powers(args, cfg) -> int:
    ctx = make_context(cfg)
    fragment = make_fragment(ctx, cfg)
    try:
        p = parse_element(args.p, ctx)
    except ParseError as exc:
        raise UsageError(f"bad --p: {exc}") from None
    values = [format_element(power(p, n)) for n in range(1, cfg["bound"] + 1)]
    base = format_element(p)
    base = base if len(p.monomials()) == 1 and " " not in base else f"({base})"
    lines = [f"{base}^{n} = {v}" for n, v in enumerate(values, 1)]
    _emit({"config": {**config_json(ctx, fragment, cfg), "p": format_element(p)}, "powers": values}, cfg["json"], lines)
    return EXIT_OK


def cmd_enumerate(args, cfg) -> int:
    ctx = make_context(cfg)
    fragment = make_fragment(ctx, cfg)
    try:
        values = [format_element(e) for e in fragment]
    except FragmentTooLarge as exc:
        raise UsageError(str(exc)) from None
    lines = [f"{i}\t{v}" for i, v in enumerate(values)]
    _emit({"config": config_json(ctx, fragment, cfg), "elements": values}, cfg["json"], lines)
    return EXIT_OK


COMMANDS = {
    "verify": cmd_verify,
    "classify": cmd_classify,
    "eval": cmd_eval,
    "powers": cmd_powers,
    "enumerate": cmd_enumerate,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--ring", help=f"one of {', '.join(RINGS)} (default int-poly)")
    common.add_argument("--q", help="quantum-plane parameter, e.g. 2, 1/3, i, -1")
    common.add_argument("--bound", type=int, help="N, the largest power searched (default 16)")
    common.add_argument("--degree", type=int, help="fragment degree (univariate rings)")
    common.add_argument("--bidegree", help="fragment bidegree 'Dx,Dy' (quantum plane)")
    common.add_argument("--height", type=int, help="fragment coefficient height")
    common.add_argument("--scalars", help=f"narrow fragment coefficients to one of {', '.join(SCALARS)}")
    common.add_argument("--json", action="store_true", help="print a JSON report")
    common.add_argument("--jobs", type=int, help="worker processes for verify (default 1)")
    common.add_argument("--config", help="TOML file with defaults for the flags above")

    parser = argparse.ArgumentParser(prog="definable", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    sub.add_parser("verify", parents=[common], help="run every check for one ring")
    p = sub.add_parser("classify", parents=[common], help="decide membership in N and Z")
    p.add_argument("elements", nargs="+")
    p = sub.add_parser("eval", parents=[common], help="evaluate a formula")
    p.add_argument("formula")
    p.add_argument("--bind", action="append", default=[], metavar="NAME=VALUE")
    p = sub.add_parser("powers", parents=[common], help="list p^1..p^N")
    p.add_argument("--p", default="x")
    sub.add_parser("enumerate", parents=[common], help="list a fragment in canonical order")
    return parser


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code else EXIT_OK
    try:
        cfg = resolve(args)
        with warnings.catch_warnings():
            warnings.simplefilter("ignore", BoundTooSmall)
            return COMMANDS[args.command](args, cfg)
    except UsageError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except InvalidBase as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
