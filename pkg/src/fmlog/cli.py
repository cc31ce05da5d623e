"""Command-line entry point: ``fmlog <group> <command> [options]``.

Exit status is 0 when every check passes, 1 when a check fails and 2 for
usage errors or unreadable input.
"""
from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import __version__
from .errors import FmlogError, InvalidInput, ResourceLimit
from .fm.directions import fraction_str
from .nested import (
    DEFAULT_MAX_ARITY,
    covering_relations,
    enumerate_nested_collections,
    nested_to_tree,
    subset_key,
    tree_to_json,
)

EXIT_OK, EXIT_FAIL, EXIT_USAGE = 0, 1, 2


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        print(f"{self.prog}: error: {message}", file=sys.stderr)
        sys.exit(EXIT_USAGE)


# -- io helpers -----------------------------------------------------------------


def read_json(path: str):
    try:
        text = sys.stdin.read() if path == "-" else Path(path).read_text()
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path}: invalid JSON at line {exc.lineno} column {exc.colno}: {exc.msg}") from exc


def parse_q(text: str) -> dict:
    """'1,1,2' -> {1: 1, 2: 1, 3: 2}, checked to be onto 1..k."""
    try:
        img = [int(t) for t in text.split(",")]
    except ValueError as exc:
        raise UsageError(f"--q must be comma-separated integers, got {text!r}") from exc
    if set(img) != set(range(1, max(img) + 1)):
        raise UsageError("--q must be a surjection onto 1..k")
    return dict(enumerate(img, start=1))


def _q_from_json(obj) -> dict:
    if isinstance(obj, str):
        return parse_q(obj)
    if isinstance(obj, list):
        return parse_q(",".join(str(v) for v in obj))
    if isinstance(obj, dict):
        return {int(k): int(v) for k, v in obj.items()}
    raise UsageError("'q' must be a string, list or object")


def _jsonable(obj):
    if isinstance(obj, Fraction):
        return fraction_str(obj)
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    return obj


def _table(obj, prefix="") -> list:
    if isinstance(obj, dict):
        lines = []
        for k in sorted(obj):
            lines += _table(obj[k], f"{prefix}{k}.")
        return lines
    if isinstance(obj, list) and obj and isinstance(obj[0], (dict, list)):
        lines = []
        for i, v in enumerate(obj):
            lines += _table(v, f"{prefix}{i}.")
        return lines
    return [f"{prefix[:-1]}\t{json.dumps(obj, sort_keys=True)}"]


def emit(args, payload) -> None:
    payload = _jsonable(payload)
    if args.format == "table":
        text = "\n".join(_table(payload)) + "\n"
    else:
        text = json.dumps(payload, sort_keys=True, indent=2) + "\n"
    if args.out and args.out != "-":
        Path(args.out).write_text(text)
    else:
        sys.stdout.write(text)


def _status(report: dict) -> int:
    return EXIT_OK if report.get("passed", not report.get("failures")) else EXIT_FAIL


# -- strata ----------------------------------------------------------------------


def cmd_strata_enumerate(args):
    cols = enumerate_nested_collections(args.n, args.max_arity)
    emit(args, {
        "n": args.n,
        "count": len(cols),
        "strata": [{"nested": c.to_json(), "tree": tree_to_json(nested_to_tree(c))} for c in cols],
    })
    return EXIT_OK


def cmd_strata_poset(args):
    cols = enumerate_nested_collections(args.n, args.max_arity)
    index = {c: i for i, c in enumerate(cols)}
    edges = sorted((index[a], index[b]) for a, b in covering_relations(cols))
    emit(args, {
        "n": args.n,
        "nodes": [c.to_json() for c in cols],
        "covers": [list(e) for e in edges],
    })
    return EXIT_OK


# -- fm ---------------------------------------------------------------------------


def _compose_spec(spec):
    """Compose from {q, x, ys}; framed when the points carry 'frames'."""
    from .fm.framed import framed_compose, framed_from_json, framed_to_json
    from .fm.points import compose, point_from_json, point_to_json

    try:
        q = _q_from_json(spec["q"])
        framed = "frames" in spec["x"]
        load = framed_from_json if framed else point_from_json
        x = load(spec["x"])
        ys = {int(k): load(v) for k, v in spec["ys"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput("compose spec needs 'q', 'x' and 'ys'") from exc
    if framed:
        return framed_compose(q, x, ys), framed_to_json
    return compose(q, x, ys), point_to_json


def cmd_fm_compose(args):
    point, dump = _compose_spec(read_json(args.spec))
    emit(args, dump(point))
    return EXIT_OK


def cmd_fm_verify(args):
    from .verify import fm_axioms, fm_coordinate_law

    _bound(args.n, args.max_arity)
    report = {
        "axioms": fm_axioms(args.D, args.n, args.trials, args.seed),
        "coordinate_law": fm_coordinate_law(args.D, args.n, args.trials, args.seed),
    }
    report["passed"] = all(r["passed"] for r in report.values())
    emit(args, report)
    return _status(report)


def cmd_fm_plot(args):
    from .fm.plot import point_svg
    from .fm.points import point_from_json

    obj = read_json(args.input)
    if "q" in obj and "ys" in obj:
        point, _ = _compose_spec(obj)
        point = getattr(point, "point", point)
    else:
        point = point_from_json(obj)
    if point.D != args.D:
        raise InvalidInput(f"input has D = {point.D}, expected {args.D}")
    svg = point_svg(point, Fraction(args.eps))
    if args.out and args.out != "-":
        Path(args.out).write_text(svg)
    else:
        sys.stdout.write(svg)
    return EXIT_OK


# -- screens ------------------------------------------------------------------------


def cmd_screen_compose(args):
    from .screens import screen_compose, screen_from_json

    obj = read_json(args.input)
    try:
        s0 = screen_from_json(obj["root"])
        ss = {int(k): screen_from_json(v) for k, v in obj["fibres"].items()}
    except (KeyError, TypeError, AttributeError) as exc:
        raise InvalidInput("screen compose input needs 'root' and 'fibres'") from exc
    emit(args, screen_compose(parse_q(args.q), s0, ss).to_json())
    return EXIT_OK


def cmd_screen_decompose(args):
    from .screens import screen_decompose, screen_from_json

    s0, ss = screen_decompose(parse_q(args.q), screen_from_json(read_json(args.input)))
    emit(args, {"root": s0.to_json(), "fibres": {str(r): s.to_json() for r, s in sorted(ss.items())}})
    return EXIT_OK


def cmd_screen_validate(args):
    from .screens import screen_from_json, screen_validate, vanishing_satisfied

    s = screen_from_json(read_json(args.input))
    ok, lams, witness = screen_validate(s)
    report = {
        "compatible": ok,
        "lambdas": {f"{subset_key(I)}|{subset_key(J)}": lam for (I, J), lam in lams.items()},
        "witness": None if witness is None else [subset_key(w) for w in witness],
    }
    if args.q:
        q = parse_q(args.q)
        if set(q) != s.labels:
            raise InvalidInput("--q must be defined on the labels of the screen")
        fib = {}
        for m, r in q.items():
            fib.setdefault(r, set()).add(m)
        report["vanishing"] = {str(r): vanishing_satisfied(s, F) for r, F in sorted(fib.items()) if len(F) >= 2}
    report["passed"] = ok and all(report.get("vanishing", {}).values())
    emit(args, report)
    return _status(report)


# -- log calculus ------------------------------------------------------------------------


def cmd_logcalc_gamma(args):
    from .logcalc.gamma import gamma_log, gamma_vlog
    from .logcalc.morphisms import legality_df, legality_virtual, witness_json

    q = parse_q(args.q)
    m = gamma_log(q) if args.variant == "log" else gamma_vlog(q)
    df_ok, df_w = legality_df(m)
    v_ok, v_w = legality_virtual(m)
    report = {
        "q": args.q,
        "variant": args.variant,
        "df_legal": df_ok,
        "df_witness": witness_json(df_w),
        "virtual_legal": v_ok,
        "virtual_witness": witness_json(v_w),
        "rows": len(m.target.keys),
    }
    if args.dump:
        report["morphism"] = m.to_json()
    emit(args, report)
    return EXIT_OK


def cmd_logcalc_verify(args):
    from .logcalc import checks

    _bound(args.max_arity, DEFAULT_MAX_ARITY)
    variants = ["log", "vlog"] if args.variant == "both" else [args.variant]
    report = {"legality": checks.legality_sweep(args.max_arity)}
    for v in variants:
        report[f"associativity_{v}"] = _assoc(args, v)
        report[f"equivariance_{v}"] = checks.check_equivariance(args.max_arity, v)
        units = [checks.left_unit(m, v) and checks.right_unit(m, v) for m in range(1, args.max_arity + 1)]
        report[f"virtual_units_{v}"] = {"checked": len(units), "failures": [m + 1 for m, u in enumerate(units) if not u]}
    search = checks.strict_unit_search(bound=args.unit_bound)
    report["strict_unit_search"] = dict(search, failures=search["strict_units"])
    report["passed"] = all(not r["failures"] for r in report.values() if isinstance(r, dict))
    emit(args, report)
    return _status(report)


def _assoc(args, variant):
    import itertools

    from .logcalc import checks

    pairs = itertools.chain(
        *(checks.all_pairs(s) for s in range(1, min(args.max_arity, args.assoc_exhaustive) + 1)),
        *(checks.monotone_pairs(s) for s in range(args.assoc_exhaustive + 1, args.max_arity + 1)),
    )
    return checks.check_associativity(pairs, variant)


# -- kn ------------------------------------------------------------------------------


def cmd_kn_hopf(args):
    from .kn import hopf_verify

    report = hopf_verify(args.m, k=args.samples, tol=args.tol, seed=args.seed)
    emit(args, report)
    return _status(report)


def cmd_kn_split(args):
    from .kn import circle_split_verify

    report = circle_split_verify(args.case, k=args.samples, tol=args.tol, seed=args.seed)
    emit(args, report)
    return _status(report)


def cmd_kn_s1(args):
    from .kn import s1_action_verify

    report = s1_action_verify(args.n, k=args.samples, tol=args.tol, seed=args.seed)
    emit(args, report)
    return _status(report)


def cmd_kn_cartesian(args):
    from .kn import strict_cartesian_verify

    report = strict_cartesian_verify(args.case, k=args.samples, tol=args.tol, seed=args.seed)
    emit(args, report)
    return _status(report)


# -- verify ---------------------------------------------------------------------------


def cmd_verify_all(args):
    from .verify import verify_all

    progress = None
    if args.verbose:
        progress = lambda name: print(f"running {name}", file=sys.stderr, flush=True)  # noqa: E731
    report = verify_all(args.seed, quick=args.quick, tol=args.tol, progress=progress)
    emit(args, report)
    return _status(report)


# -- parser ---------------------------------------------------------------------------


def _bound(n, limit):
    if n > limit:
        raise ResourceLimit(f"arity {n} exceeds the bound {limit} (raise FMLOG_MAX_ARITY to allow it)")


def _common(p, defaults: bool):
    kw = {} if defaults else {"default": argparse.SUPPRESS}
    p.add_argument("--seed", type=int, **({"default": 0} if defaults else kw), help="campaign seed")
    p.add_argument("--tol", type=float, **({"default": 1e-9} if defaults else kw), help="numerical tolerance")
    p.add_argument("--format", choices=("json", "table"), **({"default": "json"} if defaults else kw))
    p.add_argument("--out", **({"default": None} if defaults else kw), help="write the report here")


def build_parser() -> argparse.ArgumentParser:
    top = _Parser(prog="fmlog", description="Exact FM operad, screens and log-structure verification.")
    top.add_argument("--version", action="version", version=f"fmlog {__version__}")
    _common(top, True)
    common = argparse.ArgumentParser(add_help=False)
    _common(common, False)
    groups = top.add_subparsers(dest="group", required=True, parser_class=_Parser)

    def leaf(sub, name, fn, help_):
        p = sub.add_parser(name, parents=[common], help=help_)
        p.set_defaults(fn=fn)
        return p

    g = groups.add_parser("strata", help="stable trees and nested collections")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn, h in (("enumerate", cmd_strata_enumerate, "list all strata"), ("poset", cmd_strata_poset, "closure order covers")):
        p = leaf(sub, name, fn, h)
        p.add_argument("--n", type=int, required=True)
        p.add_argument("--max-arity", type=int, default=DEFAULT_MAX_ARITY)

    g = groups.add_parser("fm", help="Fulton-MacPherson points")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(sub, "compose", cmd_fm_compose, "compose points from a JSON spec")
    p.add_argument("--spec", required=True)
    p = leaf(sub, "verify-axioms", cmd_fm_verify, "random operad axiom campaign")
    p.add_argument("--D", type=int, required=True)
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--trials", type=int, default=500)
    p.add_argument("--max-arity", type=int, default=DEFAULT_MAX_ARITY)
    p = leaf(sub, "plot", cmd_fm_plot, "SVG of a planar point")
    p.add_argument("--D", type=int, default=2, choices=(2,))
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--eps", default="1/5", help="display scale per tree level")

    g = groups.add_parser("screen", help="simple screens")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    for name, fn, need_q in (("compose", cmd_screen_compose, True), ("decompose", cmd_screen_decompose, True), ("validate", cmd_screen_validate, False)):
        p = leaf(sub, name, fn, f"{name} screens")
        p.add_argument("--in", dest="input", required=True)
        p.add_argument("--q", required=need_q)

    g = groups.add_parser("logcalc", help="log composition maps")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(sub, "gamma", cmd_logcalc_gamma, "one composition morphism")
    p.add_argument("--q", required=True)
    p.add_argument("--variant", choices=("log", "vlog"), default="log")
    p.add_argument("--dump", action="store_true", help="include the full morphism")
    p = leaf(sub, "verify", cmd_logcalc_verify, "exhaustive axiom sweep")
    p.add_argument("--max-arity", type=int, default=5)
    p.add_argument("--variant", choices=("log", "vlog", "both"), default="both")
    p.add_argument("--assoc-exhaustive", type=int, default=4, help="largest |L| checked on all pairs")
    p.add_argument("--unit-bound", type=int, default=3)

    g = groups.add_parser("kn", help="blow-up and Kato-Nakayama numerics")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(sub, "hopf", cmd_kn_hopf, "blow-up of C^m at the origin")
    p.add_argument("--m", type=int, required=True)
    p.add_argument("--samples", type=int, default=10_000)
    p = leaf(sub, "split", cmd_kn_split, "circle splitting catalog")
    p.add_argument("--case", required=True)
    p.add_argument("--samples", type=int, default=1000)
    p = leaf(sub, "s1", cmd_kn_s1, "S^1 action on blow-ups")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--samples", type=int, default=1000)
    p = leaf(sub, "cartesian", cmd_kn_cartesian, "strict Cartesian catalog")
    p.add_argument("--case", required=True)
    p.add_argument("--samples", type=int, default=1000)

    g = groups.add_parser("verify", help="run every campaign")
    sub = g.add_subparsers(dest="cmd", required=True, parser_class=_Parser)
    p = leaf(sub, "all", cmd_verify_all, "all campaigns with one seed")
    p.add_argument("--quick", action="store_true", help="smaller bounds, well under a minute")
    p.add_argument("--verbose", action="store_true", help="progress on stderr")
    return top


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (UsageError, InvalidInput, ResourceLimit) as exc:
        print(f"fmlog: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except FmlogError as exc:
        print(f"fmlog: check failed: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
