"""Seeded verification campaigns shared by the CLI and the test suite.

Every campaign returns a plain dict with at least ``checked`` and
``failures`` and never records timings, so reports are reproducible
byte for byte from the seed.
"""
from __future__ import annotations

import itertools
import random
from fractions import Fraction
from typing import Callable

from .errors import FmlogError
from .fm.directions import direction_canonical, fraction_str, g_map
from .fm.framed import framed_compose, framed_eq, framed_sigma, framed_unit
from .fm.points import (
    FMPoint,
    compose,
    coordinates,
    point_eq,
    point_from_config,
    rotate,
    sigma_act,
    subsets_ge2,
    unit,
)
from .fm.sampling import random_framed_point, random_point, random_rotation, random_surjection
from .logcalc import checks
from .logcalc.gamma import LOG, VLOG
from .nested import (
    enumerate_nested_collections,
    enumerate_stable_trees,
    internal_vertices,
    nested_to_tree,
    tree_to_nested,
)
from .screens import (
    covector_from_direction,
    direction_from_covector,
    screen_compose,
    screen_decompose,
    screen_from_config,
    screen_from_point,
    screen_validate,
    trivial_screen,
    vanishing_satisfied,
)

MAX_FAILURES = 10
STRATA_COUNTS = {1: 1, 2: 1, 3: 4, 4: 26}


def rng_for(seed: int, name: str) -> random.Random:
    # string seeds hash through sha512, so this is stable across processes
    return random.Random(f"{seed}:{name}")


class Tally:
    """Counts checks and keeps the first few failure witnesses."""

    def __init__(self):
        self.checked = 0
        self.failed = 0
        self.failures = []

    def check(self, ok: bool, witness: Callable[[], dict]):
        self.checked += 1
        if not ok:
            self.failed += 1
            if len(self.failures) < MAX_FAILURES:
                self.failures.append(witness())

    def as_dict(self, **extra) -> dict:
        out = {"checked": self.checked, "failed": self.failed, "failures": self.failures, "passed": not self.failed}
        out.update(extra)
        return out


def _q_str(q) -> str:
    return ",".join(str(q[i]) for i in sorted(q))


def _fibres(q) -> dict:
    fib = {}
    for m, r in sorted(q.items()):
        fib.setdefault(r, []).append(m)
    return fib


def _random_factors(rng, D, q, sampler=random_point):
    return {r: sampler(rng, D, F) for r, F in _fibres(q).items()}


def _random_perm(rng, labels) -> dict:
    labels = sorted(labels)
    img = labels[:]
    rng.shuffle(img)
    return dict(zip(labels, img))


# -- fm operad -------------------------------------------------------------------


def _fm_instance(rng, D, n):
    """A two-level composable tower over leaves 1..n."""
    L = list(range(1, n + 1))
    p = random_surjection(rng, L, rng.randint(1, n))
    q = random_surjection(rng, sorted(set(p.values())), rng.randint(1, len(set(p.values()))))
    x = random_point(rng, D, sorted(set(q.values())))
    ys = _random_factors(rng, D, q)
    zs = _random_factors(rng, D, p)
    return p, q, x, ys, zs


def fm_associativity(p, q, x, ys, zs) -> bool:
    lhs = compose(p, compose(q, x, ys), zs)
    qp = {l: q[p[l]] for l in p}
    inner = {}
    for r, F in _fibres(qp).items():
        pr = {l: p[l] for l in F}
        inner[r] = compose(pr, ys[r], {m: zs[m] for m in set(pr.values())})
    return point_eq(lhs, compose(qp, x, inner))


def fm_units(x: FMPoint) -> bool:
    lab = sorted(x.leaves)
    left = compose({i: 1 for i in lab}, unit(x.D, 1), {1: x})
    right = compose({i: i for i in lab}, x, {i: unit(x.D, i) for i in lab})
    return point_eq(left, x) and point_eq(right, x)


def fm_equivariance(rng, q, x, ys) -> bool:
    """Both the source and the root permutation laws."""
    c = compose(q, x, ys)
    sigma = _random_perm(rng, q)
    inv = {v: k for k, v in sigma.items()}
    q2 = {m: q[inv[m]] for m in sigma.values()}
    ys2 = {r: sigma_act({i: sigma[i] for i in y.leaves}, y) for r, y in ys.items()}
    src_ok = point_eq(sigma_act(sigma, c), compose(q2, x, ys2))
    pi = _random_perm(rng, x.leaves)
    q3 = {m: pi[r] for m, r in q.items()}
    root_ok = point_eq(c, compose(q3, sigma_act(pi, x), {pi[r]: y for r, y in ys.items()}))
    return src_ok and root_ok


def coordinate_law(q, x, ys) -> tuple:
    """(ok, first bad subset) for the piecewise coordinate formula of a composite."""
    c = compose(q, x, ys)
    for I in subsets_ge2(c.leaves):
        rs = {q[i] for i in I}
        if len(rs) == 1:
            (r,) = rs
            want = coordinates(ys[r], I)
        else:
            want = g_map({i: q[i] for i in I}, coordinates(x, rs))
        if coordinates(c, I) != want:
            return False, sorted(I)
    return True, None


def fm_rotation(rng, q, x, ys) -> bool:
    R = random_rotation(rng, x.D)
    lhs = rotate(R, compose(q, x, ys))
    rhs = compose(q, rotate(R, x), {r: rotate(R, y) for r, y in ys.items()})
    return point_eq(lhs, rhs)


def fm_axioms(D: int, n: int, trials: int, seed: int, rotations: bool = True) -> dict:
    """Associativity, units, equivariance and (optionally) SO(D) compatibility."""
    rng = rng_for(seed, f"fm:{D}:{n}")
    aux = rng_for(seed, f"fm-aux:{D}:{n}")
    t = Tally()
    for k in range(trials):
        p, q, x, ys, zs = _fm_instance(rng, D, n)
        where = lambda: {"trial": k, "p": _q_str(p), "q": _q_str(q)}  # noqa: E731
        t.check(fm_associativity(p, q, x, ys, zs), lambda: dict(where(), law="associativity"))
        t.check(fm_units(compose(p, compose(q, x, ys), zs)), lambda: dict(where(), law="unit"))
        t.check(fm_equivariance(aux, p, compose(q, x, ys), zs), lambda: dict(where(), law="equivariance"))
        if rotations and D >= 2 and k % 5 == 0:
            t.check(fm_rotation(aux, p, compose(q, x, ys), zs), lambda: dict(where(), law="rotation"))
    return t.as_dict(D=D, n=n, trials=trials)


def fm_coordinate_law(D: int, n: int, trials: int, seed: int) -> dict:
    """Every coordinate of both composites in each instance that :func:`fm_axioms` sees."""
    rng = rng_for(seed, f"fm:{D}:{n}")
    t = Tally()
    for k in range(trials):
        p, q, x, ys, zs = _fm_instance(rng, D, n)
        for qq, root, factors in ((q, x, ys), (p, compose(q, x, ys), zs)):
            ok, bad = coordinate_law(qq, root, factors)
            t.check(ok, lambda: {"trial": k, "q": _q_str(qq), "subset": bad})
    return t.as_dict(D=D, n=n, trials=trials)


def fm_suite(trials: int, seed: int, dims=(1, 2, 3, 4), arities=(1, 2, 3, 4, 5)) -> dict:
    out = {}
    for D in dims:
        for n in arities:
            out[f"D={D},n={n}"] = fm_axioms(D, n, trials, seed)
    return _merge(out)


def coordinate_suite(trials: int, seed: int, dims=(1, 2, 3, 4), arities=(1, 2, 3, 4, 5)) -> dict:
    out = {}
    for D in dims:
        for n in arities:
            out[f"D={D},n={n}"] = fm_coordinate_law(D, n, trials, seed)
    return _merge(out)


# -- framed ------------------------------------------------------------------------


def framed_suite(trials: int, seed: int, ds=(1, 2), max_n: int = 4) -> dict:
    out = {}
    for d in ds:
        rng = rng_for(seed, f"framed:{d}")
        t = Tally()
        for k in range(trials):
            n = rng.randint(1, max_n)
            L = list(range(1, n + 1))
            p = random_surjection(rng, L, rng.randint(1, n))
            M = sorted(set(p.values()))
            q = random_surjection(rng, M, rng.randint(1, len(M)))
            X = random_framed_point(rng, d, sorted(set(q.values())))
            Ys = {r: random_framed_point(rng, d, F) for r, F in _fibres(q).items()}
            Zs = {m: random_framed_point(rng, d, F) for m, F in _fibres(p).items()}
            where = {"trial": k, "p": _q_str(p), "q": _q_str(q)}

            lhs = framed_compose(p, framed_compose(q, X, Ys), Zs)
            qp = {l: q[p[l]] for l in p}
            inner = {}
            for r, F in _fibres(qp).items():
                pr = {l: p[l] for l in F}
                inner[r] = framed_compose(pr, Ys[r], {m: Zs[m] for m in set(pr.values())})
            t.check(framed_eq(lhs, framed_compose(qp, X, inner)), lambda: dict(where, law="associativity"))

            C = framed_compose(q, X, Ys)
            lab = sorted(C.leaves)
            left = framed_compose({i: 1 for i in lab}, framed_unit(d, 1), {1: C})
            right = framed_compose({i: i for i in lab}, C, {i: framed_unit(d, i) for i in lab})
            t.check(framed_eq(left, C) and framed_eq(right, C), lambda: dict(where, law="unit"))

            sigma = _random_perm(rng, q)
            inv = {v: k2 for k2, v in sigma.items()}
            q2 = {m: q[inv[m]] for m in sigma.values()}
            Ys2 = {r: framed_sigma({i: sigma[i] for i in Y.leaves}, Y) for r, Y in Ys.items()}
            t.check(framed_eq(framed_sigma(sigma, C), framed_compose(q2, X, Ys2)), lambda: dict(where, law="source equivariance"))
            pi = _random_perm(rng, X.leaves)
            q3 = {m: pi[r] for m, r in q.items()}
            t.check(
                framed_eq(C, framed_compose(q3, framed_sigma(pi, X), {pi[r]: Y for r, Y in Ys.items()})),
                lambda: dict(where, law="root equivariance"),
            )
        out[f"d={d}"] = t.as_dict(d=d, trials=trials)
    return _merge(out)


# -- strata ----------------------------------------------------------------------------


def strata_suite(max_n: int = 6) -> dict:
    t = Tally()
    counts = {}
    for n in range(1, max_n + 1):
        trees = enumerate_stable_trees(n)
        oracle = enumerate_nested_collections(n)
        counts[str(n)] = len(trees)
        if n in STRATA_COUNTS:
            t.check(len(trees) == STRATA_COUNTS[n], lambda: {"n": n, "trees": len(trees), "want": STRATA_COUNTS[n]})
        t.check(len(trees) == len(oracle), lambda: {"n": n, "trees": len(trees), "oracle": len(oracle)})
        images = [tree_to_nested(tr) for tr in trees]
        t.check(sorted(images, key=lambda c: c.sort_key()) == oracle, lambda: {"n": n, "law": "tree to nested is onto the oracle"})
        t.check(len(set(images)) == len(images), lambda: {"n": n, "law": "tree to nested is injective"})
        for c in oracle:
            t.check(tree_to_nested(nested_to_tree(c)) == c, lambda: {"n": n, "collection": c.to_json()})
        for tr in trees:
            t.check(nested_to_tree(tree_to_nested(tr)) == tr, lambda: {"n": n, "law": "tree round trip"})
    return t.as_dict(counts=counts, max_n=max_n)


# -- screens -------------------------------------------------------------------------


def _cluster_surjection(rng, x: FMPoint) -> dict:
    """q whose fibres are disjoint tree clusters (or singletons) of x."""
    free = set(x.leaves)
    verts = [v for v in internal_vertices(x.tree) if v.leaves != x.leaves]
    rng.shuffle(verts)
    blocks = []
    for v in verts:
        if v.leaves <= free and rng.random() < 0.6:
            blocks.append(v.leaves)
            free -= v.leaves
    blocks += [frozenset((i,)) for i in free]
    blocks.sort(key=min)
    return {m: r for r, B in enumerate(blocks, start=1) for m in B}


def screen_suite(trials: int, seed: int, max_n: int = 4, max_d: int = 3) -> dict:
    rng = rng_for(seed, "screens")
    t = Tally()
    for k in range(trials):
        d = rng.randint(1, max_d)
        n = rng.randint(1, max_n)
        L = list(range(1, n + 1))
        q = random_surjection(rng, L, rng.randint(1, n))
        fib = _fibres(q)
        s0 = screen_from_point(random_point(rng, d, sorted(fib))) if len(fib) > 1 else trivial_screen(1, d)
        ss = {
            r: screen_from_point(random_point(rng, d, F)) if len(F) > 1 else trivial_screen(F[0], d)
            for r, F in fib.items()
        }
        where = {"trial": k, "d": d, "q": _q_str(q)}
        s = screen_compose(q, s0, ss)
        t.check(screen_validate(s)[0], lambda: dict(where, law="composite is compatible"))
        t.check(all(vanishing_satisfied(s, F) for F in fib.values()), lambda: dict(where, law="vanishing"))
        try:
            b0, bs = screen_decompose(q, s)
            ok = b0 == s0 and bs == ss
        except FmlogError:
            ok = False
        t.check(ok, lambda: dict(where, law="decompose after compose"))

        y = random_point(rng, d, L)
        s = screen_from_point(y)
        q2 = _cluster_surjection(rng, y)
        try:
            b0, bs = screen_decompose(q2, s)
            ok = screen_compose(q2, b0, bs) == s
        except FmlogError:
            ok = False
        t.check(ok, lambda: {"trial": k, "d": d, "q": _q_str(q2), "law": "compose after decompose"})
    return t.as_dict(trials=trials)


# -- bridge --------------------------------------------------------------------------


def _negate(u):
    return direction_canonical({i: tuple(-c for c in v) for i, v in u.as_dict().items()})


def bridge_suite(trials: int, seed: int, max_n: int = 5, max_d: int = 3) -> dict:
    rng = rng_for(seed, "bridge")
    t = Tally()
    for k in range(trials):
        d = rng.randint(1, max_d)
        n = rng.randint(2, max_n)
        pts = set()
        while len(pts) < n:
            pts.add(tuple(Fraction(rng.randint(-9, 9), rng.randint(1, 4)) for _ in range(d)))
        pts = sorted(pts)
        rng.shuffle(pts)
        x = point_from_config(d, pts)
        s = screen_from_config(d, pts)
        for I in subsets_ge2(x.leaves):
            u = coordinates(x, I)
            back = direction_from_covector(I, d, s.phi[I])
            ok = covector_from_direction(u) == s.phi[I] and back in (u, _negate(u))
            t.check(ok, lambda: {"trial": k, "d": d, "subset": sorted(I), "points": [[fraction_str(c) for c in p] for p in pts]})
    return t.as_dict(trials=trials)


# -- log calculus -----------------------------------------------------------------------


def log_suite(max_arity: int = 6, assoc_exhaustive: int = 4) -> dict:
    """Legality, associativity, equivariance, units and the strict-unit search.

    Associativity is exhaustive over all composable pairs with |L| up to
    ``assoc_exhaustive`` and runs on order-preserving representatives above that.
    """
    out = {"legality": checks.legality_sweep(max_arity)}
    for variant in (LOG, VLOG):
        pairs = itertools.chain(
            *(checks.all_pairs(s) for s in range(1, assoc_exhaustive + 1)),
            *(checks.monotone_pairs(s) for s in range(assoc_exhaustive + 1, max_arity + 1)),
        )
        out[f"associativity_{variant}"] = checks.check_associativity(pairs, variant)
        out[f"equivariance_{variant}"] = checks.check_equivariance(max_arity, variant)
    t = Tally()
    for variant in (LOG, VLOG):
        for m in range(1, max_arity + 1):
            t.check(checks.left_unit(m, variant), lambda: {"law": "left unit", "m": m, "structures": variant})
            t.check(checks.right_unit(m, variant), lambda: {"law": "right unit", "n": m, "structures": variant})
    out["units_vlog"] = t.as_dict()
    out["strict_unit_search"] = search = checks.strict_unit_search(bound=3)
    search["checked"] = search["candidates"]
    search["failures"] = [{"strict_unit": u} for u in search["strict_units"]]
    for v in out.values():
        v["passed"] = not v["failures"]
    out["max_arity"] = max_arity
    return _merge(out)


# -- kn ------------------------------------------------------------------------------------


def kn_suite(seed: int, samples: int = 10_000, tol: float = 1e-9, small: int = 1000) -> dict:
    from .kn import campaigns as kc

    out = {}
    for m in (1, 2):
        out[f"hopf_m={m}"] = kc.hopf_verify(m, k=samples, tol=tol, seed=seed)
    for case in kc.SPLIT_CASES:
        out[f"split_{case}"] = kc.circle_split_verify(case, k=small, tol=tol, seed=seed)
    for n in (1, 2, 3):
        out[f"s1_n={n}"] = kc.s1_action_verify(n, k=small, tol=tol, seed=seed)
    for case in kc.CARTESIAN_CASES:
        out[f"cartesian_{case}"] = kc.strict_cartesian_verify(case, k=small, tol=tol, seed=seed)
    out["order_independence"] = kc.kn_order_independence(k=small // 2, tol=tol, seed=seed)
    out["s2_example"] = kc.s2_example(k=small, tol=tol, seed=seed)
    out["functoriality"] = kc.kn_functoriality(seed=seed)
    for v in out.values():
        v["passed"] = not v["failures"]
    merged = _merge(out)
    merged["max_error"] = max(v["max_error"] for v in out.values())
    return merged


# -- everything -------------------------------------------------------------------------------


def _merge(parts: dict) -> dict:
    cases = {k: v for k, v in parts.items() if isinstance(v, dict)}
    extra = {k: v for k, v in parts.items() if not isinstance(v, dict)}
    return dict(
        extra,
        cases=cases,
        checked=sum(v["checked"] for v in cases.values()),
        passed=all(v["passed"] for v in cases.values()),
        failures=[dict(f, case=k) for k, v in sorted(cases.items()) for f in v["failures"]][:MAX_FAILURES],
    )


QUICK = {"fm_trials": 100, "framed_trials": 100, "strata_n": 6, "screen_trials": 200, "bridge_trials": 100,
         "log_arity": 5, "log_assoc": 4, "kn_samples": 5000, "kn_small": 500}
FULL = {"fm_trials": 500, "framed_trials": 200, "strata_n": 6, "screen_trials": 200, "bridge_trials": 100,
        "log_arity": 6, "log_assoc": 4, "kn_samples": 10_000, "kn_small": 1000}


def verify_all(seed: int, quick: bool = False, tol: float = 1e-9, progress: Callable[[str], None] | None = None) -> dict:
    b = QUICK if quick else FULL
    steps = [
        ("strata", lambda: strata_suite(b["strata_n"])),
        ("fm_axioms", lambda: fm_suite(b["fm_trials"], seed)),
        ("coordinate_law", lambda: coordinate_suite(b["fm_trials"], seed)),
        ("framed", lambda: framed_suite(b["framed_trials"], seed)),
        ("screens", lambda: screen_suite(b["screen_trials"], seed)),
        ("bridge", lambda: bridge_suite(b["bridge_trials"], seed)),
        ("logcalc", lambda: log_suite(b["log_arity"], b["log_assoc"])),
        ("kn", lambda: kn_suite(seed, b["kn_samples"], tol, b["kn_small"])),
    ]
    report = {}
    for name, fn in steps:
        if progress:
            progress(name)
        report[name] = fn()
    return {
        "seed": seed,
        "quick": quick,
        "suites": report,
        "passed": all(r["passed"] for r in report.values()),
    }
