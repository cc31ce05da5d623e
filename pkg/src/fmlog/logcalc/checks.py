"""Exhaustive and representative axiom sweeps for the log composition maps."""
from __future__ import annotations

import itertools
from typing import Mapping

from .gamma import LOG, VLOG, Tags, fibres, gamma_log, gamma_vlog, pullback_row, unit_vlog
from .morphisms import (
    LogMorphism,
    compose_morphisms,
    identity,
    legality_df,
    legality_virtual,
    product_morphism,
    relabel_morphism,
    retag,
)
from .structures import ZERO, Factor, Structure, nonempty_subsets


def surjections(m: int, n: int | None = None):
    """All surjections [m] -> [n] (every n when n is None), as dicts."""
    ns = range(1, m + 1) if n is None else [n]
    for k in ns:
        target = set(range(1, k + 1))
        for img in itertools.product(range(1, k + 1), repeat=m):
            if set(img) == target:
                yield dict(zip(range(1, m + 1), img))


def monotone_surjections(m: int):
    """Nondecreasing surjections [m] -> [k], one per composition of m."""
    for cuts in itertools.product((0, 1), repeat=m - 1):
        q, r = {1: 1}, 1
        for i, c in enumerate(cuts, start=2):
            r += c
            q[i] = r
        yield q


def gamma(q, variant, tags=None) -> LogMorphism:
    return gamma_log(q, tags) if variant == LOG else gamma_vlog(q, tags)


def _kind(variant):
    return "T" if variant == LOG else "K"


def sigma_log(sigma: Mapping[int, int], structure: Structure, out_tag="out") -> LogMorphism:
    """Relabelling T_N -> T_{sigma N}: the bundle of J pulls back to that of sigma^-1 J."""
    if len(structure.factors) != 1:
        raise ValueError("sigma_log acts on a single factor")
    (f,) = structure.factors
    inv = {v: k for k, v in sigma.items()}
    target = Structure([Factor(out_tag, f.kind, frozenset(sigma[i] for i in f.labels))])
    key_map = {(out_tag, J): (f.tag, frozenset(inv[j] for j in J)) for _, J in target.keys}
    return relabel_morphism(structure, target, key_map)


# -- associativity -------------------------------------------------------------


def associativity_pair(p: Mapping[int, int], q: Mapping[int, int], variant: str = LOG) -> tuple:
    """Both bracketings of L -p-> M -q-> [n]; returns (lhs, rhs)."""
    kind = _kind(variant)
    outer = gamma(p, variant, Tags("mid", "P", "out"))
    inner = gamma(q, variant, Tags("top", "Q", "mid"))
    rest = Structure(f for f in outer.source.factors if f.tag != "mid")
    lhs = compose_morphisms(outer, product_morphism(inner, identity(rest)))

    qp = {l: q[p[l]] for l in p}
    pieces = [identity(Structure([Factor("top", kind, frozenset(q.values()))]))]
    for r, F in fibres(qp).items():
        pr = {l: p[l] for l in F}
        pieces.append(gamma(pr, variant, Tags(("Q", r), "P", ("mid", r))))
    top = gamma(qp, variant, Tags("top", "mid", "out"))
    rhs = compose_morphisms(top, product_morphism(*pieces))
    return lhs, rhs


def check_associativity(pairs, variant: str = LOG) -> dict:
    checked, failures = 0, []
    for p, q in pairs:
        lhs, rhs = associativity_pair(p, q, variant)
        checked += 1
        if lhs != rhs:
            failures.append({"p": _q_str(p), "q": _q_str(q)})
    return {"checked": checked, "failures": failures}


def all_pairs(size: int):
    for k in range(1, size + 1):
        for p in surjections(size, k):
            for q in surjections(k):
                yield p, q


def monotone_pairs(size: int):
    for p in monotone_surjections(size):
        for q in monotone_surjections(max(p.values())):
            yield p, q


# -- equivariance ----------------------------------------------------------------


def source_equivariance(q: Mapping[int, int], sigma: Mapping[int, int], variant: str = LOG) -> bool:
    """sigma o gamma_q == gamma_{q sigma^-1} o (id x sigma restricted to fibres)."""
    kind = _kind(variant)
    g = gamma(q, variant, Tags(0, None, "mid"))
    lhs = compose_morphisms(sigma_log(sigma, g.target, "out"), g)
    inv = {v: k for k, v in sigma.items()}
    q2 = {m: q[inv[m]] for m in sigma.values()}
    g2 = gamma(q2, variant, Tags(0, "s", "out"))
    pieces = [identity(Structure([Factor(0, kind, frozenset(q.values()))]))]
    for r, F in fibres(q).items():
        pieces.append(sigma_log({i: sigma[i] for i in F}, Structure([Factor(r, kind, F)]), ("s", r)))
    rhs = compose_morphisms(g2, product_morphism(*pieces))
    return lhs == rhs


def root_equivariance(q: Mapping[int, int], pi: Mapping[int, int], variant: str = LOG) -> bool:
    """gamma_q == gamma_{pi q} o (pi on the root x fibre r renamed pi(r))."""
    kind = _kind(variant)
    lhs = gamma(q, variant, Tags(0, None, "out"))
    q2 = {m: pi[r] for m, r in q.items()}
    g2 = gamma(q2, variant, Tags("p0", "f", "out"))
    pieces = [sigma_log(pi, Structure([Factor(0, kind, frozenset(q.values()))]), "p0")]
    for r, F in fibres(q).items():
        pieces.append(retag(Structure([Factor(r, kind, F)]), {r: ("f", pi[r])})[1])
    rhs = compose_morphisms(g2, product_morphism(*pieces))
    return lhs == rhs


def adjacent_transpositions(labels):
    labels = sorted(labels)
    for a, b in zip(labels, labels[1:]):
        s = {i: i for i in labels}
        s[a], s[b] = b, a
        yield s


def check_equivariance(max_arity: int, variant: str = LOG) -> dict:
    """Both equivariance laws for every surjection, on adjacent transpositions."""
    checked, failures = 0, []
    for m in range(1, max_arity + 1):
        for q in surjections(m):
            for s in adjacent_transpositions(q):
                checked += 1
                if not source_equivariance(q, s, variant):
                    failures.append({"law": "source", "q": _q_str(q), "sigma": _q_str(s)})
            for pi in adjacent_transpositions(q.values()):
                checked += 1
                if not root_equivariance(q, pi, variant):
                    failures.append({"law": "root", "q": _q_str(q), "sigma": _q_str(pi)})
    return {"checked": checked, "failures": failures}


# -- units -------------------------------------------------------------------------


def left_unit(m: int, variant: str = LOG) -> bool:
    """gamma_{M -> [1]} o (unit x id) is the identity of the M factor."""
    kind = _kind(variant)
    q = {i: 1 for i in range(1, m + 1)}
    g = gamma(q, variant, Tags(0, None, "out"))
    arg = Structure([Factor(1, kind, frozenset(q))])
    comp = compose_morphisms(g, product_morphism(unit_vlog(variant, tag=0), identity(arg)))
    return comp == retag(arg, {1: "out"})[1]


def right_unit(n: int, variant: str = LOG) -> bool:
    """gamma_{id} o (id x units) is the identity of the root factor."""
    kind = _kind(variant)
    q = {i: i for i in range(1, n + 1)}
    g = gamma(q, variant, Tags(0, None, "out"))
    root = Structure([Factor(0, kind, frozenset(q))])
    units = [unit_vlog(variant, tag=r, label=r) for r in q]
    comp = compose_morphisms(g, product_morphism(identity(root), *units))
    return comp == retag(root, {0: "out"})[1]


# -- no strict unit ------------------------------------------------------------------


def point_catalog(max_bundles: int = 2):
    """DF structures on a point: up to ``max_bundles`` bundles, each zero or unit."""
    for b in range(max_bundles + 1):
        yield from itertools.product((ZERO, "unit"), repeat=b)


def strict_unit_search(bound: int = 3, max_bundles: int = 2, max_arity: int = 3) -> dict:
    """Search candidate units P -> T_1 with exponents in [-bound, bound].

    A candidate passes the unit equations when inserting it at the root of
    gamma_{M -> [1]} gives the identity of T_M with no dependence on P.
    """
    candidates, df_legal, unit_ok, found = 0, 0, 0, []
    for sections in point_catalog(max_bundles):
        P = Structure([Factor("pt", "P", frozenset(), tuple(sections))])
        target = Structure([Factor(0, "T", frozenset((1,)))])
        (tkey,) = target.keys
        for exps in itertools.product(range(-bound, bound + 1), repeat=len(P.keys)):
            u = LogMorphism(P, target, {tkey: {k: e for k, e in zip(P.keys, exps) if e}}, {tkey: None})
            candidates += 1
            legal = legality_df(u)[0]
            df_legal += legal
            eq = all(_unit_equation(u, m) for m in range(1, max_arity + 1))
            unit_ok += eq
            if legal and eq:
                found.append({"sections": list(sections), "exponents": list(exps)})
    return {
        "bound": bound,
        "max_bundles": max_bundles,
        "candidates": candidates,
        "df_legal": df_legal,
        "satisfy_unit_equations": unit_ok,
        "strict_units": found,
    }


def _unit_equation(u: LogMorphism, m: int) -> bool:
    q = {i: 1 for i in range(1, m + 1)}
    g = gamma_log(q, Tags(0, None, "out"))
    arg = Structure([Factor(1, "T", frozenset(q))])
    comp = compose_morphisms(g, product_morphism(u, identity(arg)))
    want = retag(arg, {1: "out"})[1]
    return comp.rows == want.rows and comp.pulled == want.pulled


# -- section bookkeeping ------------------------------------------------------------


def section_bookkeeping(q: Mapping[int, int], variant: str = LOG) -> bool:
    """Zero pullback exactly on M, fibres and singletons; unit exactly in case (c)."""
    fib = fibres(q)
    M = frozenset(q)
    special = {M} | set(fib.values()) | {frozenset((i,)) for i in M}
    for I in nonempty_subsets(M):
        if variant == VLOG and len(I) < 2:
            continue
        _, sec, case = pullback_row(q, I, variant)
        if (sec is None) != (I in special):
            return False
        if (sec == {}) != (case == "c"):
            return False
    return True


def legality_sweep(max_arity: int) -> dict:
    """gamma_log DF-legal, gamma_vlog virtual-legal (and DF-illegal exactly when expected)."""
    checked, failures = 0, []
    for m in range(1, max_arity + 1):
        for q in surjections(m):
            checked += 1
            log = gamma_log(q)
            vlog = gamma_vlog(q)
            fib = fibres(q)
            expect_illegal = len(fib) >= 2 and any(len(F) >= 2 for F in fib.values())
            if (
                not legality_df(log)[0]
                or not legality_virtual(vlog)[0]
                or legality_df(vlog)[0] == expect_illegal
                or not section_bookkeeping(q, LOG)
                or not section_bookkeeping(q, VLOG)
            ):
                failures.append({"q": _q_str(q)})
    return {"checked": checked, "failures": failures}


def _q_str(q: Mapping[int, int]) -> str:
    return ",".join(str(q[i]) for i in sorted(q))
