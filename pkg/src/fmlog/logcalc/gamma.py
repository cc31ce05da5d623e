"""Log extensions of the composition maps T_n x prod T_{q^-1(r)} -> T_M.

Case names follow the usual split: the easy cases (a) I strictly inside a
fibre, (b) I a union of at least two fibres, (c) I not nested with the
fibres; and the hard cases where the pulled-back section vanishes: (hard a)
I = M, (hard b) I a whole fibre, (hard c) a singleton inside a bigger fibre.
"""
from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from typing import Mapping

from ..errors import InternalConsistencyError, InvalidInput
from .morphisms import DF, VIRTUAL, LogMorphism, legality_df, legality_virtual
from .structures import Factor, Structure, add_into, nonempty_subsets

LOG, VLOG = "log", "vlog"


def fibres(q: Mapping[int, int]) -> dict:
    fib = {}
    for m, r in q.items():
        fib.setdefault(r, set()).add(m)
    return {r: frozenset(v) for r, v in sorted(fib.items())}


@dataclass(frozen=True)
class Tags:
    """Factor tags used by a composition morphism.

    The fibre over r is tagged r itself, or (prefix, r) when a prefix is set.
    """

    root: object = 0
    prefix: object = None
    out: object = "out"

    def fibre(self, r):
        return r if self.prefix is None else (self.prefix, r)


def composition_source(q, kind: str, tags: Tags | None = None) -> Structure:
    tags = tags or Tags()
    fib = fibres(q)
    return Structure([Factor(tags.root, kind, frozenset(fib))] + [Factor(tags.fibre(r), kind, F) for r, F in fib.items()])


def classify(q: Mapping[int, int], I: frozenset, fib: dict | None = None) -> tuple:
    """(case name, fibre label or None)."""
    fib = fib or fibres(q)
    M = frozenset(q)
    if not I or not I <= M:
        raise InvalidInput("I must be a nonempty subset of the source of q")
    qI = frozenset(q[i] for i in I)
    if len(qI) == 1:
        (r,) = qI
        if I == fib[r]:
            return "hard b", r
        return ("hard c", r) if len(I) == 1 else ("a", r)
    if I == frozenset().union(*(fib[r] for r in qI)):
        return ("hard a", None) if I == M else ("b", None)
    return "c", None


def pullback_row(q: Mapping[int, int], I, variant: str = LOG, tags: Tags | None = None, fib: dict | None = None) -> tuple:
    """(exponents over source bundles, pulled-back section, case) for target bundle I."""
    tags = tags or Tags()
    fib = fib or fibres(q)
    I = frozenset(I)
    if variant not in (LOG, VLOG):
        raise InvalidInput(f"unknown variant {variant!r}")
    if variant == VLOG and len(I) < 2:
        raise InvalidInput("K structures have no singleton bundles")
    case, r = classify(q, I, fib)
    n_set = frozenset(fib)
    root = tags.root
    if case == "a":
        return {(tags.fibre(r), I): 1}, {(tags.fibre(r), I): 1}, case
    if case == "b":
        J = frozenset(q[i] for i in I)
        return {(root, J): 1}, {(root, J): 1}, case
    if case == "c":
        return {}, {}, case
    if case == "hard a":
        return {(root, n_set): 1}, None, case
    if case == "hard c":
        return {(tags.fibre(r), I): 1}, None, case
    # hard b: I is the whole fibre over r
    row = {(tags.fibre(r), I): 1}
    if variant == LOG:
        row[(root, frozenset((r,)))] = 1
    else:
        for J in nonempty_subsets(n_set):
            if r in J and len(J) >= 2:
                row[(root, J)] = -1
    return row, None, case


def _gamma(q, variant, tags):
    return _gamma_cached(tuple(sorted(q.items())), variant, tags or Tags())


# Morphisms are treated as immutable, so sharing cached instances is safe.
@lru_cache(maxsize=2048)
def _gamma_cached(items, variant, tags):
    q = dict(items)
    kind = "T" if variant == LOG else "K"
    M = frozenset(q)
    if not M:
        raise InvalidInput("q must have a nonempty source")
    source = composition_source(q, kind, tags)
    target = Structure([Factor(tags.out, kind, M)])
    rows, pulled = {}, {}
    fib = fibres(q)
    for key in target.keys:
        row, sec, _ = pullback_row(q, key[1], variant, tags, fib)
        rows[key], pulled[key] = row, sec
    m = LogMorphism(source, target, rows, pulled, DF if variant == LOG else VIRTUAL, label=f"gamma_{variant}")
    ok, w = (legality_df if variant == LOG else legality_virtual)(m)
    if not ok:
        raise InternalConsistencyError(f"gamma_{variant} fails its legality rule at {w}")
    return m


def gamma_log(q: Mapping[int, int], tags: Tags | None = None) -> LogMorphism:
    return _gamma(q, LOG, tags)


def gamma_vlog(q: Mapping[int, int], tags: Tags | None = None) -> LogMorphism:
    return _gamma(q, VLOG, tags)


def unit_vlog(variant: str = LOG, tag=0, label: int = 1) -> LogMorphism:
    """Virtual unit from the point to the arity-one structure.

    By default the target is T_{d,1}: one bundle with zero section and an
    empty exponent row, virtual-legal but not DF-legal.  K_{d,1} has no
    bundles at all, so with ``variant=VLOG`` the unit is the empty morphism.
    """
    kind = "T" if variant == LOG else "K"
    target = Structure([Factor(tag, kind, frozenset((label,)))])
    rows = {k: {} for k in target.keys}
    pulled = {k: None for k in target.keys}
    return LogMorphism(Structure([]), target, rows, pulled, VIRTUAL, label="unit")


def pullback_class(q: Mapping[int, int], I, variant: str = LOG, tags: Tags | None = None) -> dict:
    """Class of gamma^* O(I) in the lattice of the source product."""
    kind = "T" if variant == LOG else "K"
    source = composition_source(q, kind, tags)
    row, _, _ = pullback_row(q, I, variant, tags)
    acc = {}
    for x, e in row.items():
        add_into(acc, source.bundle_class(x), e)
    return acc


# -- independent oracle ------------------------------------------------------


def _screen_pullback(q, Ip: frozenset, tags: Tags) -> dict:
    """gamma^* M_{I'} following the screen composition formula."""
    fib = fibres(q)
    qI = frozenset(q[i] for i in Ip)
    if len(qI) == 1:
        (r,) = qI
        return {(tags.fibre(r), J): -1 for J in nonempty_subsets(fib[r]) if Ip <= J}
    return {(tags.root, J): -1 for J in nonempty_subsets(fib) if qI <= J}


def oracle_class(q: Mapping[int, int], I, tags: Tags | None = None) -> dict:
    """gamma^* O(I) by Moebius inversion of M_I = -sum_{I' >= I} O(I').

    Independent of the case analysis; only uses how universal screen
    bundles pull back along composition.
    """
    tags = tags or Tags()
    I = frozenset(I)
    M = frozenset(q)
    if len(M) == 1:
        return {}
    if len(I) == 1:
        acc = {}
        (i,) = I
        for J in nonempty_subsets(M):
            if len(J) >= 2 and i in J:
                add_into(acc, oracle_class(q, J, tags), -1)
        return acc
    acc = {}
    for Ip in nonempty_subsets(M):
        if I <= Ip:
            sign = -1 if len(Ip - I) % 2 == 0 else 1
            add_into(acc, _screen_pullback(q, Ip, tags), sign)
    return acc
