"""DF log structures on products of T_{d,N} and K_{d,N}, as divisor-lattice data.

Every bundle is keyed by ``(tag, I)``: ``tag`` names the factor of the
product, ``I`` is a subset of that factor's labels.  Classes live in the
free abelian group on the symbols ``(tag, J)`` with ``|J| >= 2``; they are
plain ``{symbol: int}`` dicts with zero entries dropped.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from functools import lru_cache
from typing import Iterable

from ..errors import InvalidInput
from ..nested import parse_subset_key, subset_key

DIVISOR, ZERO, UNIT = "divisor", "zero", "unit"


def nonempty_subsets(labels) -> tuple:
    return _nonempty_subsets(frozenset(labels))


@lru_cache(maxsize=4096)
def _nonempty_subsets(labels: frozenset) -> tuple:
    labels = sorted(labels)
    return tuple(frozenset(c) for k in range(1, len(labels) + 1) for c in itertools.combinations(labels, k))


def add_into(acc: dict, vec: dict, scale: int = 1) -> dict:
    for k, v in vec.items():
        s = acc.get(k, 0) + scale * v
        if s:
            acc[k] = s
        else:
            acc.pop(k, None)
    return acc


@dataclass(frozen=True)
class Factor:
    """One factor of a product: T (all nonempty I), K (|I| >= 2) or a point P.

    Points carry an explicit tuple of section kinds, one trivial-class
    bundle per entry, keyed by singletons {1}, {2}, ...
    """

    tag: object
    kind: str
    labels: frozenset
    point_sections: tuple = ()

    def __post_init__(self):
        object.__setattr__(self, "labels", frozenset(self.labels))
        if self.kind not in ("T", "K", "P"):
            raise InvalidInput(f"unknown factor kind {self.kind!r}")
        if self.kind != "P" and not self.labels:
            raise InvalidInput("factor needs a nonempty label set")

    def subsets(self) -> tuple:
        return _factor_subsets(self.kind, self.labels, len(self.point_sections))

    def section(self, I: frozenset) -> str:
        if self.kind == "P":
            return self.point_sections[min(I) - 1]
        return ZERO if len(I) == 1 or I == self.labels else DIVISOR

    def bundle_class(self, I: frozenset) -> dict:
        if self.kind == "P" or len(self.labels) == 1:
            return {}
        if len(I) >= 2:
            return {(self.tag, I): 1}
        (i,) = I
        return {(self.tag, J): -1 for J in self.subsets() if len(J) >= 2 and i in J} if self.kind == "T" else {}


@lru_cache(maxsize=4096)
def _factor_subsets(kind: str, labels: frozenset, points: int) -> tuple:
    if kind == "P":
        return tuple(frozenset((k + 1,)) for k in range(points))
    subs = nonempty_subsets(labels)
    return subs if kind == "T" else tuple(s for s in subs if len(s) >= 2)


@lru_cache(maxsize=65536)
def _factor_keys(f: Factor) -> tuple:
    return tuple((f.tag, I) for I in f.subsets())


@lru_cache(maxsize=65536)
def _factor_sections(f: Factor) -> dict:
    return {(f.tag, I): f.section(I) for I in f.subsets()}


class Structure:
    """An ordered DF log structure on a product of factors."""

    def __init__(self, factors: Iterable[Factor]):
        self.factors = tuple(factors)
        tags = [f.tag for f in self.factors]
        if len(set(tags)) != len(tags):
            raise InvalidInput("factor tags must be distinct")
        self.by_tag = {f.tag: f for f in self.factors}
        self.keys = [k for f in self.factors for k in _factor_keys(f)]
        self.sections = {}
        for f in self.factors:
            self.sections.update(_factor_sections(f))

    def __eq__(self, other):
        return isinstance(other, Structure) and set(self.factors) == set(other.factors)

    def __hash__(self):
        return hash(frozenset(self.factors))

    def __repr__(self):
        return "Structure(" + ", ".join(f"{f.kind}{sorted(f.labels)}@{f.tag!r}" for f in self.factors) + ")"

    def __len__(self):
        return len(self.keys)

    def bundle_class(self, key) -> dict:
        tag, I = key
        return self.by_tag[tag].bundle_class(I)

    def to_json(self) -> list:
        return [
            {"bundle": key_str(k), "class": class_to_json(self.bundle_class(k)), "section": section_str(k, self.sections[k])}
            for k in self.keys
        ]


def structure_T(labels, tag=0) -> Structure:
    labels = range(1, labels + 1) if isinstance(labels, int) else labels
    return Structure([Factor(tag, "T", frozenset(labels))])


def structure_K(labels, tag=0) -> Structure:
    labels = range(1, labels + 1) if isinstance(labels, int) else labels
    return Structure([Factor(tag, "K", frozenset(labels))])


def product(*structures: Structure) -> Structure:
    return Structure([f for s in structures for f in s.factors])


def universal_class(n, I, tag=0) -> dict:
    """Class of the universal screen bundle M_I: minus the sum of e_{I'} over I' containing I."""
    labels = frozenset(range(1, n + 1)) if isinstance(n, int) else frozenset(n)
    I = frozenset(I)
    if len(I) < 2 or not I <= labels:
        raise InvalidInput("I must be a subset of size >= 2")
    return {(tag, J): -1 for J in nonempty_subsets(labels) if I <= J}


# -- serialisation -----------------------------------------------------------


def key_str(key) -> str:
    tag, I = key
    return f"{tag_str(tag)}|{subset_key(I)}"


def tag_str(tag) -> str:
    if isinstance(tag, tuple):
        return ".".join(tag_str(t) for t in tag)
    return str(tag)


def class_to_json(vec: dict) -> dict:
    return {key_str(k): v for k, v in sorted(vec.items(), key=lambda kv: key_str(kv[0]))}


def section_str(key, kind: str) -> str:
    return f"divisor:{subset_key(key[1])}" if kind == DIVISOR else kind


def parse_key(s: str):
    tag, _, sub = s.partition("|")
    return tag, parse_subset_key(sub)
