"""Nested collections of subsets and stable rooted trees.

Strata of the compactified configuration spaces are indexed by nested
collections of proper subsets with at least two elements; equivalently by
stable rooted trees whose leaves carry the labels.  Trees are stored in a
canonical form (children ordered by their smallest leaf), so structural
equality is isomorphism of labeled trees.
"""
from __future__ import annotations

import itertools
import os
from dataclasses import dataclass, field
from functools import cached_property
from typing import Iterable, Iterator, Union

from .errors import InvalidInput, ResourceLimit

DEFAULT_MAX_ARITY = int(os.environ.get("FMLOG_MAX_ARITY", "8"))


@dataclass(frozen=True)
class SubsetIndex:
    """A subset of {1..n} with at least two elements."""

    elements: frozenset
    n: int

    def __post_init__(self):
        object.__setattr__(self, "elements", frozenset(self.elements))
        if not 2 <= len(self.elements) <= self.n:
            raise InvalidInput(f"subset {sorted(self.elements)} must have 2..{self.n} elements")
        if not all(isinstance(i, int) and 1 <= i <= self.n for i in self.elements):
            raise InvalidInput(f"subset {sorted(self.elements)} not contained in [1..{self.n}]")

    def key(self) -> str:
        return subset_key(self.elements)


def subset_key(s: Iterable[int]) -> str:
    return ",".join(str(i) for i in sorted(s))


def parse_subset_key(key: str) -> frozenset:
    try:
        return frozenset(int(p) for p in key.split(",") if p.strip())
    except ValueError as exc:
        raise InvalidInput(f"bad subset key {key!r}") from exc


# -- trees -----------------------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    label: int

    @property
    def leaves(self) -> frozenset:
        return frozenset((self.label,))

    @property
    def min_leaf(self) -> int:
        return self.label


@dataclass(frozen=True)
class Node:
    """Internal vertex; children are kept sorted by smallest leaf label."""

    children: tuple

    def __post_init__(self):
        kids = tuple(sorted(self.children, key=lambda c: c.min_leaf))
        object.__setattr__(self, "children", kids)
        if len(kids) < 2:
            raise InvalidInput("internal vertex needs at least two children")
        seen = set()
        for c in kids:
            if seen & c.leaves:
                raise InvalidInput("leaf labels repeated across children")
            seen |= c.leaves

    @cached_property
    def leaves(self) -> frozenset:
        return frozenset().union(*(c.leaves for c in self.children))

    @property
    def min_leaf(self) -> int:
        return self.children[0].min_leaf


StableTree = Union[Leaf, Node]


def internal_vertices(t: StableTree) -> Iterator[Node]:
    """Pre-order walk over internal vertices."""
    if isinstance(t, Node):
        yield t
        for c in t.children:
            yield from internal_vertices(c)


def corolla(labels: Iterable[int]) -> StableTree:
    labels = sorted(labels)
    if len(labels) == 1:
        return Leaf(labels[0])
    return Node(tuple(Leaf(i) for i in labels))


def relabel_tree(t: StableTree, mapping) -> StableTree:
    if isinstance(t, Leaf):
        return Leaf(mapping[t.label])
    return Node(tuple(relabel_tree(c, mapping) for c in t.children))


def tree_to_json(t: StableTree):
    if isinstance(t, Leaf):
        return {"leaf": t.label}
    return {"children": [tree_to_json(c) for c in t.children]}


def tree_from_json(obj) -> StableTree:
    if not isinstance(obj, dict):
        raise InvalidInput("tree node must be an object")
    if "leaf" in obj:
        return Leaf(int(obj["leaf"]))
    if "children" in obj:
        return Node(tuple(tree_from_json(c) for c in obj["children"]))
    raise InvalidInput("tree node needs 'leaf' or 'children'")


# -- nested collections ------------------------------------------------------


@dataclass(frozen=True)
class NestedCollection:
    """Pairwise nested proper subsets (size >= 2) of a finite label set."""

    ground: frozenset
    members: frozenset = field(default_factory=frozenset)

    def __post_init__(self):
        ground = frozenset(self.ground)
        members = frozenset(frozenset(m) for m in self.members)
        object.__setattr__(self, "ground", ground)
        object.__setattr__(self, "members", members)
        for m in members:
            if len(m) < 2 or not m < ground:
                raise InvalidInput(f"{sorted(m)} is not a proper subset of size >= 2")
        if not _pairwise_nested(members):
            raise InvalidInput("collection is not nested")

    @property
    def n(self) -> int:
        return len(self.ground)

    def sort_key(self):
        return (len(self.members), sorted(tuple(sorted(m)) for m in self.members))

    def to_json(self):
        return [sorted(m) for m in sorted(self.members, key=lambda m: tuple(sorted(m)))]


def _nested_pair(a: frozenset, b: frozenset) -> bool:
    return a <= b or b <= a or not (a & b)


def _pairwise_nested(members) -> bool:
    return all(_nested_pair(a, b) for a, b in itertools.combinations(members, 2))


def is_nested(collection, n: int | None = None) -> bool:
    """True iff every pair of members is comparable or disjoint.

    Members may be ``SubsetIndex`` values (their ambient ``n`` must agree)
    or plain iterables of labels.
    """
    sets = []
    ambient = {n} if n is not None else set()
    for m in collection:
        if isinstance(m, SubsetIndex):
            ambient.add(m.n)
            sets.append(m.elements)
        else:
            sets.append(frozenset(m))
    if len(ambient) > 1:
        raise InvalidInput(f"mixed ambient arities {sorted(ambient)}")
    return _pairwise_nested(sets)


def tree_to_nested(t: StableTree) -> NestedCollection:
    members = [v.leaves for v in internal_vertices(t)][1:]
    return NestedCollection(t.leaves, frozenset(members))


def nested_to_tree(c: NestedCollection) -> StableTree:
    if not isinstance(c, NestedCollection):
        raise InvalidInput("expected a NestedCollection")
    return _build(c.ground, sorted(c.members, key=len, reverse=True))


def _build(ground: frozenset, members: list) -> StableTree:
    if len(ground) == 1:
        return Leaf(next(iter(ground)))
    inside = [m for m in members if m < ground]
    # maximal members become the children blocks; the rest recurse
    maximal = [m for m in inside if not any(m < o for o in inside)]
    covered = frozenset().union(*maximal) if maximal else frozenset()
    blocks = list(maximal) + [frozenset((i,)) for i in ground - covered]
    return Node(tuple(_build(b, [m for m in inside if m < b]) for b in blocks))


def strata_closure_leq(c1: NestedCollection, c2: NestedCollection) -> bool:
    """True iff the stratum of ``c1`` lies in the closure of that of ``c2``."""
    if c1.ground != c2.ground:
        raise InvalidInput("collections over different label sets")
    return c2.members <= c1.members


# -- enumeration -------------------------------------------------------------


def set_partitions(items: list) -> Iterator[list]:
    """All set partitions of ``items`` (blocks as lists), deterministic order."""
    if not items:
        yield []
        return
    first, rest = items[0], items[1:]
    for part in set_partitions(rest):
        yield [[first]] + part
        for i in range(len(part)):
            yield part[:i] + [[first] + part[i]] + part[i + 1:]


def _trees_on(labels: tuple, memo: dict) -> list:
    if labels in memo:
        return memo[labels]
    if len(labels) == 1:
        out = [Leaf(labels[0])]
    else:
        out = []
        for part in set_partitions(list(labels)):
            if len(part) < 2:
                continue
            options = [_trees_on(tuple(sorted(b)), memo) for b in part]
            out.extend(Node(tuple(combo)) for combo in itertools.product(*options))
    memo[labels] = out
    return out


def _check_bound(n: int, bound: int | None):
    bound = DEFAULT_MAX_ARITY if bound is None else bound
    if n < 1:
        raise InvalidInput("arity must be positive")
    if n > bound:
        raise ResourceLimit(f"n={n} exceeds enumeration bound {bound}")


def enumerate_stable_trees(n: int, bound: int | None = None) -> list:
    """One tree per isomorphism class of stable trees with leaves 1..n.

    Ordered by the associated nested collection: size, then members.
    """
    _check_bound(n, bound)
    trees = _trees_on(tuple(range(1, n + 1)), {})
    return sorted(trees, key=lambda t: tree_to_nested(t).sort_key())


def enumerate_nested_collections(n: int, bound: int | None = None) -> list:
    """All nested collections of proper subsets of [n], by clique search.

    Independent of the tree enumeration: builds collections member by member
    from the compatibility graph of candidate subsets.
    """
    _check_bound(n, bound)
    ground = frozenset(range(1, n + 1))
    cands = [frozenset(c) for k in range(2, n) for c in itertools.combinations(sorted(ground), k)]
    out = []

    def extend(start, chosen):
        out.append(NestedCollection(ground, frozenset(chosen)))
        for j in range(start, len(cands)):
            c = cands[j]
            if all(_nested_pair(c, m) for m in chosen):
                chosen.append(c)
                extend(j + 1, chosen)
                chosen.pop()

    extend(0, [])
    return sorted(out, key=NestedCollection.sort_key)


def covering_relations(collections: list) -> list:
    """Hasse diagram edges (deeper, shallower) of the closure order."""
    by_size = {}
    for c in collections:
        by_size.setdefault(len(c.members), []).append(c)
    edges = []
    for c in collections:
        for d in by_size.get(len(c.members) - 1, []):
            if d.members < c.members:
                edges.append((c, d))
    return edges
