"""Points of the Kontsevich spaces K_{D,n} and the Fulton-MacPherson operad.

A point is stored in stable-tree normal form: a stable rooted tree whose
leaves are the labels, plus, at every internal vertex, a configuration of its
children (distinct rational vectors, centred, L1 norm 1).  Every point of the
compactified space arises this way as an iterated composition of interior
points, and operad composition becomes grafting of trees.

``config`` maps the leaf set of each internal vertex to a dict sending the
leaf set of each child to that child's position.
"""
from __future__ import annotations

import itertools
from fractions import Fraction
from functools import cached_property
from typing import Mapping, Sequence

from ..errors import DegenerateDirection, InvalidInput
from ..nested import Leaf, Node, StableTree, internal_vertices, relabel_tree
from .directions import (
    DirectionClass,
    as_vector,
    centered_key,
    direction_canonical,
    direction_from_key,
    g_map,
    integer_rep,
    vector_to_json,
)


def _canonical_positions(positions: Mapping[frozenset, Sequence]) -> dict:
    keys = list(positions)
    vecs = [as_vector(positions[k]) for k in keys]
    if len(set(vecs)) != len(vecs):
        raise InvalidInput("child positions must be pairwise distinct")
    D = len(vecs[0])
    m = len(vecs)
    mean = [sum(v[k] for v in vecs) / m for k in range(D)]
    centered = [tuple(v[k] - mean[k] for k in range(D)) for v in vecs]
    norm = sum(abs(c) for v in centered for c in v)
    if norm == 0:
        raise DegenerateDirection("vertex configuration has no direction")
    return {k: tuple(c / norm for c in v) for k, v in zip(keys, centered)}


class FMPoint:
    """A point of K_{D,N} for a finite label set N, in tree normal form."""

    def __init__(self, D: int, tree: StableTree, config: Mapping, *, check: bool = True):
        self.D = D
        self.tree = tree
        self.config = {frozenset(v): {frozenset(c): p for c, p in kids.items()} for v, kids in config.items()}
        if check:
            self._validate()

    def _validate(self):
        if self.D < 1:
            raise InvalidInput("ambient dimension must be positive")
        verts = {v.leaves: v for v in internal_vertices(self.tree)}
        if set(verts) != set(self.config):
            raise InvalidInput("configuration keys do not match internal vertices")
        for key, v in verts.items():
            kids = self.config[key]
            if set(kids) != {c.leaves for c in v.children}:
                raise InvalidInput("configuration does not match the children of a vertex")
            vecs = list(kids.values())
            if any(len(p) != self.D for p in vecs):
                raise InvalidInput("position of wrong dimension")
            if len(set(vecs)) != len(vecs):
                raise InvalidInput("child positions must be distinct")
            for k in range(self.D):
                if sum(p[k] for p in vecs) != 0:
                    raise InvalidInput("vertex configuration is not centred")
            if sum(abs(c) for p in vecs for c in p) != 1:
                raise InvalidInput("vertex configuration is not L1-normalized")

    @property
    def leaves(self) -> frozenset:
        return self.tree.leaves

    @property
    def arity(self) -> int:
        return len(self.tree.leaves)

    @cached_property
    def _normal_form(self):
        return (
            self.D,
            self.tree,
            tuple(
                sorted(
                    (tuple(sorted(v)), tuple(sorted((tuple(sorted(c)), p) for c, p in kids.items())))
                    for v, kids in self.config.items()
                )
            ),
        )

    def __eq__(self, other):
        return isinstance(other, FMPoint) and self._normal_form == other._normal_form

    def __hash__(self):
        return hash(self._normal_form)

    def __repr__(self):
        return f"FMPoint(D={self.D}, tree={self.tree!r})"

    # -- coordinate machinery ------------------------------------------------

    @cached_property
    def _lookup(self) -> dict:
        """vertex key -> (children, label -> child index, integer positions)."""
        out = {}
        for v in internal_vertices(self.tree):
            kids = self.config[v.leaves]
            ints = integer_rep([kids[c.leaves] for c in v.children])
            where = {}
            for idx, c in enumerate(v.children):
                for lab in c.leaves:
                    where[lab] = idx
            out[v.leaves] = (v, where, ints)
        return out

    def separating_vertex(self, subset: frozenset) -> Node:
        """Deepest internal vertex whose leaf set contains ``subset``."""
        node = self.tree
        while True:
            for c in node.children:
                if isinstance(c, Node) and subset <= c.leaves:
                    node = c
                    break
            else:
                return node

    def coordinate_key(self, subset) -> tuple:
        """Primitive integer form of the coordinate on ``subset`` (sorted order)."""
        subset = frozenset(subset)
        v = self.separating_vertex(subset)
        _, where, ints = self._lookup[v.leaves]
        return centered_key([ints[where[i]] for i in sorted(subset)], self.D)


def unit(D: int, label: int = 1) -> FMPoint:
    """The unique point of K_{D,1}."""
    return FMPoint(D, Leaf(label), {})


def point_from_config(D: int, points) -> FMPoint:
    """Interior point from distinct rational vectors (a list or a label map)."""
    if not isinstance(points, Mapping):
        points = {i + 1: p for i, p in enumerate(points)}
    if len(points) < 2:
        raise InvalidInput("need at least two points")
    vecs = {lab: as_vector(p) for lab, p in points.items()}
    if any(len(p) != D for p in vecs.values()):
        raise InvalidInput(f"points must have dimension {D}")
    if len(set(vecs.values())) != len(vecs):
        raise InvalidInput("points must be pairwise distinct")
    tree = Node(tuple(Leaf(lab) for lab in vecs))
    kids = _canonical_positions({frozenset((lab,)): p for lab, p in vecs.items()})
    return FMPoint(D, tree, {tree.leaves: kids})


def subsets_ge2(labels) -> list:
    labels = sorted(labels)
    return [frozenset(c) for k in range(2, len(labels) + 1) for c in itertools.combinations(labels, k)]


def coordinates(x: FMPoint, subset) -> DirectionClass:
    """The sphere coordinate of ``x`` on ``subset`` (a subset of its leaves)."""
    subset = frozenset(subset)
    if len(subset) < 2 or not subset <= x.leaves:
        raise InvalidInput("subset must have at least two leaves of the point")
    return direction_from_key(x.D, sorted(subset), x.coordinate_key(subset))


def coordinates_recursive(x: FMPoint, subset) -> DirectionClass:
    """Same as :func:`coordinates` but literally via g-maps on restrictions.

    Slow; kept as an independent route for tests.
    """
    subset = frozenset(subset)
    v = x.separating_vertex(subset)
    kids = x.config[v.leaves]
    q = {}
    for c in v.children:
        for i in subset & c.leaves:
            q[i] = c.min_leaf
    restricted = direction_canonical({c.min_leaf: kids[c.leaves] for c in v.children if c.min_leaf in q.values()})
    return g_map(q, restricted)


def point_eq(x: FMPoint, y: FMPoint) -> bool:
    """Equality through the coordinate embedding into a product of spheres."""
    if x.D != y.D or x.leaves != y.leaves:
        return False
    return all(x.coordinate_key(s) == y.coordinate_key(s) for s in subsets_ge2(x.leaves))


# -- operad structure ----------------------------------------------------------


def relabel(x: FMPoint, mapping: Mapping[int, int]) -> FMPoint:
    """Rename leaves along an injective map defined on the leaf set."""
    if not set(x.leaves) <= set(mapping) or len(set(mapping[i] for i in x.leaves)) != x.arity:
        raise InvalidInput("relabelling must be injective on the leaves")
    img = lambda s: frozenset(mapping[i] for i in s)  # noqa: E731
    config = {img(v): {img(c): p for c, p in kids.items()} for v, kids in x.config.items()}
    return FMPoint(x.D, relabel_tree(x.tree, mapping), config, check=False)


def _fibres(q: Mapping[int, int]) -> dict:
    fib = {}
    for m, r in q.items():
        fib.setdefault(r, set()).add(m)
    return {r: frozenset(s) for r, s in fib.items()}


def compose(q: Mapping[int, int], x: FMPoint, ys: Mapping[int, FMPoint]) -> FMPoint:
    """Operad composition along a surjection q: M -> leaves(x).

    ``ys[r]`` must have leaf set q^{-1}(r); arity-one factors are units.
    """
    fib = _fibres(q)
    if set(fib) != set(x.leaves):
        raise InvalidInput("q must be a surjection onto the leaves of x")
    if set(ys) != set(x.leaves):
        raise InvalidInput("need exactly one factor per leaf of x")
    for r, y in ys.items():
        if y.D != x.D:
            raise InvalidInput("all factors must share the ambient dimension")
        if y.leaves != fib[r]:
            raise InvalidInput(f"factor {r} has leaves {sorted(y.leaves)}, expected {sorted(fib[r])}")

    def pull(s):
        return frozenset().union(*(fib[r] for r in s))

    config = {}
    for y in ys.values():
        config.update(y.config)
    for v, kids in x.config.items():
        config[pull(v)] = {pull(c): p for c, p in kids.items()}

    def graft(t):
        if isinstance(t, Leaf):
            return ys[t.label].tree
        return Node(tuple(graft(c) for c in t.children))

    return FMPoint(x.D, graft(x.tree), config, check=False)


def circ_i(x: FMPoint, y: FMPoint, i: int) -> FMPoint:
    """Partial composition on leaves 1..n and 1..m, inserting y at slot i."""
    n, m = x.arity, y.arity
    if x.leaves != frozenset(range(1, n + 1)) or y.leaves != frozenset(range(1, m + 1)):
        raise InvalidInput("circ_i expects leaves labelled 1..n and 1..m")
    if not 1 <= i <= n:
        raise InvalidInput(f"slot {i} out of range 1..{n}")
    q = {}
    for j in range(1, n + m):
        q[j] = j if j < i else (i if j < i + m else j - m + 1)
    ys = {}
    for r in range(1, n + 1):
        if r == i:
            ys[r] = relabel(y, {j: i + j - 1 for j in range(1, m + 1)})
        else:
            ys[r] = unit(x.D, r if r < i else r + m - 1)
    return compose(q, x, ys)


def sigma_act(sigma: Mapping[int, int], x: FMPoint) -> FMPoint:
    """Relabel leaves by a permutation (or bijection) sigma."""
    return relabel(x, sigma)


def _is_orthogonal(R) -> bool:
    D = len(R)
    return all(
        sum(R[k][i] * R[k][j] for k in range(D)) == (1 if i == j else 0) for i in range(D) for j in range(D)
    )


def rotate(R, x: FMPoint) -> FMPoint:
    """Act by an exact rational orthogonal matrix on every vertex configuration."""
    R = tuple(as_vector(row) for row in R)
    if len(R) != x.D or any(len(row) != x.D for row in R):
        raise InvalidInput(f"rotation must be {x.D}x{x.D}")
    if not _is_orthogonal(R):
        raise InvalidInput("matrix is not orthogonal (R^T R != I)")
    D = x.D
    config = {}
    for v, kids in x.config.items():
        moved = {c: tuple(sum(R[a][b] * p[b] for b in range(D)) for a in range(D)) for c, p in kids.items()}
        config[v] = _canonical_positions(moved)
    return FMPoint(D, x.tree, config, check=False)


# -- json ----------------------------------------------------------------------


def point_to_json(x: FMPoint) -> dict:
    def enc(t):
        if isinstance(t, Leaf):
            return {"leaf": t.label}
        kids = x.config[t.leaves]
        return {
            "children": [enc(c) for c in t.children],
            "positions": [vector_to_json(kids[c.leaves]) for c in t.children],
        }

    return {"D": x.D, "tree": enc(x.tree)}


def point_from_json(obj) -> FMPoint:
    try:
        D = int(obj["D"])
        raw = obj["tree"]
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("FM point needs 'D' and 'tree'") from exc
    config = {}

    def dec(node):
        if "leaf" in node:
            return Leaf(int(node["leaf"]))
        kids = [dec(c) for c in node["children"]]
        positions = node.get("positions")
        if positions is None or len(positions) != len(kids):
            raise InvalidInput("each internal node needs one position per child")
        t = Node(tuple(kids))
        config[t.leaves] = _canonical_positions({k.leaves: as_vector(p) for k, p in zip(kids, positions)})
        return t

    if not isinstance(raw, dict):
        raise InvalidInput("tree must be an object")
    return FMPoint(D, dec(raw), config)


def positions_in_plane(x: FMPoint, eps: Fraction | float) -> dict:
    """Leaf positions with each tree level shrunk by a further factor ``eps``."""
    out = {}

    def walk(t, origin, scale):
        if isinstance(t, Leaf):
            out[t.label] = origin
            return
        kids = x.config[t.leaves]
        for c in t.children:
            p = kids[c.leaves]
            walk(c, tuple(o + scale * float(pc) for o, pc in zip(origin, p)), scale * eps)

    walk(x.tree, tuple(0.0 for _ in range(x.D)), 1.0)
    return out
