"""Exact points of the normal spheres of diagonals.

A direction on an index set I is a tuple of D-vectors that sums to zero,
taken up to positive scaling.  The canonical representative has L1 norm 1,
which keeps everything rational.  Hot loops use the equivalent primitive
integer representative (divide by the gcd of all entries) instead.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from ..errors import DegenerateDirection, InternalConsistencyError, InvalidInput

Vector = tuple  # tuple of Fraction


def as_fraction(v) -> Fraction:
    if isinstance(v, Fraction):
        return v
    if isinstance(v, (int, str)):
        try:
            return Fraction(v)
        except ValueError as exc:
            raise InvalidInput(f"not a rational: {v!r}") from exc
    if isinstance(v, float):
        raise InvalidInput("floats are not accepted; pass rationals as 'p/q' strings")
    return Fraction(v)


def as_vector(v) -> Vector:
    return tuple(as_fraction(c) for c in v)


def fraction_str(x: Fraction) -> str:
    return str(x.numerator) if x.denominator == 1 else f"{x.numerator}/{x.denominator}"


def vector_to_json(v) -> list:
    return [fraction_str(c) for c in v]


def primitive(flat: Sequence[int]) -> tuple:
    """Divide an integer tuple by the gcd of its entries (sign preserved)."""
    g = math.gcd(*flat)
    if g == 0:
        raise DegenerateDirection("zero direction")
    return tuple(c // g for c in flat)


def integer_rep(vectors: Sequence[Vector]) -> list:
    """Rescale rational vectors by a positive common denominator."""
    den = 1
    for v in vectors:
        for c in v:
            den = den * c.denominator // math.gcd(den, c.denominator)
    return [tuple(int(c * den) for c in v) for v in vectors]


def centered_key(vectors: Sequence[Sequence[int]], dim: int) -> tuple:
    """Primitive integer form of an integer tuple after removing its mean."""
    m = len(vectors)
    sums = [sum(v[k] for v in vectors) for k in range(dim)]
    flat = [m * v[k] - sums[k] for v in vectors for k in range(dim)]
    return primitive(flat)


@dataclass(frozen=True)
class DirectionClass:
    """Canonical (L1 norm 1, zero sum) direction on a finite index set."""

    D: int
    index: tuple
    vectors: tuple

    def __post_init__(self):
        if len(self.index) != len(self.vectors) or list(self.index) != sorted(set(self.index)):
            raise InvalidInput("index must be sorted, distinct, and aligned with vectors")
        if any(len(v) != self.D for v in self.vectors):
            raise InvalidInput("vector length differs from D")
        for k in range(self.D):
            if sum(v[k] for v in self.vectors) != 0:
                raise InvalidInput("direction vectors must sum to zero")
        if sum(abs(c) for v in self.vectors for c in v) != 1:
            raise InvalidInput("direction is not L1-normalized")

    def as_dict(self) -> dict:
        return dict(zip(self.index, self.vectors))

    def key(self) -> tuple:
        """Primitive integer representative, equal iff the classes are equal."""
        return primitive([c for v in integer_rep(self.vectors) for c in v])

    def to_json(self):
        return {str(i): vector_to_json(v) for i, v in zip(self.index, self.vectors)}


def direction_from_key(D: int, index: Sequence[int], key: Sequence[int]) -> DirectionClass:
    total = sum(abs(c) for c in key)
    flat = [Fraction(c, total) for c in key]
    vecs = tuple(tuple(flat[j * D:(j + 1) * D]) for j in range(len(index)))
    return DirectionClass(D, tuple(index), vecs)


def direction_canonical(vs: Mapping[int, Sequence]) -> DirectionClass:
    """Centre a labelled tuple of vectors and scale it to L1 norm 1."""
    if not vs:
        raise InvalidInput("empty tuple of vectors")
    index = tuple(sorted(vs))
    vecs = [as_vector(vs[i]) for i in index]
    dims = {len(v) for v in vecs}
    if len(dims) != 1:
        raise InvalidInput("vectors of different dimensions")
    (D,) = dims
    m = len(vecs)
    mean = [sum(v[k] for v in vecs) / m for k in range(D)]
    centered = [tuple(v[k] - mean[k] for k in range(D)) for v in vecs]
    norm = sum(abs(c) for v in centered for c in v)
    if norm == 0:
        raise DegenerateDirection("all vectors coincide; no direction")
    return DirectionClass(D, index, tuple(tuple(c / norm for c in v) for v in centered))


def g_map(q: Mapping[int, int], w: DirectionClass) -> DirectionClass:
    """Push a direction on J to one on I along a surjection q: I -> J.

    This is the map on normal spheres induced by the diagonal-preserving
    embedding (R^D)^J -> (R^D)^I, x -> (x_{q(i)})_i.
    """
    if set(q.values()) != set(w.index):
        raise InvalidInput("q must map onto the index set of w")
    wd = w.as_dict()
    try:
        return direction_canonical({i: wd[j] for i, j in q.items()})
    except DegenerateDirection as exc:
        raise InternalConsistencyError("g_map produced a zero direction") from exc
