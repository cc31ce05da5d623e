"""Seeded random instances for the axiom campaigns."""
from __future__ import annotations

import random
from fractions import Fraction

from ..nested import Leaf, Node
from .framed import CirclePoint, FramedFMPoint
from .points import FMPoint, _canonical_positions


def random_surjection(rng: random.Random, source: list, n: int) -> dict:
    """Uniform-ish surjection from ``source`` onto 1..n."""
    if not 1 <= n <= len(source):
        raise ValueError("need 1 <= n <= |source|")
    labels = list(source)
    rng.shuffle(labels)
    q = {lab: r + 1 for r, lab in enumerate(labels[:n])}
    for lab in labels[n:]:
        q[lab] = rng.randint(1, n)
    return q


def _random_tree(rng, labels, D, config, coord_range):
    if len(labels) == 1:
        return Leaf(labels[0])
    # bias towards corollas at the top so shallow points stay common
    k = len(labels) if rng.random() < 0.35 else rng.randint(2, len(labels))
    blocks = random_surjection(rng, labels, k)
    parts = {}
    for lab, b in blocks.items():
        parts.setdefault(b, []).append(lab)
    kids = [_random_tree(rng, sorted(p), D, config, coord_range) for p in parts.values()]
    node = Node(tuple(kids))
    while True:
        pos = [tuple(rng.randint(-coord_range, coord_range) for _ in range(D)) for _ in kids]
        if len(set(pos)) == len(pos):
            break
    config[node.leaves] = _canonical_positions({c.leaves: p for c, p in zip(kids, pos)})
    return node


def random_point(rng: random.Random, D: int, labels, coord_range: int = 3) -> FMPoint:
    labels = sorted(labels)
    config = {}
    tree = _random_tree(rng, labels, D, config, coord_range)
    return FMPoint(D, tree, config, check=False)


def random_circle_point(rng: random.Random, spread: int = 5) -> CirclePoint:
    if rng.random() < 0.1:
        return CirclePoint(Fraction(rng.choice((1, -1))), Fraction(0))
    t = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
    return CirclePoint.from_slope(t)


def random_framed_point(rng: random.Random, d: int, labels) -> FramedFMPoint:
    x = random_point(rng, 2 * d, labels)
    return FramedFMPoint(x, {i: random_circle_point(rng) for i in sorted(labels)})


def _solve(A, B):
    """Exact A^{-1} B by Gauss-Jordan elimination."""
    n = len(A)
    M = [list(A[i]) + list(B[i]) for i in range(n)]
    for col in range(n):
        piv = next(r for r in range(col, n) if M[r][col] != 0)
        M[col], M[piv] = M[piv], M[col]
        pv = M[col][col]
        M[col] = [v / pv for v in M[col]]
        for r in range(n):
            if r != col and M[r][col] != 0:
                f = M[r][col]
                M[r] = [a - f * b for a, b in zip(M[r], M[col])]
    return tuple(tuple(row[n:]) for row in M)


def random_rotation(rng: random.Random, D: int, spread: int = 3) -> tuple:
    """Rational rotation via the Cayley transform (I + A)^{-1}(I - A), A skew."""
    A = [[Fraction(0)] * D for _ in range(D)]
    for i in range(D):
        for j in range(i + 1, D):
            a = Fraction(rng.randint(-spread, spread), rng.randint(1, spread))
            A[i][j], A[j][i] = a, -a
    eye = [[Fraction(int(i == j)) for j in range(D)] for i in range(D)]
    plus = [[eye[i][j] + A[i][j] for j in range(D)] for i in range(D)]
    minus = [[eye[i][j] - A[i][j] for j in range(D)] for i in range(D)]
    return _solve(plus, minus)
