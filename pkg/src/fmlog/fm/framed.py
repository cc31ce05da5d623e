"""The circle-framed operad FM_{2d} x| S^1 with exact rational circle points."""
from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from ..errors import InvalidInput
from .directions import as_fraction, fraction_str
from .points import FMPoint, compose, point_eq, point_from_json, point_to_json, relabel, rotate, unit


@dataclass(frozen=True)
class CirclePoint:
    """(cos, sin) of a rational point on the unit circle; group law is complex multiplication."""

    c: Fraction
    s: Fraction

    def __post_init__(self):
        object.__setattr__(self, "c", as_fraction(self.c))
        object.__setattr__(self, "s", as_fraction(self.s))
        if self.c * self.c + self.s * self.s != 1:
            raise InvalidInput(f"({self.c}, {self.s}) is not on the unit circle")

    def __mul__(self, other: "CirclePoint") -> "CirclePoint":
        return CirclePoint(self.c * other.c - self.s * other.s, self.c * other.s + self.s * other.c)

    def inverse(self) -> "CirclePoint":
        return CirclePoint(self.c, -self.s)

    @classmethod
    def identity(cls) -> "CirclePoint":
        return cls(Fraction(1), Fraction(0))

    @classmethod
    def from_slope(cls, t) -> "CirclePoint":
        """Rational parametrisation ((1-t^2)/(1+t^2), 2t/(1+t^2))."""
        t = as_fraction(t)
        return cls((1 - t * t) / (1 + t * t), 2 * t / (1 + t * t))

    def to_json(self):
        return [fraction_str(self.c), fraction_str(self.s)]


def embed_circle(theta: CirclePoint, d: int) -> tuple:
    """Block-diagonal 2d x 2d rotation: S^1 -> U(1) -> U(d) -> SO(2d)."""
    D = 2 * d
    zero = Fraction(0)
    rows = [[zero] * D for _ in range(D)]
    for b in range(d):
        i = 2 * b
        rows[i][i], rows[i][i + 1] = theta.c, -theta.s
        rows[i + 1][i], rows[i + 1][i + 1] = theta.s, theta.c
    return tuple(tuple(r) for r in rows)


def matmul(A, B) -> tuple:
    n, k, m = len(A), len(B), len(B[0])
    return tuple(tuple(sum(A[i][t] * B[t][j] for t in range(k)) for j in range(m)) for i in range(n))


@dataclass(frozen=True, eq=False)
class FramedFMPoint:
    point: FMPoint
    frames: Mapping

    def __post_init__(self):
        if self.point.D % 2:
            raise InvalidInput("framed points need even ambient dimension")
        if set(self.frames) != set(self.point.leaves):
            raise InvalidInput("need one frame per leaf")

    @property
    def d(self) -> int:
        return self.point.D // 2

    @property
    def leaves(self) -> frozenset:
        return self.point.leaves

    def __eq__(self, other):
        return isinstance(other, FramedFMPoint) and framed_eq(self, other)

    def __hash__(self):
        return hash((self.point, tuple(sorted(self.frames.items(), key=lambda kv: kv[0]))))


def framed_eq(a: FramedFMPoint, b: FramedFMPoint) -> bool:
    return point_eq(a.point, b.point) and dict(a.frames) == dict(b.frames)


def framed_unit(d: int, label: int = 1) -> FramedFMPoint:
    return FramedFMPoint(unit(2 * d, label), {label: CirclePoint.identity()})


def framed_compose(q: Mapping[int, int], X: FramedFMPoint, Ys: Mapping[int, FramedFMPoint]) -> FramedFMPoint:
    """Semidirect composition: rotate each inserted factor by the frame it lands on."""
    d = X.d
    if set(Ys) != set(X.leaves):
        raise InvalidInput("need exactly one factor per leaf")
    if any(Y.d != d for Y in Ys.values()):
        raise InvalidInput("all factors must share d")
    turned = {r: rotate(embed_circle(X.frames[r], d), Y.point) for r, Y in Ys.items()}
    point = compose(q, X.point, turned)
    frames = {}
    for r, Y in Ys.items():
        for j, f in Y.frames.items():
            frames[j] = X.frames[r] * f
    return FramedFMPoint(point, frames)


def framed_sigma(sigma: Mapping[int, int], X: FramedFMPoint) -> FramedFMPoint:
    return FramedFMPoint(relabel(X.point, sigma), {sigma[i]: f for i, f in X.frames.items()})


def framed_to_json(X: FramedFMPoint) -> dict:
    out = point_to_json(X.point)
    out["frames"] = {str(i): X.frames[i].to_json() for i in sorted(X.frames)}
    return out


def framed_from_json(obj) -> FramedFMPoint:
    point = point_from_json(obj)
    try:
        frames = {int(k): CirclePoint(*v) for k, v in obj["frames"].items()}
    except (KeyError, TypeError, ValueError) as exc:
        raise InvalidInput("framed point needs a 'frames' object of [c, s] pairs") from exc
    return FramedFMPoint(point, frames)
