"""Real oriented blow-ups of charts in sections of trivialised bundles.

Floating point lives only in this subpackage.  A point of the blow-up of X
in s is a pair (x, u) with |u| = 1 and u a positive multiple of s(x)
whenever s(x) is nonzero.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Callable

import numpy as np
from scipy.stats import norm, qmc

from ..errors import InvalidInput

DEFAULT_TOL = 1e-9


@dataclass
class ChartSection:
    """A section ``s`` of the trivial rank-``rank`` real bundle over a chart."""

    s: Callable[[np.ndarray], np.ndarray]
    rank: int
    name: str = ""
    domain_dim: int = 2
    meta: dict = field(default_factory=dict)

    def __post_init__(self):
        if self.rank < 1:
            raise InvalidInput("rank must be at least 1")

    def __call__(self, x) -> np.ndarray:
        v = np.asarray(self.s(np.asarray(x, dtype=float)), dtype=float).reshape(-1)
        if v.shape != (self.rank,):
            raise InvalidInput(f"section returned shape {v.shape}, expected ({self.rank},)")
        return v


def complex_section(f: Callable, name: str = "") -> ChartSection:
    """Rank-2 real section from a complex-valued function of a complex coordinate."""

    def s(x):
        w = complex(f(complex(x[0], x[1])))
        return np.array([w.real, w.imag])

    return ChartSection(s, 2, name)


def bu_membership(cs: ChartSection, x, u, tol: float = DEFAULT_TOL) -> bool:
    u = np.asarray(u, dtype=float)
    if abs(np.linalg.norm(u) - 1.0) > tol:
        raise InvalidInput("direction must have norm 1")
    sx = cs(x)
    r = np.linalg.norm(sx)
    if r <= tol:
        return True
    return bool(np.linalg.norm(u - sx / r) <= tol)


def sphere_samples(dim: int, k: int, seed: int = 0) -> np.ndarray:
    """k quasi-uniform points on the unit sphere in R^dim.

    dim 1 gives {+1, -1}; dim 2 gives equally spaced angles; higher
    dimensions push a scrambled Sobol sequence through the normal quantile
    function and normalise.
    """
    if dim == 1:
        return np.array([[1.0], [-1.0]])
    if dim == 2:
        t = 2 * np.pi * np.arange(k) / k
        return np.stack([np.cos(t), np.sin(t)], axis=1)
    m = max(1, math.ceil(math.log2(max(k, 2))))
    pts = qmc.Sobol(d=dim, scramble=True, seed=seed).random_base2(m)[:k]
    g = norm.ppf(np.clip(pts, 1e-12, 1 - 1e-12))
    return g / np.linalg.norm(g, axis=1, keepdims=True)


def bu_fiber(cs: ChartSection, x, k: int, tol: float = DEFAULT_TOL, seed: int = 0) -> np.ndarray:
    """Rows are the fibre directions over x (one row unless s(x) = 0)."""
    if k < 1:
        raise InvalidInput("need at least one sample")
    sx = cs(x)
    r = np.linalg.norm(sx)
    if r > tol:
        return (sx / r)[None, :]
    return sphere_samples(cs.rank, k, seed)


def complex_sphere_samples(n: int, k: int, seed: int = 0) -> np.ndarray:
    """k quasi-uniform points of the unit sphere in C^n, as complex rows."""
    real = sphere_samples(2 * n, k, seed)
    return real[:, 0::2] + 1j * real[:, 1::2]


def phase(w):
    return w / np.abs(w)


class KNMap:
    """Chart-level analytification (x, z) -> (x, (lambda_i(x) prod_j z_j^{e_ij}))."""

    def __init__(self, lambdas: Callable[[np.ndarray], np.ndarray], e, tol: float = DEFAULT_TOL):
        self.lambdas = lambdas
        self.e = np.asarray(e, dtype=int)
        if self.e.ndim != 2:
            raise InvalidInput("exponent matrix must be two-dimensional")
        self.tol = tol

    def lam(self, x) -> np.ndarray:
        v = np.asarray(self.lambdas(x), dtype=complex).reshape(-1)
        if v.shape != (self.e.shape[0],):
            raise InvalidInput("need one lambda per row")
        if np.any(np.abs(v) <= self.tol):
            raise InvalidInput("lambda vanishes at a sample point")
        return v

    def __call__(self, x, z) -> np.ndarray:
        z = np.asarray(z, dtype=complex)
        mono = np.prod(z[None, :] ** self.e, axis=1)
        return self.lam(x) * mono

    def after(self, inner: "KNMap") -> "KNMap":
        """Data of self o inner: (mu prod lambda^f, f e)."""
        f = self.e

        def lambdas(x):
            return self.lam(x) * np.prod(inner.lam(x)[None, :] ** f, axis=1)

        return KNMap(lambdas, f @ inner.e, self.tol)


def kn_map_chart(lambdas, e, tol: float = DEFAULT_TOL) -> KNMap:
    return KNMap(lambdas, e, tol)
