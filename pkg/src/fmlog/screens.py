"""Simple screens: rational points of T_{d,n} and its boundary strata.

A covector on the difference module F_I is determined by its values on the
basis t^k_{i,r} (r = min I).  We store it as a flat tuple ordered by (i, k)
for i in I minus r.  Evaluating on t^k_{ij} gives a_i^k - a_j^k with a_r = 0,
so a covector is the same thing as a map I -> Q^d modulo constants.  All
pullbacks are computed through that "potential" picture.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

from .errors import InternalConsistencyError, InvalidInput
from .fm.directions import DirectionClass, as_fraction, as_vector, direction_canonical, fraction_str
from .nested import parse_subset_key, subset_key


def subsets_ge2(labels) -> list:
    labels = sorted(labels)
    return [frozenset(c) for k in range(2, len(labels) + 1) for c in itertools.combinations(labels, k)]


# -- difference modules ------------------------------------------------------


@dataclass(frozen=True)
class DiffModule:
    I: frozenset
    d: int

    def __post_init__(self):
        object.__setattr__(self, "I", frozenset(self.I))
        if len(self.I) < 2 or self.d < 1:
            raise InvalidInput("difference module needs |I| >= 2 and d >= 1")

    @property
    def root(self) -> int:
        return min(self.I)

    @property
    def basis(self) -> list:
        return [(i, k) for i in sorted(self.I) if i != self.root for k in range(1, self.d + 1)]

    @property
    def rank(self) -> int:
        return self.d * (len(self.I) - 1)

    def reduce(self, combo: Mapping) -> tuple:
        """Coordinates of sum c * t^k_{ij} over keys (i, j, k)."""
        pos = {b: n for n, b in enumerate(self.basis)}
        out = [Fraction(0)] * self.rank
        for (i, j, k), c in combo.items():
            if i not in self.I or j not in self.I:
                raise InvalidInput(f"index outside {sorted(self.I)}")
            if not 1 <= k <= self.d:
                raise InvalidInput(f"component {k} outside 1..{self.d}")
            c = as_fraction(c)
            if i != self.root:
                out[pos[(i, k)]] += c
            if j != self.root:
                out[pos[(j, k)]] -= c
        return tuple(out)

    def element_potential(self, v: Sequence) -> dict:
        """Inverse of :meth:`reduce` on the basis: sum v_{i,k} t^k_{i,r}."""
        return {(i, self.root, k): c for (i, k), c in zip(self.basis, v) if c}


def pull(phi: Mapping[int, int], src: DiffModule, tgt: DiffModule, v: Sequence) -> tuple:
    """Push an element of F_src along F_phi : t_ij -> t_{phi(i) phi(j)}."""
    if src.d != tgt.d or any(phi[i] not in tgt.I for i in src.I):
        raise InvalidInput("phi must map the source index set into the target")
    combo = {}
    for (i, r, k), c in src.element_potential(v).items():
        key = (phi[i], phi[r], k)
        combo[key] = combo.get(key, 0) + c
    return tgt.reduce(combo)


# -- covectors -----------------------------------------------------------------


def _canonical(vec: Sequence[Fraction]) -> tuple:
    """Scale so the first nonzero coefficient is 1; zero stays zero."""
    for c in vec:
        if c:
            return tuple(x / c for x in vec)
    return tuple(vec)


def _from_potential(I: frozenset, d: int, g: Mapping[int, Sequence]) -> tuple:
    """Covector t^k_{ij} -> g_i^k - g_j^k in basis coordinates (not rescaled)."""
    r = min(I)
    return tuple(g[i][k] - g[r][k] for i in sorted(I) if i != r for k in range(d))


def _potential(I: frozenset, d: int, cov: Sequence) -> dict:
    r = min(I)
    zero = tuple(Fraction(0) for _ in range(d))
    g = {r: zero}
    rest = [i for i in sorted(I) if i != r]
    for n, i in enumerate(rest):
        g[i] = tuple(cov[n * d:(n + 1) * d])
    return g


def restrict(J: frozenset, d: int, cov: Sequence, I: frozenset, via: Mapping[int, int] | None = None) -> tuple:
    """The covector cov o F on F_I, with F induced by ``via`` (default inclusion)."""
    g = _potential(J, d, cov)
    via = via or {i: i for i in I}
    return _from_potential(I, d, {i: g[via[i]] for i in I})


def is_zero(v) -> bool:
    return not any(v)


def proportionality(a: Sequence, b: Sequence):
    """lam with a = lam * b, or None; b must be nonzero."""
    piv = next(n for n, c in enumerate(b) if c)
    lam = a[piv] / b[piv]
    return lam if all(x == lam * y for x, y in zip(a, b)) else None


# -- screens -------------------------------------------------------------------


class SimpleScreen:
    """Covectors phi_I (up to scalar) for every I of size >= 2 in ``labels``."""

    def __init__(self, labels, d: int, phi: Mapping):
        self.labels = frozenset(labels)
        self.d = d
        if d < 1 or not self.labels:
            raise InvalidInput("screen needs d >= 1 and a nonempty label set")
        want = set(subsets_ge2(self.labels))
        phi = {frozenset(k): v for k, v in phi.items()}
        if set(phi) != want:
            raise InvalidInput("need exactly one covector per subset of size >= 2")
        self.phi = {}
        for I, v in phi.items():
            v = tuple(as_fraction(c) for c in v)
            if len(v) != d * (len(I) - 1):
                raise InvalidInput(f"covector on {subset_key(I)} has wrong length")
            if is_zero(v):
                raise InvalidInput(f"covector on {subset_key(I)} is zero")
            self.phi[I] = _canonical(v)

    def __eq__(self, other):
        return (
            isinstance(other, SimpleScreen)
            and (self.labels, self.d) == (other.labels, other.d)
            and self.phi == other.phi
        )

    def __hash__(self):
        return hash((self.labels, self.d, tuple(sorted((tuple(sorted(k)), v) for k, v in self.phi.items()))))

    def __repr__(self):
        return f"SimpleScreen(labels={sorted(self.labels)}, d={self.d})"

    def pulled(self, I: frozenset, J: frozenset) -> tuple:
        """phi_J o F_{I in J} as a covector on F_I."""
        return restrict(J, self.d, self.phi[J], I)

    def lam(self, I: frozenset, J: frozenset):
        """The scalar lambda_{I,J}, or None if the pair is incompatible."""
        a = self.pulled(I, J)
        return Fraction(0) if is_zero(a) else proportionality(a, self.phi[I])

    def to_json(self) -> dict:
        return {
            "d": self.d,
            "labels": sorted(self.labels),
            "phi": {subset_key(I): [fraction_str(c) for c in self.phi[I]] for I in subsets_ge2(self.labels)},
        }


def screen_from_json(obj) -> SimpleScreen:
    """Accepts {d, labels, phi} or a bare {subset key: covector} map.

    For the bare form d is read off from the covector length on a pair.
    """
    try:
        raw = obj["phi"] if "phi" in obj else obj
        phi = {parse_subset_key(k): [as_fraction(c) for c in v] for k, v in raw.items()}
        if "d" in obj:
            d = int(obj["d"])
        else:
            pairs = [len(v) for k, v in phi.items() if len(k) == 2]
            if not pairs:
                raise InvalidInput("cannot infer d from an empty screen; give 'd'")
            d = pairs[0]
        labels = obj.get("labels") or sorted(frozenset().union(*phi)) or [1]
    except (KeyError, TypeError, AttributeError, ValueError) as exc:
        raise InvalidInput("screen needs a 'phi' object of covectors") from exc
    return SimpleScreen(labels, d, phi)


def trivial_screen(label: int, d: int) -> SimpleScreen:
    return SimpleScreen({label}, d, {})


def screen_from_config(d: int, points) -> SimpleScreen:
    if not isinstance(points, Mapping):
        points = {i + 1: p for i, p in enumerate(points)}
    pts = {i: as_vector(p) for i, p in points.items()}
    if any(len(p) != d for p in pts.values()):
        raise InvalidInput(f"points must have dimension {d}")
    if len(set(pts.values())) != len(pts):
        raise InvalidInput("points must be pairwise distinct")
    return SimpleScreen(pts, d, {I: _from_potential(I, d, pts) for I in subsets_ge2(pts)})


def screen_validate(s: SimpleScreen):
    """(ok, lambdas, witness): lambdas maps (I, J) to lambda_{I,J} for I < J."""
    lams = {}
    for J in subsets_ge2(s.labels):
        for I in subsets_ge2(J):
            if I == J:
                continue
            lam = s.lam(I, J)
            if lam is None:
                return False, lams, (I, J)
            lams[(I, J)] = lam
    return True, lams, None


def vanishing_satisfied(s: SimpleScreen, I) -> bool:
    I = frozenset(I)
    for J in subsets_ge2(s.labels):
        meet = I & J
        if not J <= I and len(meet) >= 2 and not is_zero(s.pulled(meet, J)):
            return False
    return True


def _fibres(q: Mapping[int, int]) -> dict:
    fib = {}
    for m, r in q.items():
        fib.setdefault(r, set()).add(m)
    return {r: frozenset(v) for r, v in fib.items()}


def _check_shapes(q, s0, ss):
    fib = _fibres(q)
    if set(fib) != s0.labels:
        raise InvalidInput("q must be a surjection onto the labels of s0")
    if set(ss) != set(fib):
        raise InvalidInput("need one fibre screen per label of s0")
    for r, s in ss.items():
        if s.labels != fib[r] or s.d != s0.d:
            raise InvalidInput(f"fibre screen {r} has the wrong labels or dimension")
    return fib


def screen_compose(q: Mapping[int, int], s0: SimpleScreen, ss: Mapping[int, SimpleScreen]) -> SimpleScreen:
    _check_shapes(q, s0, ss)
    phi = {}
    for K in subsets_ge2(q):
        qK = frozenset(q[k] for k in K)
        if len(qK) == 1:
            (r,) = qK
            phi[K] = ss[r].phi[K]
        else:
            phi[K] = restrict(qK, s0.d, s0.phi[qK], K, via=q)
    return SimpleScreen(q.keys(), s0.d, phi)


def screen_decompose(q: Mapping[int, int], s: SimpleScreen):
    """Inverse of :func:`screen_compose` on screens with every fibre vanishing."""
    fib = _fibres(q)
    if set(q) != s.labels:
        raise InvalidInput("q must be defined on the labels of the screen")
    ok, _, witness = screen_validate(s)
    if not ok:
        raise InvalidInput(f"screen is not compatible at {[sorted(w) for w in witness]}")
    for r, F in fib.items():
        if len(F) >= 2 and not vanishing_satisfied(s, F):
            raise InvalidInput(f"screen does not satisfy the vanishing property for fibre {r}")
    d = s.d
    ss = {r: SimpleScreen(F, d, {K: s.phi[K] for K in subsets_ge2(F)}) for r, F in fib.items()}
    rep = {r: min(F) for r, F in fib.items()}
    phi0 = {}
    for J in subsets_ge2(fib):
        K = frozenset().union(*(fib[j] for j in J))
        g = _potential(K, d, s.phi[K])
        if any(g[m] != g[rep[q[m]]] for m in K):
            raise InternalConsistencyError("covector does not factor through F_q")
        phi0[J] = _from_potential(J, d, {j: g[rep[j]] for j in J})
    s0 = SimpleScreen(fib, d, phi0)
    if screen_compose(q, s0, ss) != s:
        raise InternalConsistencyError("decomposition does not recompose")
    return s0, ss


def screen_sigma(sigma: Mapping[int, int], s: SimpleScreen) -> SimpleScreen:
    """phi'_I = phi_{sigma^-1 I} o sigma^-1."""
    if set(sigma) != s.labels or len(set(sigma.values())) != len(sigma):
        raise InvalidInput("sigma must be a bijection on the labels")
    inv = {v: k for k, v in sigma.items()}
    phi = {}
    for I in subsets_ge2(sigma.values()):
        src = frozenset(inv[i] for i in I)
        phi[I] = restrict(src, s.d, s.phi[src], I, via=inv)
    return SimpleScreen(sigma.values(), s.d, phi)


# -- bridge to directions -----------------------------------------------------------


def covector_from_direction(u: DirectionClass) -> tuple:
    """phi(t_ij) = u_i - u_j, canonically scaled."""
    return _canonical(_from_potential(frozenset(u.index), u.D, u.as_dict()))


def screen_from_point(x) -> SimpleScreen:
    """The screen whose covector on I is the FM coordinate of x on I."""
    from .fm.points import coordinates

    phi = {I: covector_from_direction(coordinates(x, I)) for I in subsets_ge2(x.leaves)}
    return SimpleScreen(x.leaves, x.D, phi)


def direction_from_covector(I, d: int, cov: Sequence) -> DirectionClass:
    """Centred potential of a covector; recovers the direction up to sign."""
    return direction_canonical(_potential(frozenset(I), d, cov))
