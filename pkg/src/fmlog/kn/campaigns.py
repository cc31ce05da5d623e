"""Sampled verifications of the blow-up and Kato-Nakayama statements.

Each campaign returns ``{"checked", "max_error", "failures"}``.  A sample is
a failure when its error exceeds the tolerance; failures list the sample
index and error, capped so reports stay small.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..errors import InvalidInput
from .blowup import (
    DEFAULT_TOL,
    ChartSection,
    bu_fiber,
    bu_membership,
    complex_section,
    complex_sphere_samples,
    kn_map_chart,
    phase,
    sphere_samples,
)

MAX_FAILURES = 10


class Report:
    def __init__(self, tol: float):
        self.tol = tol
        self.checked = 0
        self.max_error = 0.0
        self.failures = []

    def add(self, err: float, where):
        err = float(err)
        self.checked += 1
        self.max_error = max(self.max_error, err)
        if not err <= self.tol and len(self.failures) < MAX_FAILURES:
            self.failures.append({"sample": where, "error": err})

    def fail(self, where, reason: str):
        self.checked += 1
        if len(self.failures) < MAX_FAILURES:
            self.failures.append({"sample": where, "reason": reason})

    def as_dict(self) -> dict:
        return {"checked": self.checked, "max_error": self.max_error, "failures": self.failures}


def _disk_samples(k: int, seed: int, radius: float = 1.0) -> np.ndarray:
    """Quasi-uniform points of a closed disk, always including the centre."""
    from scipy.stats import qmc

    m = max(1, int(np.ceil(np.log2(max(k, 2)))))
    u = qmc.Sobol(d=2, scramble=True, seed=seed).random_base2(m)[: k - 1]
    r = radius * np.sqrt(u[:, 0])
    t = 2 * np.pi * u[:, 1]
    pts = np.stack([r * np.cos(t), r * np.sin(t)], axis=1)
    return np.vstack([[0.0, 0.0], pts])


# -- Hopf ---------------------------------------------------------------------------


def _projector(v: np.ndarray) -> np.ndarray:
    v = v / np.linalg.norm(v)
    return np.outer(v, v.conj())


def _chart_point(v: np.ndarray, j: int):
    """Chart j of P^m: affine coordinates with a 1 in slot j, and the fibre phase."""
    zeta = v / v[j]
    return zeta, phase(v[j])


def hopf_verify(m: int, k: int = 10_000, tol: float = DEFAULT_TOL, seed: int = 0, sweep: int = 16) -> dict:
    """S^{2m+1} as KN space of the log point S_m, over P^m.

    Per sample v: pick the chart j maximising |v_j|, read off the affine
    point and the phase v_j/|v_j|, rebuild v, compare the chart point with
    the projectivisation of v, check a neighbouring chart agrees, and sweep
    the phase once round the fibre.
    """
    if m < 0:
        raise InvalidInput("m must be nonnegative")
    rep = Report(tol)
    V = complex_sphere_samples(m + 1, k, seed)
    angles = 2 * np.pi * np.arange(sweep + 1) / sweep
    for idx, v in enumerate(V):
        j = int(np.argmax(np.abs(v)))
        zeta, ph = _chart_point(v, j)
        back = ph * zeta / np.linalg.norm(zeta)
        err = np.linalg.norm(back - v)
        P = _projector(v)
        err = max(err, np.abs(_projector(zeta) - P).max())
        others = [i for i in range(m + 1) if i != j and abs(v[i]) > 1e-3]
        if others:
            i = others[0]
            z2, ph2 = _chart_point(v, i)
            err = max(err, np.linalg.norm(ph2 * z2 / np.linalg.norm(z2) - v))
        orbit_err = 0.0
        for a in angles:
            w = np.exp(1j * a) * v
            jw = int(np.argmax(np.abs(w)))
            zw, _ = _chart_point(w, jw)
            orbit_err = max(orbit_err, np.abs(_projector(zw) - P).max())
        orbit_err = max(orbit_err, np.linalg.norm(np.exp(1j * angles[-1]) * v - v))
        rep.add(max(err, orbit_err), idx)
    return rep.as_dict()


# -- circle splitting ---------------------------------------------------------------


SPLIT_CASES = {
    # name: (complex sections, exponents)
    "trivial": ([lambda z: 1.5 + 0.5 * z], [1]),
    "disk-zero": ([lambda z: z], [1]),
    "double": ([lambda z: z], [2]),
    "two-bundles": ([lambda z: z, lambda z: z - 0.5], [1, -1]),
}


def _stage_points(sections, x: np.ndarray, fibre_k: int, seed: int, tol: float):
    """All sampled points (x, u_1..u_n) of the iterated blow-up over x."""
    options = []
    for n, f in enumerate(sections):
        cs = complex_section(f)
        dirs = bu_fiber(cs, x, fibre_k, tol, seed + n)
        options.append([complex(d[0], d[1]) for d in dirs])
    return list(itertools.product(*options))


def circle_split_verify(case: str, k: int = 1000, tol: float = DEFAULT_TOL, seed: int = 0, fibre_k: int = 8) -> dict:
    """Split the zero-section blow-up of L = tensor L_i^{e_i} as stage x S^1.

    tau = prod u_i^{e_i} trivialises the pulled-back L; the split sends a
    direction zeta of L to zeta / tau and back.  Checks round trips, that
    tau has modulus one, and that away from zeros the phase of the section
    prod sigma_i^{e_i} equals tau.
    """
    key = case.split(":", 1)[-1]
    if key not in SPLIT_CASES:
        raise InvalidInput(f"unknown split case {case!r}; known: {sorted(SPLIT_CASES)}")
    sections, exps = SPLIT_CASES[key]
    rep = Report(tol)
    ring = np.exp(2j * np.pi * np.arange(fibre_k) / fibre_k + 0.1j)
    for idx, x in enumerate(_disk_samples(k, seed)):
        z = complex(x[0], x[1])
        for us in _stage_points(sections, x, fibre_k, seed, tol):
            tau = np.prod([u ** e for u, e in zip(us, exps)])
            err = abs(abs(tau) - 1)
            for zeta in ring:
                w = zeta / tau
                err = max(err, abs(abs(w) - 1), abs(w * tau - zeta))
            vals = [f(z) for f in sections]
            if all(abs(v) > tol for v in vals):
                sigma_L = np.prod([v ** e for v, e in zip(vals, exps)])
                err = max(err, abs(phase(sigma_L) - tau))
                for f, u in zip(sections, us):
                    cs = complex_section(f)
                    if not bu_membership(cs, x, np.array([u.real, u.imag]), tol):
                        err = max(err, 1.0)
            rep.add(err, idx)
    return rep.as_dict()


# -- S^1 action ----------------------------------------------------------------------


def block_rotation(theta: float, n: int) -> np.ndarray:
    c, s = np.cos(theta), np.sin(theta)
    R = np.zeros((2 * n, 2 * n))
    for b in range(n):
        R[2 * b:2 * b + 2, 2 * b:2 * b + 2] = [[c, -s], [s, c]]
    return R


def s1_action_verify(n: int, k: int = 1000, tol: float = DEFAULT_TOL, seed: int = 0, eps: float = 1e-3) -> dict:
    """F(z, x) = z x on blow-up directions agrees with the diagonal rotation."""
    if n < 1:
        raise InvalidInput("n must be positive")
    rep = Report(tol)
    V = complex_sphere_samples(n, k, seed)
    thetas = np.concatenate([[0.0], 2 * np.pi * ((np.arange(1, k) * 0.6180339887498949) % 1.0)])
    for idx, (theta, v) in enumerate(zip(thetas, V)):
        mult = np.exp(1j * theta) * v
        real_v = np.empty(2 * n)
        real_v[0::2], real_v[1::2] = v.real, v.imag
        rot = block_rotation(theta, n) @ real_v
        rot_c = rot[0::2] + 1j * rot[1::2]
        F = (eps * np.exp(1j * theta)) * (eps * v)
        direction = F / np.linalg.norm(F)
        err = max(np.linalg.norm(mult - rot_c), np.linalg.norm(direction - mult))
        if theta == 0.0:
            err = max(err, np.linalg.norm(direction - v))
        rep.add(err, idx)
    return rep.as_dict()


# -- strict Cartesian ----------------------------------------------------------------


def _kn_member(sections, base, phases, tol) -> float:
    """0 if (base, phases) lies in the KN space of the chart, else a residual."""
    worst = 0.0
    for f, u in zip(sections, phases):
        worst = max(worst, abs(abs(u) - 1))
        v = f(base)
        if abs(v) > tol:
            worst = max(worst, abs(u - phase(v)))
    return worst


CARTESIAN_CASES = ("trivial", "point-in-log-point", "line-in-plane")


def strict_cartesian_verify(case: str, k: int = 1000, tol: float = DEFAULT_TOL, seed: int = 0) -> dict:
    """KN(source) -> KN(target) x_target source is a bijection on samples."""
    if case not in CARTESIAN_CASES:
        raise InvalidInput(f"unknown cartesian case {case!r}; known: {list(CARTESIAN_CASES)}")
    rep = Report(tol)
    rng = np.random.default_rng(seed)
    ring = np.exp(2j * np.pi * (np.arange(k) / k))
    if case == "trivial":
        # line into plane with no log structure: KN spaces are the charts themselves
        xs = rng.uniform(-1, 1, size=k) + 1j * rng.uniform(-1, 1, size=k)
        for idx, x in enumerate(xs):
            image = (x, 0j)
            fibre_pt = (image, x)
            err = abs(fibre_pt[1] - x) + abs(fibre_pt[0][0] - x) + abs(fibre_pt[0][1])
            rep.add(err, idx)
        return rep.as_dict()
    if case == "point-in-log-point":
        # (pt, 0) strictly into (pt, 0): both KN spaces are S^1, map is the identity
        for idx, u in enumerate(ring):
            image = u
            fibre_pt = image
            err = max(_kn_member([lambda _z: 0j], 0j, [image], tol), abs(fibre_pt - u), abs(abs(u) - 1))
            rep.add(err, idx)
        return rep.as_dict()
    # line {y = 0} in the plane with log sections x and y; the source carries
    # the pulled-back sections x and 0
    tgt = [lambda p: p[0], lambda p: p[1]]
    src = [lambda x: x, lambda x: 0j]
    xs = np.concatenate([[0j], (rng.uniform(-1, 1, k - 1) + 1j * rng.uniform(-1, 1, k - 1))])
    for idx, x in enumerate(xs):
        free = ring[idx % k]
        u = phase(x) if abs(x) > tol else ring[(7 * idx) % k]
        src_pt = (x, (u, free))
        err = _kn_member(src, x, src_pt[1], tol)
        tgt_pt = ((x, 0j), src_pt[1])
        err = max(err, _kn_member(tgt, tgt_pt[0], tgt_pt[1], tol))
        if abs(tgt_pt[0][1]) > tol:
            err = max(err, 1.0)
        back = (tgt_pt[0][0], tgt_pt[1])
        err = max(err, abs(back[0] - src_pt[0]), *(abs(a - b) for a, b in zip(back[1], src_pt[1])))
        # fibre-product points over the same base come back with the same phases
        fp_phases = (u, free)
        err = max(err, _kn_member(src, back[0], fp_phases, tol))
        rep.add(err, idx)
    return rep.as_dict()


# -- order independence, the S^2 example, functoriality ------------------------------


ORDER_SECTIONS = [lambda z: z, lambda z: z - 0.5, lambda z: (z - 0.3j) ** 2]


def kn_order_independence(k: int = 500, tol: float = DEFAULT_TOL, seed: int = 0) -> dict:
    """Blow up three sections in every order; results agree after reindexing."""
    rep = Report(tol)
    pts = _disk_samples(k, seed)
    extra = np.array([[0.5, 0.0], [0.0, 0.3]])
    pts = np.vstack([pts, extra])
    ring = np.exp(2j * np.pi * np.arange(6) / 6 + 0.2j)
    n = len(ORDER_SECTIONS)
    for idx, x in enumerate(pts):
        z = complex(x[0], x[1])
        choice = {i: ring[(idx + 2 * i) % len(ring)] for i in range(n)}
        results = []
        for order in itertools.permutations(range(n)):
            state = {}
            for i in order:
                v = ORDER_SECTIONS[i](z)
                state[i] = phase(v) if abs(v) > tol else choice[i]
                # total transform: earlier phases are untouched by later stages
            results.append(np.array([state[i] for i in range(n)]))
        base = results[0]
        err = max(np.abs(r - base).max() for r in results)
        err = max(err, _kn_member(ORDER_SECTIONS, z, base, tol))
        rep.add(err, idx)
    return rep.as_dict()


def s2_example(k: int = 1000, tol: float = DEFAULT_TOL, seed: int = 0) -> dict:
    """s(x, y, z) = (x - 1, 0) on S^2: a circle over (1, 0, 0), points elsewhere."""
    cs = ChartSection(lambda p: np.array([p[0] - 1.0, 0.0]), 2, "s2")
    rep = Report(tol)
    pole = np.array([1.0, 0.0, 0.0])
    fib = bu_fiber(cs, pole, 64, tol)
    err = 0.0 if len(fib) == 64 and all(bu_membership(cs, pole, u, tol) for u in fib) else 1.0
    err = max(err, np.abs(np.linalg.norm(fib, axis=1) - 1).max())
    rep.add(err, "pole")
    for idx, p in enumerate(sphere_samples(3, k, seed)):
        if np.linalg.norm(p - pole) < 1e-6:
            continue
        f = bu_fiber(cs, p, 64, tol)
        err = 0.0 if len(f) == 1 else 1.0
        err = max(err, np.linalg.norm(f[0] - np.array([-1.0, 0.0])))
        if bu_membership(cs, p, np.array([1.0, 0.0]), tol):
            err = 1.0
        rep.add(err, idx)
    return rep.as_dict()


def kn_functoriality(trials: int = 200, tol: float = 1e-12, seed: int = 0) -> dict:
    """Map of composed data equals composite of maps, random integer matrices."""
    rng = np.random.default_rng(seed)
    rep = Report(tol)
    for idx in range(trials):
        a, b, c = rng.integers(1, 4, size=3)
        e = rng.integers(-2, 3, size=(b, a))
        f = rng.integers(-2, 3, size=(c, b))
        la = rng.normal(size=(b, 2)) @ np.array([1, 1j]) + 3
        mu = rng.normal(size=(c, 2)) @ np.array([1, 1j]) + 3
        inner = kn_map_chart(lambda x, la=la: la * (1 + 0.1 * x), e)
        outer = kn_map_chart(lambda x, mu=mu: mu * (1 - 0.1 * x), f)
        x = float(rng.uniform(-1, 1))
        z = np.exp(1j * rng.uniform(0, 2 * np.pi, size=a))
        two_step = phase(outer(x, phase(inner(x, z))))
        one_step = phase(outer.after(inner)(x, z))
        err = np.abs(two_step - one_step).max()
        rep.add(err, idx)
    return rep.as_dict()
