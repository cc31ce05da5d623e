import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmlog.errors import InvalidInput
from fmlog.fm.sampling import random_point
from fmlog.screens import (
    DiffModule,
    SimpleScreen,
    pull,
    screen_compose,
    screen_decompose,
    screen_from_config,
    screen_from_json,
    screen_from_point,
    screen_sigma,
    screen_validate,
    subsets_ge2,
    trivial_screen,
    vanishing_satisfied,
)


def test_reduce_examples():
    m2 = DiffModule({1, 2}, 1)
    assert m2.reduce({(2, 1, 1): 1}) == (1,)
    m3 = DiffModule({1, 2, 3}, 1)
    assert m3.reduce({(1, 3, 1): 1, (2, 3, 1): -1}) == m3.reduce({(1, 2, 1): 1})
    with pytest.raises(InvalidInput):
        m3.reduce({(1, 4, 1): 1})


def test_pull_identity_and_collapse():
    src = DiffModule({1, 2, 3}, 2)
    v = (F(1), F(2), F(-1), F(3))
    assert pull({1: 1, 2: 2, 3: 3}, src, src, v) == v
    tgt = DiffModule({1, 2}, 1)
    assert pull({1: 1, 2: 1}, DiffModule({1, 2}, 1), tgt, (F(1),)) == (0,)


def test_config_screen_invariances():
    pts = [(0, 0), (1, 2), (3, -1)]
    s = screen_from_config(2, pts)
    assert s == screen_from_config(2, [(a + 5, b - F(1, 3)) for a, b in pts])
    assert s == screen_from_config(2, [(F(-7, 2) * a, F(-7, 2) * b) for a, b in pts])
    with pytest.raises(InvalidInput):
        screen_from_config(2, [(0, 0), (0, 0)])


def test_validate_and_perturbation():
    s = screen_from_config(1, [(0,), (1,), (3,)])
    ok, lams, _ = screen_validate(s)
    assert ok
    assert lams[(frozenset({1, 2}), frozenset({1, 2, 3}))] != 0
    # in d = 1 every pair covector is a scalar, so perturb a planar screen
    s = screen_from_config(2, [(0, 0), (1, 0), (0, 1)])
    phi = dict(s.phi)
    I = frozenset({1, 2, 3})
    phi[I] = tuple(a + b for a, b in zip(phi[I], (0, 1, 0, 0)))
    ok, _, witness = screen_validate(SimpleScreen(s.labels, 2, phi))
    assert not ok and witness[1] == I


def test_interior_screen_never_vanishes():
    s = screen_from_config(2, [(0, 0), (1, 0), (0, 1), (2, 3)])
    for I in subsets_ge2(s.labels):
        if I != s.labels:
            assert not vanishing_satisfied(s, I)


def test_composed_screen_vanishes_on_fibres():
    s0 = screen_from_config(1, [(0,), (1,)])
    s1 = screen_from_config(1, [(0,), (2,)])
    q = {1: 1, 2: 1, 3: 2}
    s = screen_compose(q, s0, {1: s1, 2: trivial_screen(3, 1)})
    assert screen_validate(s)[0]
    assert vanishing_satisfied(s, {1, 2})


def test_compose_with_trivial_fibres_relabels():
    s0 = screen_from_config(2, [(0, 0), (1, 0), (0, 1)])
    q = {1: 2, 2: 3, 3: 1}
    s = screen_compose(q, s0, {r: trivial_screen(m, 2) for m, r in q.items()})
    assert s == screen_sigma({1: 3, 2: 1, 3: 2}, s0)


def test_decompose_bijective():
    s = screen_from_config(1, [(0,), (1,), (3,)])
    s0, ss = screen_decompose({1: 1, 2: 2, 3: 3}, s)
    assert s0 == s and all(x.labels == {r} for r, x in ss.items())


def test_decompose_rejects_interior_screen():
    s = screen_from_config(1, [(0,), (1,), (3,)])
    with pytest.raises(InvalidInput):
        screen_decompose({1: 1, 2: 1, 3: 2}, s)


def test_arity_mismatch():
    s0 = screen_from_config(1, [(0,), (1,)])
    with pytest.raises(InvalidInput):
        screen_compose({1: 1, 2: 2}, s0, {1: trivial_screen(1, 1)})


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(2, 4))
def test_sigma_action_law(seed, d, n):
    rng = random.Random(seed)
    s = screen_from_point(random_point(rng, d, range(1, n + 1)))
    labels = list(range(1, n + 1))
    a, b = labels[:], labels[:]
    rng.shuffle(a)
    rng.shuffle(b)
    sigma, tau = dict(zip(labels, a)), dict(zip(labels, b))
    assert screen_sigma({i: i for i in labels}, s) == s
    assert screen_sigma({i: sigma[tau[i]] for i in labels}, s) == screen_sigma(sigma, screen_sigma(tau, s))


@given(st.integers(0, 10_000), st.integers(1, 3))
def test_compose_is_equivariant_under_block_permutations(seed, d):
    rng = random.Random(seed)
    q = {1: 1, 2: 1, 3: 2, 4: 2}
    s0 = screen_from_point(random_point(rng, d, [1, 2]))
    ss = {1: screen_from_point(random_point(rng, d, [1, 2])), 2: screen_from_point(random_point(rng, d, [3, 4]))}
    s = screen_compose(q, s0, ss)
    # swap the two blocks: 1,2 <-> 3,4 and root labels 1 <-> 2
    sigma = {1: 3, 2: 4, 3: 1, 4: 2}
    pi = {1: 2, 2: 1}
    swapped = screen_compose(
        q,
        screen_sigma(pi, s0),
        {2: screen_sigma({1: 3, 2: 4}, ss[1]), 1: screen_sigma({3: 1, 4: 2}, ss[2])},
    )
    assert screen_sigma(sigma, s) == swapped


@given(st.integers(0, 10_000), st.integers(1, 3), st.integers(1, 4))
def test_json_round_trip(seed, d, n):
    s = screen_from_point(random_point(random.Random(seed), d, range(1, n + 1)))
    assert screen_from_json(s.to_json()) == s
    if n >= 2:
        assert screen_from_json(s.to_json()["phi"]) == s
