import itertools
import random
from fractions import Fraction as F

import pytest
from hypothesis import given
from hypothesis import strategies as st

from fmlog.errors import DegenerateDirection, InvalidInput
from fmlog.fm import (
    FMPoint,
    circ_i,
    compose,
    coordinates,
    coordinates_recursive,
    direction_canonical,
    g_map,
    point_eq,
    point_from_config,
    rotate,
    sigma_act,
    unit,
)
from fmlog.fm.directions import as_fraction
from fmlog.fm.points import _canonical_positions, point_from_json, point_to_json, subsets_ge2
from fmlog.fm.sampling import random_point, random_rotation
from fmlog.nested import Leaf, Node, enumerate_stable_trees, internal_vertices


def test_direction_two_points():
    # total L1 norm 1 over all entries, the same convention as the three-point case
    u = direction_canonical({1: (0, 0), 2: (2, 0)})
    assert u.as_dict() == {1: (F(-1, 2), 0), 2: (F(1, 2), 0)}


def test_direction_three_points_d1():
    u = direction_canonical({1: (0,), 2: (1,), 3: (3,)})
    assert [v[0] for v in u.vectors] == [F(-2, 5), F(-1, 10), F(1, 2)]


def test_direction_scale_invariant():
    vs = {1: (1, 2), 2: (3, -1), 3: (0, 0)}
    scaled = {i: tuple(F(7, 3) * c for c in v) for i, v in vs.items()}
    assert direction_canonical(vs) == direction_canonical(scaled)


def test_direction_degenerate():
    with pytest.raises(DegenerateDirection):
        direction_canonical({1: (1, 1), 2: (1, 1)})


def test_floats_are_rejected():
    with pytest.raises(InvalidInput):
        as_fraction(0.5)


def test_g_map_bijection_is_relabelling():
    w = direction_canonical({1: (0,), 2: (1,), 3: (3,)})
    moved = g_map({1: 2, 2: 3, 3: 1}, w)
    assert moved.as_dict() == {1: w.as_dict()[2], 2: w.as_dict()[3], 3: w.as_dict()[1]}


def test_g_map_collapse_by_hand():
    w = direction_canonical({1: (0,), 2: (1,)})
    assert [v[0] for v in g_map({1: 1, 2: 1, 3: 2}, w).vectors] == [F(-1, 4), F(-1, 4), F(1, 2)]


def test_g_map_functorial():
    w = direction_canonical({1: (0, 1), 2: (2, 3)})
    p = {1: 1, 2: 2, 3: 2}
    q = {1: 1, 2: 1, 3: 2, 4: 3}
    assert g_map(q, g_map(p, w)) == g_map({i: p[q[i]] for i in q}, w)


def test_point_from_config_pair():
    x = point_from_config(2, [(0, 0), (2, 0)])
    assert x.config[x.leaves] == {frozenset({1}): (F(-1, 2), 0), frozenset({2}): (F(1, 2), 0)}


def test_point_from_config_translation_and_scaling():
    pts = [(0, 0), (2, 1), (-1, 3)]
    x = point_from_config(2, pts)
    moved = [(F(5, 2) * a + 7, F(5, 2) * b - 1) for a, b in pts]
    assert point_eq(x, point_from_config(2, moved))
    assert x == point_from_config(2, moved)


def test_point_from_config_rejects_collisions():
    with pytest.raises(InvalidInput):
        point_from_config(2, [(0, 0), (0, 0)])


def test_corolla_coordinates():
    x = point_from_config(1, [(0,), (1,), (3,)])
    assert coordinates(x, {1, 2, 3}) == direction_canonical({1: (0,), 2: (1,), 3: (3,)})
    assert coordinates(x, {1, 3}) == direction_canonical({1: (0,), 3: (3,)})


def test_grafted_coordinate_is_the_factor():
    x = point_from_config(2, [(0, 0), (1, 0)])
    y = point_from_config(2, [(0, 0), (0, 1)])
    c = compose({1: 1, 2: 1, 3: 2}, x, {1: y, 2: unit(2, 3)})
    assert coordinates(c, {1, 2}) == coordinates(y, {1, 2})
    # 1 and 2 collide when seen from {1, 3}
    assert coordinates(c, {1, 2, 3}) == direction_canonical({1: (0, 0), 2: (0, 0), 3: (1, 0)})


def test_compose_with_units():
    x = point_from_config(2, [(0, 0), (1, 2), (3, 1)])
    assert point_eq(compose({1: 1, 2: 2, 3: 3}, x, {i: unit(2, i) for i in (1, 2, 3)}), x)
    assert point_eq(compose({1: 1, 2: 1, 3: 1}, unit(2), {1: x}), x)


def test_compose_arity_mismatch():
    x = point_from_config(2, [(0, 0), (1, 0)])
    with pytest.raises(InvalidInput):
        compose({1: 1, 2: 2}, x, {1: x, 2: unit(2, 2)})


def test_circ_i_inserts_relabelled_factor():
    x = point_from_config(1, [(0,), (1,), (5,)])
    y = point_from_config(1, [(0,), (2,)])
    c = circ_i(x, y, 2)
    assert c.leaves == frozenset({1, 2, 3, 4})
    assert coordinates(c, {2, 3}) == direction_canonical({2: (0,), 3: (2,)})
    assert coordinates(c, {1, 4}) == direction_canonical({1: (0,), 4: (5,)})


def test_sigma_identity_and_inverse():
    x = random_point(random.Random(0), 2, [1, 2, 3, 4])
    sigma = {1: 3, 2: 1, 3: 4, 4: 2}
    inv = {v: k for k, v in sigma.items()}
    assert point_eq(sigma_act({i: i for i in range(1, 5)}, x), x)
    assert point_eq(sigma_act(inv, sigma_act(sigma, x)), x)


def test_rotation_examples():
    x = point_from_config(2, [(0, 0), (2, 0)])
    assert point_eq(rotate(((1, 0), (0, 1)), x), x)
    R = ((F(3, 5), F(-4, 5)), (F(4, 5), F(3, 5)))
    assert point_eq(rotate(R, x), point_from_config(2, [(0, 0), (F(6, 5), F(8, 5))]))
    with pytest.raises(InvalidInput):
        rotate(((1, 1), (0, 1)), x)


def test_point_eq_distinguishes_corollas():
    assert not point_eq(point_from_config(1, [(0,), (1,), (3,)]), point_from_config(1, [(0,), (1,), (2,)]))


def _family(tree, D, values):
    """All points on ``tree`` whose vertex configurations come from a small rational family."""
    verts = list(internal_vertices(tree))
    choices = [list(itertools.permutations(values, len(v.children))) for v in verts]
    for pick in itertools.product(*choices):
        config = {
            v.leaves: _canonical_positions({c.leaves: (p,) * D for c, p in zip(v.children, pos)})
            for v, pos in zip(verts, pick)
        }
        yield FMPoint(D, tree, config)


@pytest.mark.parametrize("n", [2, 3, 4])
def test_distinct_trees_differ_in_some_coordinate(n):
    reps = [(t, x) for t in enumerate_stable_trees(n) for x in itertools.islice(_family(t, 1, [0, 1, 3, 7]), 3)]
    for (t, a), (u, b) in itertools.combinations(reps, 2):
        if t != u:
            assert not point_eq(a, b)


def test_normal_form_equality_matches_point_eq_on_a_family():
    tree = Node((Node((Leaf(1), Leaf(2))), Leaf(3)))
    pts = list(_family(tree, 1, [0, 1, 3]))
    for a, b in itertools.combinations(pts, 2):
        assert point_eq(a, b) == (a == b)


@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(2, 5))
def test_fast_and_recursive_coordinates_agree(seed, D, n):
    x = random_point(random.Random(seed), D, range(1, n + 1))
    for I in subsets_ge2(x.leaves):
        assert coordinates(x, I) == coordinates_recursive(x, I)


@given(st.integers(0, 10_000), st.integers(1, 4), st.integers(1, 5))
def test_json_round_trip(seed, D, n):
    x = random_point(random.Random(seed), D, range(1, n + 1))
    assert point_eq(point_from_json(point_to_json(x)), x)


@given(st.integers(0, 10_000), st.sampled_from([2, 3, 4]))
def test_random_rotations_are_orthogonal(seed, D):
    R = random_rotation(random.Random(seed), D)
    for i in range(D):
        for j in range(D):
            assert sum(R[k][i] * R[k][j] for k in range(D)) == (1 if i == j else 0)


def test_broken_composition_is_detected():
    """Swapping the factors of a composite must be caught by point_eq."""
    x = point_from_config(2, [(0, 0), (1, 0)])
    y1 = point_from_config(2, [(0, 0), (0, 1)])
    y2 = point_from_config(2, [(0, 0), (1, 1)])
    q = {1: 1, 2: 1, 3: 2, 4: 2}
    good = compose(q, x, {1: y1, 2: sigma_act({1: 3, 2: 4}, y2)})
    bad = compose(q, x, {1: y2, 2: sigma_act({1: 3, 2: 4}, y1)})
    assert not point_eq(good, bad)
