import itertools

import pytest

from fmlog.errors import InvalidInput, ResourceLimit
from fmlog.nested import (
    Leaf,
    NestedCollection,
    Node,
    SubsetIndex,
    corolla,
    covering_relations,
    enumerate_nested_collections,
    enumerate_stable_trees,
    is_nested,
    nested_to_tree,
    parse_subset_key,
    set_partitions,
    strata_closure_leq,
    subset_key,
    tree_from_json,
    tree_to_json,
    tree_to_nested,
)


@pytest.mark.parametrize(
    "members, n, expected",
    [
        ([{1, 2}, {1, 2, 3}], 4, True),
        ([{1, 2}, {2, 3}], 3, False),
        ([{1, 2}, {3, 4}], 4, True),
    ],
)
def test_is_nested_examples(members, n, expected):
    assert is_nested([SubsetIndex(frozenset(m), n) for m in members]) is expected


def test_is_nested_rejects_mixed_ambient():
    with pytest.raises(InvalidInput):
        is_nested([SubsetIndex(frozenset({1, 2}), 3), SubsetIndex(frozenset({1, 2}), 4)])


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 4), (4, 26), (5, 236)])
def test_tree_counts(n, count):
    assert len(enumerate_stable_trees(n)) == count


def test_resource_limit():
    with pytest.raises(ResourceLimit):
        enumerate_stable_trees(5, bound=4)


def test_corolla_has_empty_collection():
    assert tree_to_nested(corolla([1, 2, 3])).members == frozenset()
    assert nested_to_tree(NestedCollection(frozenset({1, 2, 3}))) == corolla([1, 2, 3])


def test_two_level_tree():
    t = Node((Node((Leaf(1), Leaf(2))), Leaf(3)))
    c = tree_to_nested(t)
    assert c.members == {frozenset({1, 2})}
    assert nested_to_tree(c) == t


def test_non_nested_collection_rejected():
    with pytest.raises(InvalidInput):
        NestedCollection(frozenset({1, 2, 3}), [{1, 2}, {2, 3}])


def test_closure_order():
    c = NestedCollection(frozenset({1, 2, 3}), [{1, 2}])
    empty = NestedCollection(frozenset({1, 2, 3}))
    assert strata_closure_leq(c, c)
    assert strata_closure_leq(c, empty)
    assert not strata_closure_leq(empty, c)


def _brute_force(n):
    """Every family of proper subsets of size >= 2 that is pairwise nested."""
    ground = range(1, n + 1)
    cands = [frozenset(s) for k in range(2, n) for s in itertools.combinations(ground, k)]
    found = []
    for r in range(len(cands) + 1):
        for fam in itertools.combinations(cands, r):
            if is_nested(fam):
                found.append(frozenset(fam))
    return found


@pytest.mark.parametrize("n", [1, 2, 3, 4])
def test_enumeration_matches_brute_force(n):
    ours = {c.members for c in enumerate_nested_collections(n)}
    brute = _brute_force(n)
    assert len(brute) == len(ours)
    assert set(brute) == ours


@pytest.mark.parametrize("n", range(1, 7))
def test_bijection_exhaustive(n):
    trees = enumerate_stable_trees(n)
    cols = enumerate_nested_collections(n)
    assert len(trees) == len(cols)
    assert {tree_to_nested(t) for t in trees} == set(cols)
    assert all(nested_to_tree(tree_to_nested(t)) == t for t in trees)


def test_enumeration_order_is_by_size_then_members():
    cols = enumerate_nested_collections(4)
    assert cols == sorted(cols, key=NestedCollection.sort_key)
    assert cols[0].members == frozenset()


def test_covering_relations_drop_one_member():
    cols = enumerate_nested_collections(4)
    edges = covering_relations(cols)
    assert all(len(a.members) == len(b.members) + 1 and b.members < a.members for a, b in edges)
    # each of the 25 nonempty collections covers at least one shallower stratum
    assert {a for a, _ in edges} == {c for c in cols if c.members}


def test_json_round_trips():
    for t in enumerate_stable_trees(4):
        assert tree_from_json(tree_to_json(t)) == t
    assert parse_subset_key(subset_key({4, 1, 2})) == frozenset({1, 2, 4})
    assert subset_key({4, 1, 2}) == "1,2,4"


def test_set_partitions_bell_numbers():
    assert [sum(1 for _ in set_partitions(list(range(k)))) for k in range(1, 6)] == [1, 2, 5, 15, 52]
