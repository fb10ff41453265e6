import itertools
import math

import pytest
from hypothesis import given

from partialrank.exceptions import CycleDetected, LimitExceeded, SelfComparison, UnknownItem, ValidationError
from partialrank.poset import (
    PartitionedPreference,
    build_partial_ranking,
    decompose,
    enumerate_linear_extensions,
)

from conftest import partitioned, posets


def test_chain_builds_with_two_relations():
    pr = build_partial_ranking({1, 2, 3}, [(1, 2), (2, 3)])
    assert len(pr) == 3 and len(pr.relations) == 2


def test_duplicate_pairs_are_collapsed():
    pr = build_partial_ranking([0, 1], [(0, 1), (0, 1)])
    assert pr.relations == frozenset({(0, 1)})


@pytest.mark.parametrize("items, pairs, exc", [
    ({1, 2}, [(1, 2), (2, 1)], CycleDetected),
    ({1, 2, 3}, [(1, 2), (2, 3), (3, 1)], CycleDetected),
    ({1, 2}, [(1, 3)], UnknownItem),
    ({1, 2}, [(2, 2)], SelfComparison),
    ({-1, 2}, [], ValidationError),
])
def test_invalid_posets_rejected(items, pairs, exc):
    with pytest.raises(exc):
        build_partial_ranking(items, pairs)


def test_two_component_poset_is_accepted(two_component_poset):
    assert two_component_poset.items == frozenset(range(1, 6))


def test_two_component_poset_decomposes_into_two_components(two_component_poset):
    out = decompose(two_component_poset)
    assert sorted(p.partitions for p in out) == [((3,), (2, 5)), ((4,), (1,))]


def test_unrelated_items_become_single_blocks():
    out = decompose(build_partial_ranking([1, 2, 3], []))
    assert sorted(p.partitions for p in out) == [((1,),), ((2,),), ((3,),)]
    assert all(p.M == 1 for p in out)


def test_inner_relation_of_bottom_block_is_dropped():
    out = decompose(build_partial_ranking([1, 2, 3, 4], [(1, 2), (2, 3), (1, 4)]))
    assert [p.partitions for p in out] == [((1,), (2, 3, 4))]


def test_chain_keeps_every_block():
    out = decompose(build_partial_ranking(range(4), [(0, 1), (1, 2), (2, 3)]))
    assert out[0].partitions == ((0,), (1,), (2,), (3,))


def test_top_set_shrinks_until_it_precedes_all_remaining():
    # 4 is a common ancestor of both sinks but unrelated to 2 and 5, so
    # putting {4} above everything else would assert orders the poset lacks
    pr = build_partial_ranking(range(7), [(2, 6), (4, 0), (4, 3), (5, 6), (6, 0)])
    for pp in decompose(pr):
        rank = pp.block_index()
        for m, upper in enumerate(pp.partitions):
            for lower in pp.partitions[m + 1:]:
                assert all((a, b) in _closure(pr) for a in upper for b in lower)
        assert all(rank[a] <= rank[b] for a, b in pr.relations if a in rank)


def _closure(pr):
    reach = {(a, b) for a, b in pr.relations}
    changed = True
    while changed:
        new = {(a, d) for a, b in reach for c, d in reach if b == c} - reach
        reach |= new
        changed = bool(new)
    return reach


@pytest.mark.parametrize("pairs, count", [
    ([(1, 2), (2, 3)], 1),
    ([], 6),
])
def test_extension_counts_small(pairs, count):
    assert len(enumerate_linear_extensions(build_partial_ranking([1, 2, 3], pairs))) == count


def test_two_component_poset_has_twenty_extensions(two_component_poset):
    assert len(enumerate_linear_extensions(two_component_poset)) == 20


def test_extension_limit_guard():
    with pytest.raises(LimitExceeded):
        enumerate_linear_extensions(build_partial_ranking(range(6), []), limit=100)


def test_partitioned_preference_validation():
    with pytest.raises(ValidationError):
        PartitionedPreference([[1, 2], [2]])
    with pytest.raises(ValidationError):
        PartitionedPreference([[1], []])
    with pytest.raises(ValidationError):
        PartitionedPreference([])


def test_relative_ranks():
    assert PartitionedPreference([[1], [2], [3]]).relative_ranks() == {1: 0.0, 2: 0.5, 3: 1.0}
    assert PartitionedPreference([[4, 5]]).relative_ranks() == {4: 0.5, 5: 0.5}


@given(posets())
def test_decompose_covers_each_component_disjointly(pr):
    out = decompose(pr)
    seen = [i for pp in out for i in pp.items]
    assert sorted(seen) == sorted(pr.items)


@given(posets())
def test_decompose_never_inverts_a_relation(pr):
    rank, comp = {}, {}
    for k, pp in enumerate(decompose(pr)):
        for i, m in pp.block_index().items():
            rank[i], comp[i] = m, k
    for a, b in pr.relations:
        assert comp[a] == comp[b]
        assert rank[a] <= rank[b]


@given(posets())
def test_every_block_order_is_implied_by_the_poset(pr):
    closure = _closure(pr)
    for pp in decompose(pr):
        for m, upper in enumerate(pp.partitions):
            for lower in pp.partitions[m + 1:]:
                assert all((a, b) in closure for a in upper for b in lower)


@given(partitioned())
def test_partitioned_preference_round_trips_through_decompose(pp):
    out = decompose(pp.to_partial_ranking())
    if pp.M == 1:
        assert sorted(i for q in out for i in q.items) == sorted(pp.items)
    else:
        assert out == [pp]


@given(posets(max_items=5))
def test_adding_a_relation_never_adds_extensions(pr):
    base = len(enumerate_linear_extensions(pr))
    order = enumerate_linear_extensions(pr)[0]
    for a, b in itertools.combinations(order, 2):
        if (a, b) not in pr.relations:
            bigger = build_partial_ranking(pr.items, list(pr.relations) + [(a, b)])
            assert len(enumerate_linear_extensions(bigger)) <= base
            break


@given(posets(max_items=5))
def test_extensions_match_permutation_filter(pr):
    brute = [o for o in itertools.permutations(sorted(pr.items))
             if all(o.index(a) < o.index(b) for a, b in pr.relations)]
    assert sorted(enumerate_linear_extensions(pr)) == sorted(brute)
    assert len(brute) <= math.factorial(len(pr.items))
