"""Sanity checks on the brute-force oracle itself (it imports nothing from o3sym)."""

import pytest

import oracle


@pytest.mark.parametrize("n, count", [(1, 1), (2, 1), (3, 1), (4, 2), (5, 1), (6, 2)])
def test_group_counts_small_orders(n, count):
    # the number of isomorphism types of each order is classical
    assert len(oracle.groups_of_order(n)) == count


def test_every_enumerated_table_is_a_group():
    for n in range(1, 7):
        for T in oracle.groups_of_order(n):
            assert oracle.is_group_table(T)


@pytest.mark.parametrize("m, count", [(2, 1), (4, 2), (6, 2), (8, 5), (10, 2), (12, 4)])
def test_groups_with_index_two_subgroup(m, count):
    # every group of even order <= 12 has an index-2 subgroup except A_4
    found = [T for n in [m // 2] for N in oracle.groups_of_order(n) for T in oracle.index_two_supergroups(N)]
    reps = oracle.dedupe(found, key=oracle._order_profile)
    assert len(reps) == count


def test_order_eight_types_have_one_with_unique_involution():
    reps = oracle.dedupe(
        [T for N in oracle.groups_of_order(4) for T in oracle.index_two_supergroups(N)],
        key=oracle._order_profile,
    )
    assert sorted(oracle.involution_count(T) for T in reps) == [1, 1, 3, 5, 7]
