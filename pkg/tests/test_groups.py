import json

import numpy as np
import pytest

from o3sym.errors import CapacityError, ContractError, ParameterError
from o3sym.groups import (
    Group,
    direct_product,
    dumps,
    from_dump,
    get_order_cap,
    group_invariants,
    index_two_subgroups,
    is_associative,
    loads,
    make_affine_line,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_permutation_group,
    make_quaternion,
    make_symmetric,
    order_cap,
    perm_from_cycles,
    power_action,
    semidirect_product,
    subgroup_closure,
    sylow_2,
    to_dump,
)
from o3sym.morphisms import is_isomorphic


def brute_class_sizes(G):
    T = G.rows
    seen, sizes = set(), []
    for x in range(G.order):
        if x in seen:
            continue
        cls = {T[T[g][x]][G.inv(g)] for g in range(G.order)}
        seen |= cls
        sizes.append(len(cls))
    return sorted(sizes)


def test_cyclic_basics():
    assert make_cyclic(1).order == 1
    inv = group_invariants(make_cyclic(6))
    assert inv.histogram() == {1: 1, 2: 1, 3: 2, 6: 2}
    Z5 = group_invariants(make_cyclic(5))
    assert Z5.abelian and Z5.center_order == 5


def test_dihedral_small_cases():
    assert is_isomorphic(make_dihedral(1), make_cyclic(2)) is not None
    D4 = make_dihedral(2)
    assert D4.is_abelian()
    assert is_isomorphic(D4, direct_product(make_cyclic(2), make_cyclic(2))) is not None
    D6 = make_dihedral(3)
    assert brute_class_sizes(D6) == [1, 2, 3]
    assert sorted(len(c) for c in D6.conjugacy_classes()) == [1, 2, 3]


@pytest.mark.parametrize("n", range(1, 21))
def test_dihedral_center(n):
    z = make_dihedral(n).center().order
    if n <= 2:
        assert z == 2 * n
    elif n % 2:
        assert z == 1
    else:
        assert z == 2


def test_quaternion():
    Q8 = make_quaternion(2)
    assert int((Q8.element_orders() == 2).sum()) == 1
    assert Q8.center().order == 2
    assert group_invariants(make_quaternion(3)).histogram() == {1: 1, 2: 1, 3: 2, 4: 6, 6: 2}
    with pytest.raises(ParameterError):
        make_quaternion(1)


def test_permutation_groups():
    S5 = make_permutation_group(5, [perm_from_cycles(5, (0, 1)), perm_from_cycles(5, (0, 1, 2, 3, 4))])
    assert S5.order == 120
    A4 = make_permutation_group(4, [perm_from_cycles(4, (0, 1, 2)), perm_from_cycles(4, (0, 1), (2, 3))])
    assert A4.order == 12
    ga = make_permutation_group(5, [[(x + 1) % 5 for x in range(5)], [(2 * x) % 5 for x in range(5)]])
    assert ga.order == 20
    with pytest.raises(ParameterError):
        make_permutation_group(9, [list(range(9))])


def test_products():
    S3 = make_symmetric(3)
    assert is_isomorphic(direct_product(S3, make_cyclic(1)), S3) is not None
    assert is_isomorphic(direct_product(make_cyclic(2), make_cyclic(3)), make_cyclic(6)) is not None
    P = direct_product(make_alternating(5), make_cyclic(2))
    assert P.order == 120 and P.center().order == 2


def test_semidirect_products():
    Z3, Z2, Z4 = make_cyclic(3), make_cyclic(2), make_cyclic(4)
    trivial = semidirect_product(Z3, Z2, power_action([0, 1, 2], 2))
    assert np.array_equal(trivial.table, direct_product(Z3, Z2).table)
    assert is_isomorphic(semidirect_product(Z3, Z2, power_action([0, 2, 1], 2)), make_dihedral(3)) is not None
    hol = semidirect_product(make_cyclic(5), Z4, power_action([(2 * x) % 5 for x in range(5)], 4))
    assert is_isomorphic(hol, make_affine_line(5, 2)) is not None
    with pytest.raises(ContractError):
        # x -> x + 1 is not an automorphism
        semidirect_product(Z3, Z2, power_action([1, 2, 0], 2))


def test_subgroup_closure():
    D = make_dihedral(7)
    assert subgroup_closure(D, [0]).order == 1
    assert subgroup_closure(D, [1]).order == 7
    assert subgroup_closure(make_cyclic(12), [2]).order == 6


def test_invariants_examples():
    triv = group_invariants(make_cyclic(1))
    assert (triv.order, triv.abelian, triv.histogram(), triv.center_order, triv.class_sizes, triv.derived_order) == (
        1, True, {1: 1}, 1, (1,), 1)
    assert group_invariants(make_cyclic(6)) == group_invariants(direct_product(make_cyclic(2), make_cyclic(3)))
    assert group_invariants(make_quaternion(2)).histogram() != group_invariants(make_dihedral(4)).histogram()


def test_sylow_2():
    assert sylow_2(make_cyclic(15)).order == 1
    P = sylow_2(make_dihedral(6))
    assert P.order == 4 and is_isomorphic(P.as_group(), direct_product(make_cyclic(2), make_cyclic(2))) is not None
    P = sylow_2(make_symmetric(4))
    assert P.order == 8 and is_isomorphic(P.as_group(), make_dihedral(4)) is not None


def test_index_two_subgroups():
    assert index_two_subgroups(make_alternating(5)) == []
    ga = index_two_subgroups(make_affine_line(5, 2))
    assert len(ga) == 1 and is_isomorphic(ga[0].as_group(), make_dihedral(5)) is not None
    assert [h.elements for h in index_two_subgroups(make_cyclic(4))] == [(0, 2)]
    assert len(index_two_subgroups(direct_product(make_cyclic(2), make_cyclic(2)))) == 3


def test_table_validation():
    with pytest.raises(ContractError):
        Group([[0, 1], [1, 1]])
    with pytest.raises(ContractError):
        Group([[1, 0], [0, 1]])
    # Latin square with identity that fails associativity
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    assert not is_associative(Group(bad))


def test_order_cap():
    assert get_order_cap() == 360
    with order_cap(20):
        with pytest.raises(CapacityError):
            make_cyclic(21)
        make_cyclic(20)
    assert get_order_cap() == 360


def test_dump_roundtrip_is_bit_exact():
    G = make_symmetric(4)
    text = dumps(G)
    H = loads(text)
    assert np.array_equal(G.table, H.table) and H.generators == G.generators
    assert dumps(H) == text
    assert set(json.loads(text)) == {"label", "order", "table", "generators"}


def test_dump_rejects_nonassociative():
    bad = [[0, 1, 2, 3, 4], [1, 0, 3, 4, 2], [2, 4, 0, 1, 3], [3, 2, 4, 0, 1], [4, 3, 1, 2, 0]]
    obj = {"label": "bad", "order": 5, "table": bad, "generators": []}
    with pytest.raises(ContractError):
        from_dump(obj)
    assert to_dump(make_cyclic(2))["table"] == [[0, 1], [1, 0]]
