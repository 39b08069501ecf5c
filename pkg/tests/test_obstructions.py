import pytest

from o3sym.catalog import classify_in_o3
from o3sym.errors import CapacityError, ContractError, ParameterError
from o3sym.extensions import ExtensionDatum, build_extension, extension_classes
from o3sym.groups import (
    SubgroupHandle,
    index_two_subgroups,
    make_affine_line,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_quaternion,
    make_symmetric,
    order_cap,
    subgroup_closure,
)
from o3sym.morphisms import GroupMap, is_isomorphic
from o3sym.obstructions import (
    KernelSpec,
    _equal_prime_pattern,
    detect_obstructions,
    kernel_specs_up_to,
    make_kernel,
    scan_obstructions,
    sqrt_minus_one,
)


def specs(*texts):
    return [KernelSpec.parse(t) for t in texts]


def test_spec_enumeration():
    assert kernel_specs_up_to(7) == []
    assert set(kernel_specs_up_to(12)) == set(specs("F(2)", "C(3,1)", "F(3)"))
    assert KernelSpec("A", (3, 5)).order == 30
    orders = [s.order for s in kernel_specs_up_to(200)]
    assert orders == sorted(orders) and max(orders) <= 200


def test_spec_validation():
    for bad in [("A", (3, 3)), ("A", (2, 5)), ("D", (7,)), ("D", (3,)), ("F", (1,)), ("C", (3, 0)), ("B", (2,))]:
        with pytest.raises(ParameterError):
            KernelSpec(*bad)
    assert str(KernelSpec.parse("C(5, 2)")) == "C(5,2)"
    with pytest.raises(ParameterError):
        KernelSpec.parse("G(3)")


def test_sqrt_minus_one():
    assert [sqrt_minus_one(p) for p in (5, 13, 17)] == [2, 5, 4]
    with pytest.raises(ParameterError):
        sqrt_minus_one(7)


def test_kernel_instances():
    f2 = make_kernel(KernelSpec("F", (2,)))
    assert is_isomorphic(f2.group, make_quaternion(2)) is not None
    assert is_isomorphic(f2.orientation.as_group(), make_cyclic(4)) is not None
    d5 = make_kernel(KernelSpec("D", (5,)))
    assert d5.group.order == 20 and is_isomorphic(d5.group, make_affine_line(5, 2)) is not None
    a35 = make_kernel(KernelSpec("A", (3, 5)))
    assert a35.group.order == 30 and a35.group.center().order == 3
    assert make_kernel(KernelSpec("B", (3,))).conditional
    with pytest.raises(ParameterError):
        make_kernel(KernelSpec("TwoGroup"))
    make_kernel(KernelSpec("F", (26,)))
    with order_cap(100):
        # a cached instance must still honour the lowered cap
        with pytest.raises(CapacityError):
            make_kernel(KernelSpec("F", (26,)))


def test_detection_examples():
    f2 = make_kernel(KernelSpec("F", (2,)))
    assert KernelSpec("F", (2,)) in [o.spec for o in detect_obstructions(f2.group, f2.orientation)]
    Z10 = make_cyclic(10)
    assert detect_obstructions(Z10, subgroup_closure(Z10, [2])) == []
    S5 = make_symmetric(5)
    (A5,) = index_two_subgroups(S5)
    assert KernelSpec("D", (5,)) in [o.spec for o in detect_obstructions(S5, A5)]


def test_modular_group_of_order_16_hits_two_group_rule():
    Z8 = make_cyclic(8)
    pair = build_extension(ExtensionDatum(Z8, GroupMap(Z8, Z8, tuple((5 * x) % 8 for x in range(8))), 0))
    assert [str(o.spec) for o in detect_obstructions(pair.group, pair.n_embed)] == ["TwoGroup"]


def test_contract_on_orientation_subgroup():
    S4 = make_symmetric(4)
    with pytest.raises(ContractError):
        detect_obstructions(S4, subgroup_closure(S4, [1]))


@pytest.mark.parametrize("spec", kernel_specs_up_to(120), ids=str)
def test_self_detection(spec):
    inst = make_kernel(spec)
    assert spec in [o.spec for o in detect_obstructions(inst.group, inst.orientation)]


@pytest.mark.parametrize("spec", [s for s in kernel_specs_up_to(200) if not s.conditional], ids=str)
def test_unconditional_kernels_are_not_o3_groups(spec):
    assert classify_in_o3(make_kernel(spec).group) is None


@pytest.mark.parametrize("spec", kernel_specs_up_to(120), ids=str)
def test_orientation_subgroup_is_index_two(spec):
    inst = make_kernel(spec)
    subs = index_two_subgroups(inst.group)
    assert inst.orientation in subs
    if spec.variant == "C":
        assert subs == [inst.orientation]


def test_conditional_kernel_with_wrong_placement_is_informational():
    pair = extension_classes(make_dihedral(6)).representatives[0]
    scan = scan_obstructions(pair.group, pair.n_embed)
    assert "B(3)" in [str(o.spec) for o in scan.informational]
    assert "B(3)" not in [str(o.spec) for o in scan.blocking]


def test_equal_prime_pattern_is_noted_not_blocking():
    G = _equal_prime_pattern(3)
    N = SubgroupHandle(G, tuple(x for x in range(G.order) if x % 2 == 0))
    scan = scan_obstructions(G, N)
    assert scan.blocking == []
    assert any("A(3,3)" in note for note in scan.notes)


def _relative(S, N):
    """S as a standalone group with S n N transported along."""
    H = S.as_group()
    pos = {x: i for i, x in enumerate(S.elements)}
    return H, SubgroupHandle(H, tuple(sorted(pos[x] for x in S.elements if x in N)))


@pytest.mark.parametrize("base", [make_cyclic(12), make_dihedral(6), make_alternating(4)], ids=lambda g: g.label)
def test_monotonicity_under_subgroups(base):
    unconditional = lambda obs: [o for o in obs if o.spec.variant in "ACDF"]  # noqa: E731
    for pair in extension_classes(base).representatives:
        G, N = pair.group, pair.n_embed
        whole = unconditional(detect_obstructions(G, N))
        for x in range(G.order):
            for y in (G.order // 2, G.order - 1):
                S = subgroup_closure(G, [x, y])
                if S.order == G.order or all(e in N for e in S.elements):
                    continue
                H, M = _relative(S, N)
                if unconditional(detect_obstructions(H, M)):
                    assert whole
