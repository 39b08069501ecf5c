"""Finite-group engine for deciding which Z_2-extensions are isomorphic to subgroups of O(3)."""

from .catalog import O3Family, catalog_group, classify_in_o3, match_in_o3, o3_candidates_of_order
from .errors import CapacityError, ContractError, EngineError, O3SymError, ParameterError
from .extensions import (
    ExtensionDatum,
    ExtensionPair,
    build_extension,
    enumerate_extension_data,
    enumerate_extensions,
    extension_classes,
    pair_isomorphism,
)
from .groups import (
    Group,
    InvariantVector,
    SubgroupHandle,
    direct_product,
    dumps,
    group_invariants,
    index_two_subgroups,
    loads,
    make_affine_line,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_permutation_group,
    make_quaternion,
    make_symmetric,
    make_unit_group,
    order_cap,
    semidirect_product,
    set_order_cap,
)
from .morphisms import GroupMap, automorphism_group, find_embedding, inner_automorphism_group, is_isomorphic
from .obstructions import KernelSpec, Obstruction, detect_obstructions, kernel_specs_up_to, make_kernel

__all__ = [
    "automorphism_group",
    "build_extension",
    "CapacityError",
    "catalog_group",
    "classify_in_o3",
    "ContractError",
    "detect_obstructions",
    "direct_product",
    "dumps",
    "EngineError",
    "enumerate_extension_data",
    "enumerate_extensions",
    "extension_classes",
    "ExtensionDatum",
    "ExtensionPair",
    "find_embedding",
    "Group",
    "group_invariants",
    "GroupMap",
    "index_two_subgroups",
    "inner_automorphism_group",
    "InvariantVector",
    "is_isomorphic",
    "kernel_specs_up_to",
    "KernelSpec",
    "loads",
    "make_affine_line",
    "make_alternating",
    "make_cyclic",
    "make_dihedral",
    "make_kernel",
    "make_permutation_group",
    "make_quaternion",
    "make_symmetric",
    "make_unit_group",
    "match_in_o3",
    "o3_candidates_of_order",
    "O3Family",
    "O3SymError",
    "Obstruction",
    "order_cap",
    "pair_isomorphism",
    "ParameterError",
    "semidirect_product",
    "set_order_cap",
    "SubgroupHandle",
]
