"""Abstract isomorphism types of the finite subgroups of O(3).

Every finite subgroup of O(3) is abstractly isomorphic to a rotation group
(cyclic, dihedral, A_4, S_4, A_5) or to its direct product with Z_2.  The
"mixed" subgroups of O(3), which sit inside a rotation group of twice the
order as an index-2 pair, are abstractly isomorphic to members of these
families (Z_2n, D_2n, S_4, D_4n), so they add no new tags.
"""

from __future__ import annotations

import re
from dataclasses import dataclass
from functools import lru_cache

from .errors import ParameterError
from .groups import (
    Group,
    check_capacity,
    direct_product,
    make_alternating,
    make_cyclic,
    make_dihedral,
    make_symmetric,
)
from .morphisms import GroupMap, is_isomorphic

_PARAMETRIC = ("C", "C+", "D", "D+")
_POLYHEDRAL = {"T": 12, "O": 24, "I": 60}
# classification preference: parametric families, rotation polyhedra, then their products with Z_2
KIND_ORDER = ("C", "C+", "D", "D+", "T", "O", "I", "T+", "O+", "I+")


@dataclass(frozen=True, order=False)
class O3Family:
    kind: str
    n: int | None = None

    def __post_init__(self):
        if self.kind not in KIND_ORDER:
            raise ParameterError(f"unknown O(3) family {self.kind!r}")
        if self.kind in _PARAMETRIC:
            if self.n is None or self.n < 1:
                raise ParameterError(f"family {self.kind} needs a positive parameter")
        elif self.n is not None:
            raise ParameterError(f"family {self.kind} takes no parameter")

    @property
    def order(self) -> int:
        k, n = self.kind, self.n
        if k == "C":
            return n
        if k in ("C+", "D"):
            return 2 * n
        if k == "D+":
            return 4 * n
        base = _POLYHEDRAL[k.rstrip("+")]
        return 2 * base if k.endswith("+") else base

    def __str__(self) -> str:
        return f"{self.kind}({self.n})" if self.n is not None else self.kind

    @classmethod
    def parse(cls, tag: str) -> "O3Family":
        m = re.fullmatch(r"(C\+?|D\+?)\((\d+)\)|([TOI]\+?)", tag.strip())
        if not m:
            raise ParameterError(f"cannot parse O(3) tag {tag!r}")
        if m.group(3):
            return cls(m.group(3))
        return cls(m.group(1), int(m.group(2)))

    def sort_key(self):
        return (KIND_ORDER.index(self.kind), self.n or 0)


def catalog_group(family: O3Family) -> Group:
    check_capacity(family.order)
    return _build_catalog_group(family)


@lru_cache(maxsize=None)
def _build_catalog_group(family: O3Family) -> Group:
    k, n = family.kind, family.n
    if k == "C":
        G = make_cyclic(n)
    elif k == "C+":
        G = direct_product(make_cyclic(n), make_cyclic(2))
    elif k == "D":
        G = make_dihedral(n)
    elif k == "D+":
        G = direct_product(make_dihedral(n), make_cyclic(2))
    else:
        base = {"T": lambda: make_alternating(4), "O": lambda: make_symmetric(4), "I": lambda: make_alternating(5)}
        G = base[k.rstrip("+")]()
        if k.endswith("+"):
            G = direct_product(G, make_cyclic(2))
    G.label = str(family)
    return G


def families_of_order(m: int) -> list[O3Family]:
    out = [O3Family("C", m)]
    if m % 2 == 0:
        out += [O3Family("C+", m // 2), O3Family("D", m // 2)]
    if m % 4 == 0:
        out.append(O3Family("D+", m // 4))
    for kind in KIND_ORDER[4:]:
        fam = O3Family(kind)
        if fam.order == m:
            out.append(fam)
    return sorted(out, key=O3Family.sort_key)


@dataclass(frozen=True)
class CatalogEntry:
    family: O3Family
    group: Group
    duplicate_of: O3Family | None  # earlier entry of the same order it is isomorphic to


def o3_candidates_of_order(m: int) -> list[CatalogEntry]:
    """One group per family admitting order m, in preference order, duplicates flagged."""
    check_capacity(m)
    return list(_candidates(m))


@lru_cache(maxsize=None)
def _candidates(m: int) -> tuple[CatalogEntry, ...]:
    entries: list[CatalogEntry] = []
    for fam in families_of_order(m):
        G = catalog_group(fam)
        dup = next(
            (e.family for e in entries if e.duplicate_of is None and is_isomorphic(G, e.group) is not None),
            None,
        )
        entries.append(CatalogEntry(fam, G, dup))
    return tuple(entries)


def match_in_o3(G: Group) -> tuple[O3Family, GroupMap] | None:
    """First catalog family (in preference order) isomorphic to G, with the witness G -> instance."""
    if G.order > 0:
        check_capacity(G.order)
    for entry in _candidates(G.order):
        if entry.duplicate_of is not None:
            continue
        witness = is_isomorphic(G, entry.group)
        if witness is not None:
            return entry.family, witness
    return None


def classify_in_o3(G: Group) -> O3Family | None:
    hit = match_in_o3(G)
    return hit[0] if hit else None
