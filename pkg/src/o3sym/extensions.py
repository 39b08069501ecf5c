"""Extensions of a finite group N by Z_2.

An extension is encoded by transversal data (phi, c): pick an element b outside
N, then phi is conjugation by b restricted to N and c = b^2.  Conversely any
phi in Aut(N) and c in N with phi(c) = c and phi^2 = (conjugation by c) define
an extension on pairs (x, e), e in {0, 1}, where (x, 1) stands for x b.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass

import numpy as np

from .errors import ContractError
from .groups import Group, SubgroupHandle, check_capacity, group_invariants, is_associative, to_dump
from .morphisms import GroupMap, automorphism_group, is_isomorphic


@dataclass(frozen=True, eq=False)
class ExtensionDatum:
    base: Group
    phi: GroupMap
    c: int

    def __post_init__(self):
        N = self.base
        if self.phi.domain is not N or self.phi.codomain is not N:
            raise ContractError("phi must be an endomorphism of the base group")
        if not 0 <= self.c < N.order:
            raise ContractError("c must be an element of the base group")
        if self.phi(self.c) != self.c:
            raise ContractError("phi must fix c")
        conj_c = tuple(int(v) for v in N.conjugation_table()[self.c])
        if self.phi.compose(self.phi).images != conj_c:
            raise ContractError("phi^2 must equal conjugation by c")

    def to_json(self) -> dict:
        return {"phi": self.phi.to_json(), "c": self.c}


@dataclass(frozen=True, eq=False)
class ExtensionPair:
    group: Group
    n_embed: SubgroupHandle
    datum: ExtensionDatum
    split: bool

    def to_json(self) -> dict:
        return {"datum": self.datum.to_json(), "group": to_dump(self.group), "split": self.split}


def enumerate_extension_data(N: Group) -> list[ExtensionDatum]:
    """Every (phi, c) with phi(c) = c and phi^2 = conj_c, phi in automorphism order, c ascending."""
    check_capacity(2 * N.order, "extension")
    aut = automorphism_group(N)
    conj = N.conjugation_table()
    by_conj: dict[tuple[int, ...], list[int]] = {}
    for c in range(N.order):
        by_conj.setdefault(tuple(conj[c].tolist()), []).append(c)
    data = []
    for phi in aut.elements:
        square = phi.compose(phi).images
        for c in by_conj.get(square, []):
            if phi(c) == c:
                data.append(ExtensionDatum(N, phi, c))
    return data


def build_extension(datum: ExtensionDatum) -> ExtensionPair:
    """Build the extension; (x, e) has index x + e |N|, so N sits on 0..|N|-1."""
    N = datum.base
    n = N.order
    check_capacity(2 * n, "extension")
    T = N.table.astype(np.int64)
    phi = np.asarray(datum.phi.images)
    t_phi = T[:, phi]  # x * phi(y)
    table = np.block([
        [T, T + n],
        [t_phi + n, T[t_phi, datum.c]],
    ])
    G = Group(table, f"{N.label}.2", list(N.generators) + [n], embeddings={"N": range(n)})
    if not is_associative(G, exhaustive=True):
        raise ContractError("extension table is not associative")
    pair = ExtensionPair(G, G.embedding("N"), datum, False)
    return ExtensionPair(G, pair.n_embed, datum, is_split(pair))


def is_split(pair: ExtensionPair) -> bool:
    """True iff some element of order <= 2 lies outside the distinguished copy of N."""
    orders = pair.group.element_orders()
    outside = ~pair.n_embed.mask()
    return bool((orders[outside] <= 2).any())


def pair_key(pair: ExtensionPair):
    """Pair-isomorphism invariant: group invariants plus the outside-coset fingerprint."""
    G = pair.group
    inside = pair.n_embed.mask()
    orders = G.element_orders()
    sizes = G.class_sizes()
    outside = Counter(
        (int(orders[x]), int(sizes[x])) for x in range(G.order) if not inside[x]
    )
    return (group_invariants(G).sort_key(), tuple(sorted(outside.items())))


def pair_isomorphism(P: ExtensionPair, Q: ExtensionPair) -> GroupMap | None:
    """A group isomorphism carrying P's copy of N onto Q's, or None."""
    return is_isomorphic(P.group, Q.group, respect=(P.n_embed, Q.n_embed))


@dataclass(frozen=True, eq=False)
class ExtensionClasses:
    base: Group
    data: tuple[ExtensionDatum, ...]
    pairs: tuple[ExtensionPair, ...]
    representatives: tuple[ExtensionPair, ...]
    collapse: tuple[int, ...]  # datum index -> representative index
    members: tuple[tuple[int, ...], ...]  # representative index -> datum indices


def extension_classes(N: Group) -> ExtensionClasses:
    """All extensions of N by Z_2, deduplicated up to pair-isomorphism."""

    def compute():
        data = enumerate_extension_data(N)
        pairs = [build_extension(d) for d in data]
        buckets: dict = {}
        found: list[int] = []
        collapse_found: list[int] = []
        for i, P in enumerate(pairs):
            bucket = buckets.setdefault(pair_key(P), [])
            for slot in bucket:
                if pair_isomorphism(P, pairs[found[slot]]) is not None:
                    collapse_found.append(slot)
                    break
            else:
                bucket.append(len(found))
                collapse_found.append(len(found))
                found.append(i)
        order = sorted(
            range(len(found)),
            key=lambda k: (group_invariants(pairs[found[k]].group).sort_key(), k),
        )
        rank = {slot: r for r, slot in enumerate(order)}
        collapse = tuple(rank[s] for s in collapse_found)
        members = tuple(
            tuple(i for i, r in enumerate(collapse) if r == k) for k in range(len(order))
        )
        return ExtensionClasses(
            N,
            tuple(data),
            tuple(pairs),
            tuple(pairs[found[slot]] for slot in order),
            collapse,
            members,
        )

    return N.cached("extension_classes", compute)


def enumerate_extensions(N: Group) -> list[ExtensionPair]:
    return list(extension_classes(N).representatives)
