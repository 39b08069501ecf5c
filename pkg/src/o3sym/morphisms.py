"""Homomorphisms, automorphism groups, isomorphism and embedding search.

All searches share one backtracking engine: fix a generating sequence of the
source group, choose images for the generators one level at a time, and extend
the partial map along Cayley-graph edges (``f(x g_j) = f(x) h_j``).  A map that
survives every edge of the Cayley graph is a homomorphism, so no separate
verification pass is needed.  Candidates are tried in ascending index order
and the first witness wins, which keeps every output deterministic.
"""

from __future__ import annotations

from dataclasses import dataclass
from math import gcd
from typing import Callable, Iterator, Sequence

import numpy as np

from .errors import ContractError, ParameterError
from .groups import (
    Group,
    SubgroupHandle,
    group_invariants,
    make_dihedral,
    minimal_generating_sequence,
)


@dataclass
class SearchStats:
    """Counters filled in by a search; ``exhausted`` means the space was fully explored."""

    nodes: int = 0
    exhausted: bool = False
    pruned: str | None = None


@dataclass(frozen=True, eq=False)
class GroupMap:
    domain: Group
    codomain: Group
    images: tuple[int, ...]

    def __call__(self, x: int) -> int:
        return self.images[x]

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, GroupMap)
            and self.domain is other.domain
            and self.codomain is other.codomain
            and self.images == other.images
        )

    def __hash__(self) -> int:
        return hash((id(self.domain), id(self.codomain), self.images))

    def compose(self, other: "GroupMap") -> "GroupMap":
        """``self o other`` (apply ``other`` first)."""
        if other.codomain is not self.domain:
            raise ContractError("maps are not composable")
        mine = self.images
        return GroupMap(other.domain, self.codomain, tuple(mine[y] for y in other.images))

    def is_bijective(self) -> bool:
        return self.domain.order == self.codomain.order and len(set(self.images)) == self.domain.order

    def inverse(self) -> "GroupMap":
        if not self.is_bijective():
            raise ContractError("map is not invertible")
        inv = [0] * self.domain.order
        for x, y in enumerate(self.images):
            inv[y] = x
        return GroupMap(self.codomain, self.domain, tuple(inv))

    def is_homomorphism(self) -> bool:
        f = np.asarray(self.images)
        return bool(np.array_equal(f[self.domain.table], self.codomain.table[f[:, None], f[None, :]]))

    def image(self) -> SubgroupHandle:
        return SubgroupHandle(self.codomain, tuple(sorted(set(self.images))))

    def to_json(self) -> list[int]:
        return list(self.images)


def identity_map(G: Group) -> GroupMap:
    return GroupMap(G, G, tuple(range(G.order)))


def conjugation_map(G: Group, g: int) -> GroupMap:
    """x -> g x g^-1."""
    return GroupMap(G, G, tuple(int(v) for v in G.conjugation_table()[g]))


# ---------------------------------------------------------------------------
# backtracking engine


def _search(
    src: Group,
    dst: Group,
    gens: Sequence[int],
    cands: Sequence[Sequence[int]],
    *,
    src_mask=None,
    dst_mask=None,
    stats: SearchStats | None = None,
) -> Iterator[tuple[int, ...]]:
    """Yield image tuples of injective homomorphisms src -> dst.

    ``gens`` must generate ``src``; generator ``gens[i]`` is sent to an element
    of ``cands[i]``.  With masks, only maps with ``src_mask[x] == dst_mask[f(x)]``
    for every x are produced.
    """
    S = src.rows
    D = dst.rows
    img = [-1] * src.order
    img[0] = 0
    used = [False] * dst.order
    used[0] = True
    domain = [0]
    hs: list[int] = []
    r = len(gens)
    checked = src_mask is not None
    if checked:
        src_mask = [bool(v) for v in src_mask]
        dst_mask = [bool(v) for v in dst_mask]

    def extend(level: int):
        added: list[int] = []
        work = [(x, False) for x in domain]
        while work:
            x, full = work.pop()
            Sx = S[x]
            Dy = D[img[x]]
            for j in range(level + 1) if full else (level,):
                x2 = Sx[gens[j]]
                y2 = Dy[hs[j]]
                cur = img[x2]
                if cur < 0:
                    if used[y2] or (checked and src_mask[x2] != dst_mask[y2]):
                        _undo(added)
                        return None
                    img[x2] = y2
                    used[y2] = True
                    added.append(x2)
                    work.append((x2, True))
                elif cur != y2:
                    _undo(added)
                    return None
        domain.extend(added)
        return added

    def _undo(added):
        for x in added:
            used[img[x]] = False
            img[x] = -1

    def rec(level: int):
        if level == r:
            yield tuple(img)
            return
        for h in cands[level]:
            if stats is not None:
                stats.nodes += 1
            if checked and src_mask[gens[level]] != dst_mask[h]:
                continue
            hs.append(h)
            added = extend(level)
            if added is not None:
                yield from rec(level + 1)
                _undo(added)
                del domain[len(domain) - len(added):]
            hs.pop()

    yield from rec(0)
    if stats is not None:
        stats.exhausted = True


def _fingerprints(G: Group) -> list[tuple[int, int]]:
    def compute():
        return list(zip(G.element_orders().tolist(), G.class_sizes().tolist()))

    return G.cached("fingerprints", compute)


def _class_minima(G: Group) -> set[int]:
    return G.cached("class_minima", lambda: set(G.class_representatives()))


def _iso_candidates(G: Group, H: Group, gens: Sequence[int], reduce_first: bool) -> list[list[int]]:
    fg, fh = _fingerprints(G), _fingerprints(H)
    by_fp: dict[tuple[int, int], list[int]] = {}
    for h, fp in enumerate(fh):
        by_fp.setdefault(fp, []).append(h)
    cands = [by_fp.get(fg[g], []) for g in gens]
    if reduce_first and cands:
        reps = _class_minima(H)
        cands[0] = [h for h in cands[0] if h in reps]
    return cands


# ---------------------------------------------------------------------------
# automorphisms


@dataclass(frozen=True, eq=False)
class AutomorphismGroup:
    base: Group
    elements: tuple[GroupMap, ...]
    composition_table: Group

    @property
    def order(self) -> int:
        return len(self.elements)

    def index(self, f: GroupMap) -> int:
        return self._positions[f.images]

    @property
    def _positions(self) -> dict[tuple[int, ...], int]:
        pos = self.__dict__.get("_pos")
        if pos is None:
            pos = {f.images: i for i, f in enumerate(self.elements)}
            object.__setattr__(self, "_pos", pos)
        return pos


def automorphism_group(G: Group) -> AutomorphismGroup:
    """All automorphisms of G; element 0 of the composition table is the identity map.

    ``composition_table[i, j]`` is the index of ``elements[i] o elements[j]``.
    """

    def compute():
        gens = minimal_generating_sequence(G)
        cands = _iso_candidates(G, G, gens, reduce_first=False)
        found = list(_search(G, G, gens, cands))
        ident = tuple(range(G.order))
        found.remove(ident)
        found.insert(0, ident)
        arr = np.array(found, dtype=np.int64).reshape(len(found), G.order)
        pos = {f: i for i, f in enumerate(found)}
        k = len(found)
        comp = arr[np.arange(k)[:, None, None], arr[None, :, :]]
        table = [[pos[tuple(row)] for row in comp[i].tolist()] for i in range(k)]
        maps = tuple(GroupMap(G, G, f) for f in found)
        return AutomorphismGroup(G, maps, Group(table, f"Aut({G.label})"))

    return G.cached("aut", compute)


def inner_automorphism_group(G: Group) -> tuple[SubgroupHandle, int]:
    """Inner automorphisms as a subgroup of the composition table, and |Out(G)|."""
    aut = automorphism_group(G)
    conj = G.conjugation_table()
    idx = sorted({aut.index(GroupMap(G, G, tuple(int(v) for v in conj[g]))) for g in range(G.order)})
    inn = SubgroupHandle(aut.composition_table, tuple(idx))
    return inn, aut.order // inn.order


# ---------------------------------------------------------------------------
# isomorphism and embeddings


def _reduction_allowed(respect_target: SubgroupHandle | None) -> bool:
    # conjugating a witness by a target element keeps it valid iff the
    # constrained target subgroup is normal
    return respect_target is None or respect_target.is_normal()


def is_isomorphic(
    G: Group,
    H: Group,
    *,
    respect: tuple[SubgroupHandle, SubgroupHandle] | None = None,
    stats: SearchStats | None = None,
) -> GroupMap | None:
    """An isomorphism G -> H, or None.

    With ``respect=(A, B)`` the isomorphism must carry the subgroup A of G onto
    the subgroup B of H.
    """
    if G.order != H.order or group_invariants(G) != group_invariants(H):
        if stats is not None:
            stats.pruned = "invariants"
            stats.exhausted = True
        return None
    masks = {}
    if respect is not None:
        A, B = respect
        if A.parent is not G or B.parent is not H:
            raise ContractError("respect subgroups belong to the wrong groups")
        if A.order != B.order:
            if stats is not None:
                stats.pruned = "respect order"
                stats.exhausted = True
            return None
        masks = {"src_mask": A.mask(), "dst_mask": B.mask()}
    gens = minimal_generating_sequence(G)
    cands = _iso_candidates(G, H, gens, _reduction_allowed(respect[1] if respect else None))
    for images in _search(G, H, gens, cands, stats=stats, **masks):
        return GroupMap(G, H, images)
    return None


@dataclass(frozen=True)
class Embedding:
    subgroup: SubgroupHandle
    witness: GroupMap  # isomorphism from the embedded group onto ``subgroup``


def histogram_dominated(K: Group, G: Group) -> bool:
    hk = group_invariants(K).histogram()
    hg = group_invariants(G).histogram()
    return all(hg.get(o, 0) >= c for o, c in hk.items())


def find_embedding(
    G: Group,
    K: Group,
    *,
    respect: tuple[SubgroupHandle, SubgroupHandle] | None = None,
    stats: SearchStats | None = None,
) -> Embedding | None:
    """A subgroup of G isomorphic to K, with the witness K -> G.

    ``respect=(A, B)`` with A <= K and B <= G restricts to embeddings f with
    ``k in A  <=>  f(k) in B`` for every k in K.
    """
    if stats is None:
        stats = SearchStats()
    if G.order % K.order:
        stats.pruned, stats.exhausted = "lagrange", True
        return None
    if not histogram_dominated(K, G):
        stats.pruned, stats.exhausted = "histogram", True
        return None
    masks = {}
    if respect is not None:
        A, B = respect
        if A.parent is not K or B.parent is not G:
            raise ContractError("respect subgroups belong to the wrong groups")
        masks = {"src_mask": A.mask(), "dst_mask": B.mask()}
    gens = minimal_generating_sequence(K)
    orders_g = G.element_orders().tolist()
    orders_k = K.element_orders()
    by_order: dict[int, list[int]] = {}
    for x, o in enumerate(orders_g):
        by_order.setdefault(o, []).append(x)
    cands = [by_order.get(int(orders_k[g]), []) for g in gens]
    if cands and _reduction_allowed(respect[1] if respect else None):
        reps = _class_minima(G)
        cands[0] = [x for x in cands[0] if x in reps]
    for images in _search(K, G, gens, cands, stats=stats, **masks):
        witness = GroupMap(K, G, images)
        return Embedding(witness.image(), witness)
    return None


# ---------------------------------------------------------------------------
# dihedral automorphism coordinates


@dataclass(frozen=True)
class DihedralAutCoord:
    """The automorphism a -> a^s, b -> a^t b of D_{2n}."""

    n: int
    t: int
    s: int

    def __post_init__(self):
        if self.n < 3:
            raise ParameterError("dihedral coordinates need n >= 3")
        if gcd(self.s, self.n) != 1:
            raise ParameterError(f"s = {self.s} is not a unit mod {self.n}")
        object.__setattr__(self, "t", self.t % self.n)
        object.__setattr__(self, "s", self.s % self.n)

    def compose(self, other: "DihedralAutCoord") -> "DihedralAutCoord":
        """``self o other``: (t, s)(t', s') = (t + s t', s s')."""
        n = self.n
        return DihedralAutCoord(n, self.t + self.s * other.t, self.s * other.s)

    def images(self) -> tuple[int, ...]:
        n, t, s = self.n, self.t, self.s
        rot = [(s * i) % n for i in range(n)]
        ref = [n + (s * i + t) % n for i in range(n)]
        return tuple(rot + ref)


def dihedral_aut_coords(
    n: int, D: Group | None = None
) -> tuple[Callable[[int, int], GroupMap], Callable[[GroupMap], DihedralAutCoord]]:
    """Bijection between Z_n x| Z_n^* coordinates and automorphisms of ``make_dihedral(n)``."""
    if n < 3:
        raise ParameterError("dihedral coordinates need n >= 3")
    if D is None:
        D = make_dihedral(n)
    if D.order != 2 * n:
        raise ContractError("group is not D_2n for this n")

    def coord_to_map(t: int, s: int) -> GroupMap:
        return GroupMap(D, D, DihedralAutCoord(n, t, s).images())

    def map_to_coord(f: GroupMap) -> DihedralAutCoord:
        if f.domain is not D:
            raise ContractError("map is not an automorphism of this dihedral group")
        s = f.images[1]
        t = f.images[n] - n
        if not 0 <= s < n or not 0 <= t < n:
            raise ContractError("map does not have dihedral coordinate form")
        coord = DihedralAutCoord(n, t, s)
        if coord.images() != f.images:
            raise ContractError("map does not have dihedral coordinate form")
        return coord

    return coord_to_map, map_to_coord
