"""Finite groups as dense Cayley tables.

Every group is an ``order x order`` integer table whose entry ``(i, j)`` is the
index of the product ``i * j``.  Element ``0`` is always the identity.  Groups
are immutable once built; derived data (element orders, conjugacy classes,
invariants, automorphisms) is computed lazily and cached on the instance.
"""

from __future__ import annotations

import json
import threading
from collections import Counter
from contextlib import contextmanager
from dataclasses import dataclass
from math import gcd
from typing import Iterable, Mapping, Sequence

import numpy as np

from .errors import CapacityError, ContractError, EngineError, ParameterError

DEFAULT_ORDER_CAP = 360
MAX_PERMUTATION_DEGREE = 8

_order_cap = DEFAULT_ORDER_CAP


def get_order_cap() -> int:
    return _order_cap


def set_order_cap(cap: int) -> None:
    global _order_cap
    if cap < 1:
        raise ParameterError(f"order cap must be positive, got {cap}")
    _order_cap = int(cap)


@contextmanager
def order_cap(cap: int):
    """Temporarily change the order cap."""
    previous = _order_cap
    set_order_cap(cap)
    try:
        yield
    finally:
        set_order_cap(previous)


def check_capacity(order: int, what: str = "group") -> None:
    if order > _order_cap:
        raise CapacityError(f"{what} of order {order} exceeds order cap {_order_cap}")


class Group:
    """A finite group given by its multiplication table.

    ``table[i, j]`` is the product ``i * j`` (row = left factor).  The table is
    validated on construction: entries in range, element 0 acts as identity,
    and every row and column is a permutation.  Associativity is not checked
    here; see :func:`is_associative`.
    """

    def __init__(
        self,
        table,
        label: str = "",
        generators: Sequence[int] = (),
        *,
        embeddings: Mapping[str, Sequence[int]] | None = None,
    ):
        t = np.array(table, dtype=np.int32)
        if t.ndim != 2 or t.shape[0] != t.shape[1] or t.shape[0] == 0:
            raise ContractError(f"table must be a non-empty square array, got shape {t.shape}")
        n = t.shape[0]
        check_capacity(n)
        if t.min() < 0 or t.max() >= n:
            raise ContractError("table entry out of range")
        ar = np.arange(n)
        if not (np.array_equal(t[0], ar) and np.array_equal(t[:, 0], ar)):
            raise ContractError("element 0 is not an identity")
        if not (np.sort(t, axis=1) == ar).all() or not (np.sort(t, axis=0) == ar[:, None]).all():
            raise ContractError("table is not a Latin square")
        inv = np.argmax(t == 0, axis=1).astype(np.int32)
        if not (t[inv, ar] == 0).all():
            raise ContractError("left and right inverses disagree")
        t.setflags(write=False)
        inv.setflags(write=False)
        self.table = t
        self.order = n
        self.inverses = inv
        self.label = label
        self.generators = tuple(int(g) for g in generators)
        if any(not 0 <= g < n for g in self.generators):
            raise ContractError("generator index out of range")
        self.embeddings = {k: tuple(sorted(int(x) for x in v)) for k, v in (embeddings or {}).items()}
        self._cache: dict = {}
        self._lock = threading.RLock()

    identity = 0

    def __repr__(self) -> str:
        return f"Group({self.label or '?'}, order={self.order})"

    def __len__(self) -> int:
        return self.order

    def __getstate__(self):
        state = self.__dict__.copy()
        state["_cache"] = {}
        del state["_lock"]
        return state

    def __setstate__(self, state):
        self.__dict__.update(state)
        self._lock = threading.RLock()

    def cached(self, key, compute):
        """Return ``compute()`` memoised under ``key`` (computed at most once)."""
        try:
            return self._cache[key]
        except KeyError:
            pass
        with self._lock:
            if key not in self._cache:
                self._cache[key] = compute()
            return self._cache[key]

    @property
    def rows(self) -> list[list[int]]:
        """The table as nested Python lists, for fast scalar lookups."""
        return self.cached("rows", self.table.tolist)

    def mul(self, a: int, b: int) -> int:
        return int(self.table[a, b])

    def inv(self, a: int) -> int:
        return int(self.inverses[a])

    def power(self, a: int, k: int) -> int:
        k %= int(self.element_orders()[a])
        x = 0
        for _ in range(k):
            x = self.rows[x][a]
        return x

    def element_orders(self) -> np.ndarray:
        def compute():
            n = self.order
            ar = np.arange(n)
            orders = np.zeros(n, dtype=np.int64)
            cur = ar.copy()
            k = 1
            while True:
                hit = (cur == 0) & (orders == 0)
                orders[hit] = k
                if orders.all():
                    break
                cur = self.table[cur, ar]
                k += 1
            orders.setflags(write=False)
            return orders

        return self.cached("orders", compute)

    def conjugation_table(self) -> np.ndarray:
        """``C[g, x] = g x g^-1``."""

        def compute():
            c = self.table[self.table, self.inverses[:, None]]
            c.setflags(write=False)
            return c

        return self.cached("conj", compute)

    def conjugacy_classes(self) -> tuple[tuple[int, ...], ...]:
        def compute():
            conj = self.conjugation_table()
            seen = np.zeros(self.order, dtype=bool)
            classes = []
            for x in range(self.order):
                if seen[x]:
                    continue
                cls = np.unique(conj[:, x])
                seen[cls] = True
                classes.append(tuple(int(v) for v in cls))
            return tuple(classes)

        return self.cached("classes", compute)

    def class_sizes(self) -> np.ndarray:
        """Size of the conjugacy class of each element."""

        def compute():
            sizes = np.zeros(self.order, dtype=np.int64)
            for cls in self.conjugacy_classes():
                sizes[list(cls)] = len(cls)
            sizes.setflags(write=False)
            return sizes

        return self.cached("class_sizes", compute)

    def class_representatives(self) -> tuple[int, ...]:
        return tuple(cls[0] for cls in self.conjugacy_classes())

    def is_abelian(self) -> bool:
        return self.cached("abelian", lambda: bool(np.array_equal(self.table, self.table.T)))

    def center(self) -> "SubgroupHandle":
        def compute():
            central = np.nonzero(self.class_sizes() == 1)[0]
            return SubgroupHandle(self, tuple(int(x) for x in central))

        return self.cached("center", compute)

    def derived_subgroup(self) -> "SubgroupHandle":
        def compute():
            t = self.table
            inv = self.inverses
            xy = t
            xinv_yinv = t[inv[:, None], inv[None, :]]
            comm = np.unique(t[xy, xinv_yinv])
            return subgroup_closure(self, comm.tolist())

        return self.cached("derived", compute)

    def subgroup(self, elements: Iterable[int]) -> "SubgroupHandle":
        """Wrap ``elements`` as a subgroup, checking closure."""
        h = SubgroupHandle(self, tuple(sorted(set(int(x) for x in elements))))
        if not h.is_closed():
            raise ContractError("element set is not a subgroup")
        return h

    def whole(self) -> "SubgroupHandle":
        return SubgroupHandle(self, tuple(range(self.order)))

    def embedding(self, name: str) -> "SubgroupHandle":
        return SubgroupHandle(self, self.embeddings[name])


@dataclass(frozen=True, eq=False)
class SubgroupHandle:
    parent: Group
    elements: tuple[int, ...]

    def __len__(self) -> int:
        return len(self.elements)

    @property
    def order(self) -> int:
        return len(self.elements)

    def __contains__(self, x: int) -> bool:
        return x in self.element_set

    def __eq__(self, other) -> bool:
        return (
            isinstance(other, SubgroupHandle)
            and self.parent is other.parent
            and self.elements == other.elements
        )

    def __hash__(self) -> int:
        return hash((id(self.parent), self.elements))

    def __repr__(self) -> str:
        return f"SubgroupHandle({self.parent.label or '?'}, order={self.order})"

    @property
    def element_set(self) -> frozenset[int]:
        s = self.__dict__.get("_set")
        if s is None:
            s = frozenset(self.elements)
            object.__setattr__(self, "_set", s)
        return s

    def mask(self) -> np.ndarray:
        m = np.zeros(self.parent.order, dtype=bool)
        m[list(self.elements)] = True
        return m

    def is_closed(self) -> bool:
        if 0 not in self.element_set:
            return False
        el = np.array(self.elements)
        prods = self.parent.table[np.ix_(el, el)]
        return bool(self.mask()[prods].all())

    def is_normal(self) -> bool:
        conj = self.parent.conjugation_table()
        return bool(self.mask()[conj[:, list(self.elements)]].all())

    def index(self) -> int:
        return self.parent.order // self.order

    def as_group(self, label: str = "") -> Group:
        """The subgroup as a standalone group, relabelled in ascending order."""
        el = np.array(self.elements)
        pos = np.full(self.parent.order, -1, dtype=np.int64)
        pos[el] = np.arange(len(el))
        table = pos[self.parent.table[np.ix_(el, el)]]
        return Group(table, label or f"subgroup of {self.parent.label}")


@dataclass(frozen=True)
class InvariantVector:
    """Isomorphism-screening fingerprint of a group."""

    order: int
    abelian: bool
    order_histogram: tuple[tuple[int, int], ...]
    center_order: int
    class_sizes: tuple[int, ...]
    derived_order: int

    def histogram(self) -> dict[int, int]:
        return dict(self.order_histogram)

    def sort_key(self):
        return (
            self.order,
            not self.abelian,
            self.order_histogram,
            self.center_order,
            self.class_sizes,
            self.derived_order,
        )

    def to_json(self) -> dict:
        return {
            "order": self.order,
            "abelian": self.abelian,
            "order_histogram": {str(k): v for k, v in self.order_histogram},
            "center_order": self.center_order,
            "class_sizes": list(self.class_sizes),
            "derived_order": self.derived_order,
        }


def group_invariants(G: Group) -> InvariantVector:
    def compute():
        hist = Counter(int(o) for o in G.element_orders())
        return InvariantVector(
            order=G.order,
            abelian=G.is_abelian(),
            order_histogram=tuple(sorted(hist.items())),
            center_order=G.center().order,
            class_sizes=tuple(sorted(len(c) for c in G.conjugacy_classes())),
            derived_order=G.derived_subgroup().order,
        )

    return G.cached("invariants", compute)


def is_associative(G: Group, exhaustive: bool | None = None, samples: int = 20000) -> bool:
    """Check associativity of the table.

    Exhaustive for order <= 64 unless told otherwise; above that a fixed-seed
    sample of triples is checked.
    """
    t = G.table
    n = G.order
    if exhaustive is None:
        exhaustive = n <= 64
    if exhaustive:
        chunk = max(1, 4_000_000 // (n * n))
        for start in range(0, n, chunk):
            rows = t[start:start + chunk]
            left = t[rows]  # (ab)c
            right = rows[:, t]  # a(bc)
            if not np.array_equal(left, right):
                return False
        return True
    rng = np.random.default_rng(0)
    a, b, c = rng.integers(0, n, size=(3, samples))
    return bool(np.array_equal(t[t[a, b], c], t[a, t[b, c]]))


# ---------------------------------------------------------------------------
# constructors


def make_cyclic(n: int) -> Group:
    if n < 1:
        raise ParameterError(f"cyclic order must be positive, got {n}")
    check_capacity(n)
    ar = np.arange(n)
    return Group(np.add.outer(ar, ar) % n, f"Z{n}", [1] if n > 1 else [])


def make_dihedral(n: int) -> Group:
    """D_{2n}: a^i has index i, a^i b has index n + i."""
    if n < 1:
        raise ParameterError(f"dihedral parameter must be positive, got {n}")
    check_capacity(2 * n)
    idx = np.arange(2 * n)
    i, j = idx % n, idx // n
    # (a^i b^j)(a^k b^l) = a^(i + (-1)^j k) b^(j + l)
    sign = np.where(j == 1, -1, 1)
    rot = (i[:, None] + sign[:, None] * i[None, :]) % n
    ref = (j[:, None] + j[None, :]) % 2
    gens = [1, n] if n > 1 else [n]
    return Group(rot + n * ref, f"D{2 * n}", gens)


def make_quaternion(m: int) -> Group:
    """Q_{4m} = <x, y | x^2m, y^2 = x^m, y x y^-1 = x^-1>; x^i y^j has index i + 2m j."""
    if m < 2:
        raise ParameterError(f"generalized quaternion needs m >= 2, got {m}")
    check_capacity(4 * m)
    k = 2 * m
    idx = np.arange(2 * k)
    i, j = idx % k, idx // k
    sign = np.where(j == 1, -1, 1)
    rot = i[:, None] + sign[:, None] * i[None, :]
    both = (j[:, None] + j[None, :]) == 2
    rot = (rot + np.where(both, m, 0)) % k
    ref = (j[:, None] + j[None, :]) % 2
    return Group(rot + k * ref, f"Q{4 * m}", [1, k])


def make_unit_group(n: int) -> Group:
    """The multiplicative group of units mod n, elements in ascending order."""
    if n < 1:
        raise ParameterError(f"modulus must be positive, got {n}")
    units = [u for u in range(n) if gcd(u, n) == 1] if n > 1 else [0]
    check_capacity(len(units))
    pos = {u: i for i, u in enumerate(units)}
    table = [[pos[(a * b) % n] for b in units] for a in units]
    g = Group(table, f"U{n}")
    g.units = tuple(units)
    return g


def perm_from_cycles(degree: int, *cycles: Sequence[int]) -> tuple[int, ...]:
    p = list(range(degree))
    for cyc in cycles:
        for a, b in zip(cyc, list(cyc[1:]) + [cyc[0]]):
            p[a] = b
    return tuple(p)


def make_permutation_group(degree: int, gens: Sequence[Sequence[int]], label: str = "") -> Group:
    """Closure of ``gens`` under composition, as a Cayley table.

    Elements are sorted lexicographically as image tuples, so the identity
    permutation is element 0.  The product ``p * q`` is ``p o q`` (apply ``q``
    first).
    """
    if not 1 <= degree <= MAX_PERMUTATION_DEGREE:
        raise ParameterError(f"permutation degree must be in 1..{MAX_PERMUTATION_DEGREE}")
    gens = [tuple(int(x) for x in g) for g in gens]
    for g in gens:
        if sorted(g) != list(range(degree)):
            raise ParameterError(f"{g} is not a permutation of {degree} points")
    ident = tuple(range(degree))
    seen = {ident}
    frontier = [ident]
    while frontier:
        nxt = []
        for p in frontier:
            for g in gens:
                q = tuple(p[g[x]] for x in range(degree))
                if q not in seen:
                    seen.add(q)
                    check_capacity(len(seen), "permutation closure")
                    nxt.append(q)
        frontier = nxt
    perms = np.array(sorted(seen), dtype=np.int64)
    n = len(perms)
    weights = degree ** np.arange(degree - 1, -1, -1)
    codes = perms @ weights
    comp = perms[np.arange(n)[:, None, None], perms[None, :, :]]  # p_i(p_j(x))
    table = np.searchsorted(codes, comp @ weights)
    gen_idx = [int(np.searchsorted(codes, np.array(g) @ weights)) for g in gens]
    G = Group(table, label or f"Perm{degree}", gen_idx)
    G.permutations = tuple(tuple(int(x) for x in p) for p in perms)
    return G


def make_symmetric(d: int) -> Group:
    if d == 1:
        return make_permutation_group(1, [], "S1")
    return make_permutation_group(d, [perm_from_cycles(d, [0, 1]), perm_from_cycles(d, list(range(d)))], f"S{d}")


def make_alternating(d: int) -> Group:
    if d < 3:
        return make_permutation_group(max(d, 1), [], f"A{d}")
    gens = [perm_from_cycles(d, [i, i + 1, i + 2]) for i in range(d - 2)]
    return make_permutation_group(d, gens, f"A{d}")


def make_affine_line(p: int, multiplier: int) -> Group:
    """Permutation model of x -> x + 1 and x -> multiplier * x on Z_p."""
    if p > MAX_PERMUTATION_DEGREE:
        raise ParameterError("affine line degree exceeds permutation cap")
    shift = [(x + 1) % p for x in range(p)]
    scale = [(multiplier * x) % p for x in range(p)]
    return make_permutation_group(p, [shift, scale], f"GA(1,{p})")


def direct_product(G: Group, H: Group) -> Group:
    """(g, h) has index g * |H| + h; embeddings 'left' and 'right' are recorded."""
    n, m = G.order, H.order
    check_capacity(n * m)
    t = G.table[:, None, :, None].astype(np.int64) * m + H.table[None, :, None, :]
    gens = [g * m for g in G.generators] + list(H.generators)
    return Group(
        t.reshape(n * m, n * m),
        f"{G.label} x {H.label}",
        gens,
        embeddings={"left": [g * m for g in range(n)], "right": list(range(m))},
    )


def _as_images(a) -> list[int]:
    return list(getattr(a, "images", a))


def power_action(images: Sequence[int], k: int) -> list[list[int]]:
    """Action of Z_k on N sending generator 1 to the automorphism ``images``."""
    images = np.asarray(_as_images(images))
    cur = np.arange(len(images))
    out = []
    for _ in range(k):
        out.append(cur.tolist())
        cur = images[cur]
    return out


def semidirect_product(N: Group, H: Group, action, label: str = "") -> Group:
    """N x| H with (n1, h1)(n2, h2) = (n1 * action(h1)(n2), h1 h2).

    ``action`` is indexed by the elements of H; each entry is an image array
    (or anything with an ``images`` attribute) describing an automorphism of N.
    (n, h) has index n * |H| + h.
    """
    n, m = N.order, H.order
    check_capacity(n * m)
    if len(action) != m:
        raise ContractError("action must give one automorphism per element of H")
    A = np.array([_as_images(a) for a in action], dtype=np.int64)
    if A.shape != (m, n):
        raise ContractError("action images have the wrong length")
    ar = np.arange(n)
    for a in A:
        if not np.array_equal(np.sort(a), ar) or not np.array_equal(
            a[N.table], N.table[a[:, None], a[None, :]]
        ):
            raise ContractError("action contains a non-automorphism")
    composed = A[np.arange(m)[:, None, None], A[None, :, :]]  # A[h1][A[h2]]
    if not np.array_equal(composed, A[H.table]):
        raise ContractError("action is not a homomorphism H -> Aut(N)")
    first = N.table[ar[:, None, None], A[None, :, :]]  # (n1, h1, n2)
    t = first[:, :, :, None].astype(np.int64) * m + H.table[None, :, None, :]
    gens = [g * m for g in N.generators] + list(H.generators)
    return Group(
        t.reshape(n * m, n * m),
        label or f"{N.label} : {H.label}",
        gens,
        embeddings={"N": [x * m for x in range(n)], "H": list(range(m))},
    )


# ---------------------------------------------------------------------------
# subgroups


def subgroup_closure(G: Group, seed: Iterable[int]) -> SubgroupHandle:
    """Smallest subgroup of G containing ``seed``."""
    rows = G.rows
    gens = sorted({int(s) for s in seed} - {0})
    for s in gens:
        if not 0 <= s < G.order:
            raise ContractError(f"seed element {s} out of range")
    members = {0}
    queue = [0]
    while queue:
        x = queue.pop()
        r = rows[x]
        for s in gens:
            y = r[s]
            if y not in members:
                members.add(y)
                queue.append(y)
    return SubgroupHandle(G, tuple(sorted(members)))


def minimal_generating_sequence(G: Group) -> tuple[int, ...]:
    """Greedy generating sequence: repeatedly add the lowest element outside the closure."""

    def compute():
        gens: list[int] = []
        closure = {0}
        while len(closure) < G.order:
            g = next(x for x in range(G.order) if x not in closure)
            gens.append(g)
            closure = subgroup_closure(G, gens).element_set
        return tuple(gens)

    return G.cached("mingens", compute)


def normalizer(G: Group, H: SubgroupHandle) -> SubgroupHandle:
    conj = G.conjugation_table()
    ok = H.mask()[conj[:, list(H.elements)]].all(axis=1)
    return SubgroupHandle(G, tuple(int(x) for x in np.nonzero(ok)[0]))


def two_part(n: int) -> int:
    return n & -n


def sylow_2(G: Group) -> SubgroupHandle:
    """A Sylow 2-subgroup, grown one 2-element at a time inside normalizers."""

    def compute():
        target = two_part(G.order)
        orders = G.element_orders()
        P = SubgroupHandle(G, (0,))
        while P.order < target:
            N = normalizer(G, P)
            inside = P.element_set
            pick = next(
                (x for x in N.elements if x not in inside and two_part(int(orders[x])) == orders[x]),
                None,
            )
            if pick is None:
                raise EngineError(f"Sylow growth stalled at order {P.order} in {G.label}")
            P = subgroup_closure(G, P.elements + (pick,))
        if P.order != target:
            raise EngineError("Sylow growth overshot the 2-part")
        return P

    return G.cached("sylow2", compute)


def index_two_subgroups(G: Group) -> list[SubgroupHandle]:
    """All subgroups of index 2.

    Every such subgroup contains the derived subgroup and all squares, so they
    are the kernels of the nonzero functionals on the elementary abelian
    quotient G / <G', g^2>.
    """

    def compute():
        if G.order % 2:
            return []
        rows = G.rows
        squares = {rows[g][g] for g in range(G.order)}
        K = subgroup_closure(G, set(G.derived_subgroup().elements) | squares)
        coset = np.full(G.order, -1, dtype=np.int64)
        reps = []
        kel = np.array(K.elements)
        for g in range(G.order):
            if coset[g] < 0:
                coset[G.table[g, kel]] = len(reps)
                reps.append(g)
        span = {int(coset[0]): 0}
        bits = 0
        for g in range(G.order):
            if int(coset[g]) in span:
                continue
            for cid, vec in list(span.items()):
                span[int(coset[rows[reps[cid]][g]])] = vec | (1 << bits)
            bits += 1
        if len(span) != len(reps):
            raise EngineError("quotient by squares is not elementary abelian")
        vec = np.array([span[int(c)] for c in coset], dtype=np.int64)
        out = []
        for functional in range(1, 1 << bits):
            parity = np.zeros(G.order, dtype=np.int64)
            masked = vec & functional
            for b in range(bits):
                parity ^= (masked >> b) & 1
            out.append(SubgroupHandle(G, tuple(int(x) for x in np.nonzero(parity == 0)[0])))
        return sorted(out, key=lambda h: h.elements)

    return list(G.cached("index2", compute))


# ---------------------------------------------------------------------------
# dump format


def to_dump(G: Group) -> dict:
    return {
        "label": G.label,
        "order": G.order,
        "table": G.table.tolist(),
        "generators": list(G.generators),
    }


def from_dump(obj: Mapping) -> Group:
    G = Group(obj["table"], obj["label"], obj["generators"])
    if G.order != obj["order"]:
        raise ContractError("dump order does not match table")
    if not is_associative(G, exhaustive=True):
        raise ContractError("dumped table is not associative")
    return G


def dumps(G: Group) -> str:
    return json.dumps(to_dump(G), separators=(",", ":"))


def loads(text: str) -> Group:
    return from_dump(json.loads(text))


def make_cyclic_holomorph(n: int) -> Group:
    """Z_n x| Z_n^*, the unit u acting on Z_n by multiplication."""
    Zn = make_cyclic(n)
    U = make_unit_group(n)
    action = [[(u * x) % n for x in range(n)] for u in U.units]
    return semidirect_product(Zn, U, action, f"Z{n} : Z{n}*")
