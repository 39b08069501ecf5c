"""Obstruction kernels and their detection inside candidate groups.

Each kernel family is a parametrised finite group that cannot act on R^3
(unconditional families A, C, D, F), or cannot act with a prescribed
orientation-preserving subgroup (conditional families B, E).  The TwoGroup rule
additionally rejects any group whose Sylow 2-subgroup is not itself a finite
subgroup of O(3).
"""

from __future__ import annotations

import re
from dataclasses import dataclass, field
from functools import lru_cache

from .catalog import classify_in_o3
from .errors import ContractError, ParameterError
from .groups import (
    Group,
    SubgroupHandle,
    check_capacity,
    direct_product,
    make_cyclic,
    make_quaternion,
    power_action,
    semidirect_product,
    sylow_2,
)
from .morphisms import Embedding, find_embedding

VARIANTS = ("A", "B", "C", "D", "E", "F", "TwoGroup")
CONDITIONAL = frozenset({"B", "E"})


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    f = 2
    while f * f <= n:
        if n % f == 0:
            return False
        f += 1
    return True


def sqrt_minus_one(p: int) -> int:
    """Smallest n with n^2 = -1 (mod p)."""
    for n in range(1, p):
        if (n * n + 1) % p == 0:
            return n
    raise ParameterError(f"-1 is not a square mod {p}")


@dataclass(frozen=True)
class KernelSpec:
    variant: str
    params: tuple[int, ...] = ()

    def __post_init__(self):
        v, ps = self.variant, self.params
        arity = {"A": 2, "B": 1, "C": 2, "D": 1, "E": 1, "F": 1, "TwoGroup": 0}
        if v not in arity:
            raise ParameterError(f"unknown kernel variant {v!r}")
        if len(ps) != arity[v]:
            raise ParameterError(f"kernel {v} takes {arity[v]} parameters")
        odd_prime = lambda x: x > 2 and is_prime(x)  # noqa: E731
        ok = {
            "A": lambda: odd_prime(ps[0]) and odd_prime(ps[1]) and ps[0] != ps[1],
            "B": lambda: odd_prime(ps[0]),
            "C": lambda: odd_prime(ps[0]) and ps[1] >= 1,
            "D": lambda: is_prime(ps[0]) and ps[0] % 4 == 1,
            "E": lambda: odd_prime(ps[0]),
            "F": lambda: ps[0] >= 2,
            "TwoGroup": lambda: True,
        }[v]()
        if not ok:
            raise ParameterError(f"invalid parameters for kernel {v}: {ps}")

    @property
    def conditional(self) -> bool:
        return self.variant in CONDITIONAL

    @property
    def order(self) -> int | None:
        v, ps = self.variant, self.params
        if v == "A":
            return 2 * ps[0] * ps[1]
        if v in ("B", "E"):
            return 8 * ps[0]
        if v == "C":
            return 2 ** (ps[1] + 1) * ps[0]
        if v == "D":
            return 4 * ps[0]
        if v == "F":
            return 4 * ps[0]
        return None

    def __str__(self) -> str:
        if not self.params:
            return self.variant
        return f"{self.variant}({','.join(map(str, self.params))})"

    @classmethod
    def parse(cls, text: str) -> "KernelSpec":
        text = text.strip()
        if text == "TwoGroup":
            return cls("TwoGroup")
        m = re.fullmatch(r"([A-F])\(([\d,\s]+)\)", text)
        if not m:
            raise ParameterError(f"cannot parse kernel spec {text!r}")
        return cls(m.group(1), tuple(int(x) for x in m.group(2).split(",")))

    def sort_key(self):
        return (self.order or 0, VARIANTS.index(self.variant), self.params)


@lru_cache(maxsize=None)
def _specs_up_to(bound: int) -> tuple[KernelSpec, ...]:
    primes = [p for p in range(3, bound + 1) if is_prime(p)]
    specs = []
    for p in primes:
        for q in primes:
            if p != q and 2 * p * q <= bound:
                specs.append(KernelSpec("A", (p, q)))
        if 8 * p <= bound:
            specs += [KernelSpec("B", (p,)), KernelSpec("E", (p,))]
        k = 1
        while 2 ** (k + 1) * p <= bound:
            specs.append(KernelSpec("C", (p, k)))
            k += 1
        if p % 4 == 1 and 4 * p <= bound:
            specs.append(KernelSpec("D", (p,)))
    specs += [KernelSpec("F", (m,)) for m in range(2, bound // 4 + 1)]
    return tuple(sorted(specs, key=KernelSpec.sort_key))


def kernel_specs_up_to(order_bound: int) -> list[KernelSpec]:
    """Every kernel spec whose group order is at most ``order_bound``, sorted by order."""
    return list(_specs_up_to(order_bound))


@dataclass(frozen=True, eq=False)
class KernelInstance:
    spec: KernelSpec
    group: Group
    orientation: SubgroupHandle
    conditional: bool


def _negate_second(p: int, q: int) -> list[int]:
    """(x, y) -> (x, -y) on Z_p x Z_q, with (x, y) at index x q + y."""
    return [x * q + (-y) % q for x in range(p) for y in range(q)]


def _even_part(G: Group, cyclic_order: int) -> SubgroupHandle:
    # semidirect element (x, h) has index x * |H| + h
    return SubgroupHandle(G, tuple(i for i in range(G.order) if (i % cyclic_order) % 2 == 0))


def make_kernel(spec: KernelSpec) -> KernelInstance:
    if spec.variant == "TwoGroup":
        raise ParameterError("TwoGroup is a rule, not a group")
    # checked on every call: the cached instance must not bypass a lowered cap
    check_capacity(spec.order, f"kernel {spec}")
    return _build_kernel(spec)


@lru_cache(maxsize=None)
def _build_kernel(spec: KernelSpec) -> KernelInstance:
    v, ps = spec.variant, spec.params
    Z2 = make_cyclic(2)
    if v in ("A", "B", "E"):
        a, b = (4, ps[0]) if v == "B" else (ps[0], 4) if v == "E" else ps
        N = direct_product(make_cyclic(a), make_cyclic(b))
        G = semidirect_product(N, Z2, power_action(_negate_second(a, b), 2), str(spec))
        orientation = G.embedding("N")
    elif v == "C":
        p, k = ps
        m = 2 ** (k + 1)
        G = semidirect_product(make_cyclic(p), make_cyclic(m), power_action([(-x) % p for x in range(p)], m), str(spec))
        orientation = _even_part(G, m)
    elif v == "D":
        p = ps[0]
        r = sqrt_minus_one(p)
        G = semidirect_product(make_cyclic(p), make_cyclic(4), power_action([(r * x) % p for x in range(p)], 4), str(spec))
        orientation = _even_part(G, 4)
    else:
        m = ps[0]
        G = make_quaternion(m)
        G.label = str(spec)
        orientation = SubgroupHandle(G, tuple(range(2 * m)))
    return KernelInstance(spec, G, orientation, spec.conditional)


@dataclass(frozen=True)
class Obstruction:
    spec: KernelSpec
    witness: SubgroupHandle
    placement_ok: bool

    def to_json(self) -> dict:
        return {"spec": str(self.spec), "witness": list(self.witness.elements), "placement_ok": self.placement_ok}


@dataclass
class ObstructionScan:
    blocking: list[Obstruction] = field(default_factory=list)
    informational: list[Obstruction] = field(default_factory=list)
    notes: list[str] = field(default_factory=list)


def _respects(emb: Embedding, inst: KernelInstance, N: SubgroupHandle) -> bool:
    inside = N.element_set
    orient = inst.orientation.element_set
    return all((k in orient) == (y in inside) for k, y in enumerate(emb.witness.images))


def _check_orientation_subgroup(G: Group, N: SubgroupHandle) -> None:
    if N.parent is not G or 2 * N.order != G.order or not N.is_closed():
        raise ContractError("N must be an index-2 subgroup of G")


def scan_obstructions(G: Group, N: SubgroupHandle) -> ObstructionScan:
    """Search G for every kernel whose order divides |G|, plus the TwoGroup rule.

    Conditional kernels block only when some embedding carries the kernel's
    orientation subgroup onto the part of the copy lying in N; placements that
    do not are reported as informational.
    """
    _check_orientation_subgroup(G, N)
    scan = ObstructionScan()
    for spec in kernel_specs_up_to(G.order):
        if G.order % spec.order:
            continue
        inst = make_kernel(spec)
        if spec.conditional:
            emb = find_embedding(G, inst.group, respect=(inst.orientation, N))
            if emb is not None:
                scan.blocking.append(Obstruction(spec, emb.subgroup, True))
                continue
            emb = find_embedding(G, inst.group)
            if emb is not None:
                scan.informational.append(Obstruction(spec, emb.subgroup, False))
        else:
            emb = find_embedding(G, inst.group)
            if emb is not None:
                scan.blocking.append(Obstruction(spec, emb.subgroup, _respects(emb, inst, N)))
    P = sylow_2(G)
    if classify_in_o3(P.as_group(f"Syl2({G.label})")) is None:
        scan.blocking.append(Obstruction(KernelSpec("TwoGroup"), P, True))
    for p in range(3, G.order):
        if is_prime(p) and G.order % (2 * p * p) == 0 and find_embedding(G, _equal_prime_pattern(p)) is not None:
            scan.notes.append(f"A({p},{p}) pattern present (not blocking)")
    return scan


@lru_cache(maxsize=None)
def _equal_prime_pattern(p: int) -> Group:
    N = direct_product(make_cyclic(p), make_cyclic(p))
    return semidirect_product(N, make_cyclic(2), power_action(_negate_second(p, p), 2), f"A({p},{p})-pattern")


def detect_obstructions(G: Group, N: SubgroupHandle) -> list[Obstruction]:
    """Blocking obstructions for G with orientation-preserving subgroup N (empty = unobstructed)."""
    return scan_obstructions(G, N).blocking
