"""Exhaustive verification sweeps and their machine-readable reports.

Each suite is split into independent tasks (one per parameter value or case
family).  Tasks may run in a process pool; results are merged in task order,
so the report bytes do not depend on the number of jobs.
"""

from __future__ import annotations

import json
import os
from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
from math import gcd
from pathlib import Path
from typing import Callable

from .catalog import classify_in_o3
from .errors import CapacityError, ParameterError
from .extensions import ExtensionPair, extension_classes
from .groups import (
    Group,
    InvariantVector,
    direct_product,
    dumps,
    get_order_cap,
    group_invariants,
    index_two_subgroups,
    make_affine_line,
    make_alternating,
    make_cyclic,
    make_cyclic_holomorph,
    make_dihedral,
    make_symmetric,
    order_cap,
    set_order_cap,
    subgroup_closure,
)
from .morphisms import automorphism_group, dihedral_aut_coords, find_embedding, inner_automorphism_group, is_isomorphic
from .obstructions import KernelSpec, detect_obstructions, kernel_specs_up_to, make_kernel, scan_obstructions

PASS_CATALOG = "PASS_CATALOG"
PASS_OBSTRUCTED = "PASS_OBSTRUCTED"
FAIL = "FAIL"

SUITES = ("cyclic", "dihedral", "polyhedral", "aut-dihedral", "kernels")
DEFAULT_MAX_N = {"cyclic": 30, "dihedral": 12, "polyhedral": 1, "aut-dihedral": 12, "kernels": 200}


@dataclass(frozen=True)
class RunConfig:
    max_n: int
    jobs: int = 1
    format: str = "json"
    order_cap: int = 360
    dump_dir: str | None = None

    def __post_init__(self):
        if self.max_n < 1:
            raise ParameterError("max_n must be >= 1")
        if self.jobs < 1:
            raise ParameterError("jobs must be >= 1")
        if self.format not in ("json", "tsv"):
            raise ParameterError(f"unknown format {self.format!r}")

    def header(self) -> dict:
        # jobs is deliberately absent: reports must not depend on it
        return {"max_n": self.max_n, "order_cap": self.order_cap, "dump_groups": self.dump_dir is not None}


@dataclass
class VerdictRecord:
    case_id: str
    order: int
    invariants: InvariantVector
    o3_tag: str | None
    obstructions: list[dict]
    verdict: str
    split: bool | None = None
    group_dump_ref: str | None = None
    notes: list[str] = field(default_factory=list)

    def to_json(self) -> dict:
        return {
            "case_id": self.case_id,
            "order": self.order,
            "group_dump_ref": self.group_dump_ref,
            "invariants": self.invariants.to_json(),
            "o3_tag": self.o3_tag,
            "obstructions": self.obstructions,
            "split": self.split,
            "verdict": self.verdict,
            "notes": self.notes,
        }

    def tsv(self) -> str:
        obs = ",".join(o["spec"] for o in self.obstructions) or "-"
        return "\t".join([self.case_id, str(self.order), self.o3_tag or "-", obs, self.verdict])


@dataclass
class CheckRecord:
    check: str
    ok: bool
    detail: dict = field(default_factory=dict)

    def to_json(self) -> dict:
        return {"check": self.check, "ok": self.ok, "detail": self.detail}

    def tsv(self) -> str:
        return "\t".join([self.check, "-", "-", "-", "CHECK_PASS" if self.ok else "CHECK_FAIL"])


@dataclass
class Report:
    suite: str
    config: RunConfig
    entries: list

    @property
    def records(self) -> list[VerdictRecord]:
        return [e for e in self.entries if isinstance(e, VerdictRecord)]

    @property
    def checks(self) -> list[CheckRecord]:
        return [e for e in self.entries if isinstance(e, CheckRecord)]

    def summary(self) -> dict:
        verdicts = [r.verdict for r in self.records]
        return {
            "pass_catalog": verdicts.count(PASS_CATALOG),
            "pass_obstructed": verdicts.count(PASS_OBSTRUCTED),
            "fail": verdicts.count(FAIL),
            "checks": len(self.checks),
            "checks_failed": sum(not c.ok for c in self.checks),
        }

    @property
    def exit_code(self) -> int:
        s = self.summary()
        return 1 if s["fail"] or s["checks_failed"] else 0

    def to_jsonl(self) -> str:
        lines = [json.dumps({"suite": self.suite, "config": self.config.header()})]
        lines += [json.dumps(e.to_json()) for e in self.entries]
        lines.append(json.dumps({"summary": self.summary()}))
        return "\n".join(lines) + "\n"

    def tsv_rows(self) -> list[str]:
        return [e.tsv() for e in self.entries]


TSV_HEADER = "case_id\torder\to3_tag\tobstructions\tverdict"


def render(reports: list[Report], fmt: str) -> str:
    if fmt == "tsv":
        rows = [TSV_HEADER]
        for r in reports:
            rows += r.tsv_rows()
        return "\n".join(rows) + "\n"
    return "".join(r.to_jsonl() for r in reports)


# ---------------------------------------------------------------------------
# shared helpers


def _dump(G: Group, case_id: str, dump_dir: str | None) -> str | None:
    if dump_dir is None:
        return None
    name = case_id.replace("/", "__").replace("=", "-") + ".json"
    path = Path(dump_dir)
    path.mkdir(parents=True, exist_ok=True)
    (path / name).write_text(dumps(G) + "\n")
    return name


def _judge(
    case_id: str,
    pair: ExtensionPair,
    dump_dir: str | None,
    targets: dict[str, Group] | None = None,
    require_split: bool = False,
) -> VerdictRecord:
    G = pair.group
    scan = scan_obstructions(G, pair.n_embed)
    tag = classify_in_o3(G)
    notes = list(scan.notes)
    notes += [f"{o.spec} embeds with orientation outside N (not blocking)" for o in scan.informational]
    if scan.blocking:
        verdict = PASS_OBSTRUCTED
    elif tag is None:
        verdict = FAIL
        notes.append("unobstructed and not in the O(3) catalog")
    else:
        verdict = PASS_CATALOG
        if targets is not None:
            hit = next((name for name, T in targets.items() if is_isomorphic(G, T) is not None), None)
            if hit is None:
                verdict = FAIL
                notes.append("in catalog but not one of the expected targets")
            else:
                notes.append(f"isomorphic to {hit}")
        if require_split and not pair.split:
            verdict = FAIL
            notes.append("unobstructed non-split extension")
    return VerdictRecord(
        case_id=case_id,
        order=G.order,
        invariants=group_invariants(G),
        o3_tag=str(tag) if tag else None,
        obstructions=[o.to_json() for o in scan.blocking],
        verdict=verdict,
        split=pair.split,
        group_dump_ref=_dump(G, case_id, dump_dir),
        notes=notes,
    )


def euler_phi(n: int) -> int:
    return sum(1 for k in range(1, n + 1) if gcd(k, n) == 1)


# ---------------------------------------------------------------------------
# tasks (module level so they can be pickled)


def _cyclic_task(n: int, dump_dir: str | None) -> list:
    Zn = make_cyclic(n)
    targets = {
        f"Z{2 * n}": make_cyclic(2 * n),
        f"Z{n} + Z2": direct_product(Zn, make_cyclic(2)),
        f"D{2 * n}": make_dihedral(n),
    }
    return [
        _judge(f"cyclic/n={n}/class={k}", pair, dump_dir, targets=targets)
        for k, pair in enumerate(extension_classes(Zn).representatives)
    ]


_Z2_CUBED = None


def _z2_cubed() -> Group:
    global _Z2_CUBED
    if _Z2_CUBED is None:
        Z2 = make_cyclic(2)
        _Z2_CUBED = direct_product(direct_product(Z2, Z2), Z2)
    return _Z2_CUBED


def _dihedral_task(n: int, dump_dir: str | None) -> list:
    D = make_dihedral(n)
    classes = extension_classes(D)
    _, map_to_coord = dihedral_aut_coords(n, D)
    out = []
    for k, pair in enumerate(classes.representatives):
        rec = _judge(f"dihedral/n={n}/class={k}", pair, dump_dir, require_split=(n % 2 == 0 and n > 2))
        if n % 2 == 0:
            m = n // 2
            for i in classes.members[k]:
                datum = classes.data[i]
                coord = map_to_coord(datum.phi)
                if (coord.t, coord.s) == (m, 1) and datum.c == 0:
                    G = classes.pairs[i].group
                    sub = subgroup_closure(G, [m, n, D.order])
                    tag = classify_in_o3(sub.as_group())
                    rec.notes.append(
                        f"phi=(m,1) with m={m}: <a^m, b, x> has order {sub.order}, "
                        f"classified {tag if tag else 'outside catalog'}"
                    )
                    break
        if find_embedding(pair.group, _z2_cubed()) is not None:
            rec.notes.append("contains Z2^3 (informational)")
        out.append(rec)
    return out


def _class_set_check(name: str, N: Group, expected: dict[str, Group]) -> CheckRecord:
    reps = extension_classes(N).representatives
    matched = []
    for pair in reps:
        hits = [label for label, T in expected.items() if is_isomorphic(pair.group, T) is not None]
        matched.append(hits[0] if len(hits) == 1 else None)
    ok = len(reps) == len(expected) and sorted(m for m in matched if m) == sorted(expected)
    return CheckRecord(f"polyhedral/ext({name})", ok, {"classes": len(reps), "matched": matched})


def _polyhedral_task(item: str, dump_dir: str | None) -> list:
    Z2 = make_cyclic(2)
    A4, S4, A5, S5 = make_alternating(4), make_symmetric(4), make_alternating(5), make_symmetric(5)
    if item == "chain":
        GA = make_affine_line(5, 2)
        out = []
        emb = find_embedding(S5, GA)
        out.append(CheckRecord(
            "polyhedral/S5-contains-GA(1,5)",
            emb is not None,
            {"witness": list(emb.subgroup.elements) if emb else None},
        ))
        idx2 = index_two_subgroups(GA)
        ok = len(idx2) == 1 and is_isomorphic(idx2[0].as_group(), make_dihedral(5)) is not None
        out.append(CheckRecord("polyhedral/GA(1,5)-index-2-is-D10", ok, {"index_two_subgroups": len(idx2)}))
        tag = classify_in_o3(GA)
        out.append(CheckRecord("polyhedral/GA(1,5)-not-in-catalog", tag is None, {"o3_tag": str(tag) if tag else None}))
        A5_in_S5 = index_two_subgroups(S5)
        obs = detect_obstructions(S5, A5_in_S5[0]) if len(A5_in_S5) == 1 else []
        out.append(CheckRecord(
            "polyhedral/S5-obstructed",
            bool(obs),
            {"obstructions": [str(o.spec) for o in obs]},
        ))
        return out
    N, expected = {
        "A4": (A4, {"A4 x Z2": direct_product(A4, Z2), "S4": S4}),
        "S4": (S4, {"S4 x Z2": direct_product(S4, Z2)}),
        "A5": (A5, {"A5 x Z2": direct_product(A5, Z2), "S5": S5}),
    }[item]
    out: list = [
        _judge(f"polyhedral/{item}/class={k}", pair, dump_dir)
        for k, pair in enumerate(extension_classes(N).representatives)
    ]
    out.append(_class_set_check(item, N, expected))
    return out


def _aut_dihedral_task(n: int, dump_dir: str | None) -> list:
    D = make_dihedral(n)
    aut = automorphism_group(D)
    coord_to_map, map_to_coord = dihedral_aut_coords(n, D)
    out = []
    expected = n * euler_phi(n)
    out.append(CheckRecord(f"aut-dihedral/n={n}/order", aut.order == expected, {"aut_order": aut.order, "expected": expected}))
    witness = is_isomorphic(aut.composition_table, make_cyclic_holomorph(n))
    out.append(CheckRecord(
        f"aut-dihedral/n={n}/semidirect",
        witness is not None,
        {"witness": witness.to_json() if witness else None},
    ))
    coords = [map_to_coord(f) for f in aut.elements]
    total = (
        len({(c.t, c.s) for c in coords}) == aut.order
        and all(coord_to_map(c.t, c.s) == f for c, f in zip(coords, aut.elements))
    )
    out.append(CheckRecord(f"aut-dihedral/n={n}/coords-bijective", total, {}))
    table = aut.composition_table.rows
    law = all(
        coords[table[i][j]] == coords[i].compose(coords[j])
        for i in range(aut.order)
        for j in range(aut.order)
    )
    out.append(CheckRecord(f"aut-dihedral/n={n}/composition-law", law, {"pairs": aut.order ** 2}))
    inn, out_order = inner_automorphism_group(D)
    center = D.center().order
    inn_coords = {(coords[i].t, coords[i].s) for i in inn.elements}
    # conjugation by a^i is (2i, 1); by a^i b it is (2i, -1)
    expected_inn = {((2 * i) % n, s) for i in range(n) for s in (1, n - 1)}
    ok = inn.order == D.order // center and inn_coords == expected_inn
    if n % 2 == 0 and (n // 2) % 2 == 1:
        ok = ok and inn.order == n
    out.append(CheckRecord(
        f"aut-dihedral/n={n}/inner",
        ok,
        {"inn_order": inn.order, "out_order": out_order, "center_order": center},
    ))
    return out


def _kernel_task(spec_text: str, dump_dir: str | None) -> list:
    spec = KernelSpec.parse(spec_text)
    inst = make_kernel(spec)
    G = inst.group
    case = f"kernels/{spec}"
    blocking = detect_obstructions(G, inst.orientation)
    tag = classify_in_o3(G)
    verdict = PASS_OBSTRUCTED if blocking else (PASS_CATALOG if tag else FAIL)
    rec = VerdictRecord(
        case_id=case,
        order=G.order,
        invariants=group_invariants(G),
        o3_tag=str(tag) if tag else None,
        obstructions=[o.to_json() for o in blocking],
        verdict=verdict,
        group_dump_ref=_dump(G, case, dump_dir),
        notes=["conditional kernel"] if inst.conditional else [],
    )
    out: list = [rec]
    out.append(CheckRecord(f"{case}/self-detect", any(o.spec == spec for o in blocking), {}))
    if not inst.conditional:
        out.append(CheckRecord(f"{case}/not-in-catalog", tag is None, {"o3_tag": rec.o3_tag}))
    idx2 = index_two_subgroups(G)
    orient_ok = inst.orientation in idx2 and (len(idx2) > 1 or idx2[0] == inst.orientation)
    out.append(CheckRecord(f"{case}/orientation-index-2", orient_ok, {"index_two_subgroups": len(idx2)}))
    if spec.variant == "F":
        involutions = int((G.element_orders() == 2).sum())
        out.append(CheckRecord(f"{case}/unique-involution", involutions == 1, {"involutions": involutions}))
    return out


_TASKS: dict[str, Callable[[object, str | None], list]] = {
    "cyclic": _cyclic_task,
    "dihedral": _dihedral_task,
    "polyhedral": _polyhedral_task,
    "aut-dihedral": _aut_dihedral_task,
    "kernels": _kernel_task,
}


def _task_items(suite: str, cfg: RunConfig) -> list:
    cap = cfg.order_cap
    if suite == "cyclic":
        if 2 * cfg.max_n > cap:
            raise CapacityError(f"cyclic sweep needs order cap >= {2 * cfg.max_n}")
        return list(range(1, cfg.max_n + 1))
    if suite == "dihedral":
        if cfg.max_n < 3:
            raise ParameterError("dihedral sweep needs max_n >= 3")
        if 4 * cfg.max_n > cap:
            raise CapacityError(f"dihedral sweep needs order cap >= {4 * cfg.max_n}")
        return list(range(3, cfg.max_n + 1))
    if suite == "polyhedral":
        if cap < 240:
            raise CapacityError("polyhedral sweep needs order cap >= 240")
        return ["A4", "S4", "A5", "chain"]
    if suite == "aut-dihedral":
        if not 3 <= cfg.max_n <= 12:
            raise ParameterError("aut-dihedral needs 3 <= max_n <= 12")
        return list(range(3, cfg.max_n + 1))
    if suite == "kernels":
        if cfg.max_n > cap:
            raise CapacityError(f"kernel sanity bound {cfg.max_n} exceeds order cap {cap}")
        return [str(s) for s in kernel_specs_up_to(cfg.max_n)]
    raise ParameterError(f"unknown suite {suite!r}")


def _run_task(args) -> list:
    suite, item, dump_dir = args
    return _TASKS[suite](item, dump_dir)


def run_suite(suite: str, cfg: RunConfig, pool: ProcessPoolExecutor | None = None) -> Report:
    items = _task_items(suite, cfg)
    args = [(suite, item, cfg.dump_dir) for item in items]
    if pool is None and cfg.jobs > 1:
        with make_pool(cfg) as own:
            return run_suite(suite, cfg, own)
    entries: list = []
    if pool is None:
        with order_cap(cfg.order_cap):
            for a in args:
                entries += _run_task(a)
    else:
        for chunk in pool.map(_run_task, args):
            entries += chunk
    return Report(suite, cfg, entries)


def make_pool(cfg: RunConfig) -> ProcessPoolExecutor:
    return ProcessPoolExecutor(max_workers=cfg.jobs, initializer=set_order_cap, initargs=(cfg.order_cap,))


def run_cyclic(cfg: RunConfig) -> Report:
    return run_suite("cyclic", cfg)


def run_dihedral(cfg: RunConfig) -> Report:
    return run_suite("dihedral", cfg)


def run_polyhedral(cfg: RunConfig) -> Report:
    return run_suite("polyhedral", cfg)


def run_aut_dihedral(cfg: RunConfig) -> Report:
    return run_suite("aut-dihedral", cfg)


def run_kernel_sanity(cfg: RunConfig) -> Report:
    return run_suite("kernels", cfg)


def run_all(jobs: int = 1, fmt: str = "json", cap: int = 360, dump_dir: str | None = None) -> list[Report]:
    """Every suite at its shipped parameters, in a fixed order."""
    cfgs = [RunConfig(DEFAULT_MAX_N[s], jobs, fmt, cap, dump_dir) for s in SUITES]
    for s, cfg in zip(SUITES, cfgs):
        _task_items(s, cfg)  # validate everything before running anything
    if jobs == 1:
        return [run_suite(s, cfg) for s, cfg in zip(SUITES, cfgs)]
    with make_pool(cfgs[0]) as pool:
        return [run_suite(s, cfg, pool) for s, cfg in zip(SUITES, cfgs)]


def resolve_order_cap(flag: int | None, environ=os.environ) -> int:
    """CLI flag, else O3SYM_ORDER_CAP, else the library default."""
    if flag is not None:
        return flag
    env = environ.get("O3SYM_ORDER_CAP")
    if env:
        try:
            return int(env)
        except ValueError:
            raise ParameterError(f"O3SYM_ORDER_CAP is not an integer: {env!r}") from None
    return get_order_cap()
