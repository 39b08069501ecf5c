"""``o3sym verify SUITE``: run a verification sweep and write its report."""

from __future__ import annotations

import argparse
import sys
from pathlib import Path

from .errors import O3SymError, ParameterError
from .verify import DEFAULT_MAX_N, SUITES, RunConfig, render, resolve_order_cap, run_all, run_suite


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="o3sym", description="Exhaustive finite-group sweeps with O(3) verdicts.")
    sub = parser.add_subparsers(dest="command", required=True)
    verify = sub.add_parser("verify", help="run a verification suite")
    verify.add_argument("suite", choices=SUITES + ("all",))
    verify.add_argument("--max-n", type=int, default=None, help="largest parameter (suite default if omitted)")
    verify.add_argument("--jobs", type=int, default=1)
    verify.add_argument("--format", choices=("json", "tsv"), default="json")
    verify.add_argument("--out", type=Path, default=None, help="write the report here instead of stdout")
    verify.add_argument("--order-cap", type=int, default=None, help="overrides O3SYM_ORDER_CAP")
    verify.add_argument("--dump-groups", metavar="DIR", default=None, help="write every examined group table to DIR")
    return parser


def main(argv: list[str] | None = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        cap = resolve_order_cap(args.order_cap)
        if args.suite == "all":
            if args.max_n is not None:
                raise ParameterError("--max-n is not accepted by 'all'; it runs every suite at its default")
            reports = run_all(args.jobs, args.format, cap, args.dump_groups)
        else:
            max_n = args.max_n if args.max_n is not None else DEFAULT_MAX_N[args.suite]
            cfg = RunConfig(max_n, args.jobs, args.format, cap, args.dump_groups)
            reports = [run_suite(args.suite, cfg)]
    except O3SymError as exc:
        print(f"o3sym: {exc}", file=sys.stderr)
        return 2
    text = render(reports, args.format)
    if args.out is None:
        sys.stdout.write(text)
    else:
        args.out.write_text(text)
    code = max(r.exit_code for r in reports)
    for r in reports:
        s = r.summary()
        print(
            f"{r.suite}: {s['pass_catalog']} catalog, {s['pass_obstructed']} obstructed, "
            f"{s['fail']} fail, {s['checks'] - s['checks_failed']}/{s['checks']} checks",
            file=sys.stderr,
        )
    return code


if __name__ == "__main__":
    sys.exit(main())
