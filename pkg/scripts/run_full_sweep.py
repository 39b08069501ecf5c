"""Run every suite at its shipped parameters, save reports, and print a timing table."""

import argparse
import time
from pathlib import Path

from o3sym.verify import DEFAULT_MAX_N, SUITES, RunConfig, render, run_suite


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=1)
    parser.add_argument("--out-dir", type=Path, default=Path("reports"))
    parser.add_argument("--format", choices=("json", "tsv"), default="json")
    args = parser.parse_args()
    args.out_dir.mkdir(parents=True, exist_ok=True)
    print(f"{'suite':<14}{'max_n':>6}{'catalog':>9}{'obstr':>7}{'fail':>6}{'checks':>9}{'sec':>8}")
    worst = 0
    for suite in SUITES:
        cfg = RunConfig(DEFAULT_MAX_N[suite], args.jobs, args.format)
        start = time.perf_counter()
        report = run_suite(suite, cfg)
        elapsed = time.perf_counter() - start
        ext = "jsonl" if args.format == "json" else "tsv"
        (args.out_dir / f"{suite}.{ext}").write_text(render([report], args.format))
        s = report.summary()
        checks = f"{s['checks'] - s['checks_failed']}/{s['checks']}"
        print(f"{suite:<14}{cfg.max_n:>6}{s['pass_catalog']:>9}{s['pass_obstructed']:>7}{s['fail']:>6}{checks:>9}{elapsed:>8.2f}")
        worst = max(worst, report.exit_code)
    return worst


if __name__ == "__main__":
    raise SystemExit(main())
