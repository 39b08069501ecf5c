"""Rewrite the golden report fixtures under tests/golden from the current engine.

Equivalent to ``pytest tests/test_golden.py --update-golden``.
"""

import argparse
from pathlib import Path

from o3sym.verify import DEFAULT_MAX_N, SUITES, RunConfig, render, run_suite

GOLDEN = Path(__file__).resolve().parent.parent / "tests" / "golden"


def main():
    parser = argparse.ArgumentParser(description=__doc__)
    parser.add_argument("--jobs", type=int, default=1)
    args = parser.parse_args()
    GOLDEN.mkdir(parents=True, exist_ok=True)
    for suite in SUITES:
        report = run_suite(suite, RunConfig(DEFAULT_MAX_N[suite], jobs=args.jobs))
        path = GOLDEN / f"{suite}.jsonl"
        path.write_text(render([report], "json"))
        print(f"{path.name}: {report.summary()}")


if __name__ == "__main__":
    main()
