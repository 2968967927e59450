"""Run the built-in suite and write CSV, JSON and a check summary to an output directory.

    python scripts/reproduce_suite.py --out results/
"""
import argparse
import json
import sys
import time
from pathlib import Path

from ostrowski.harness import emit_report, run_suite
from ostrowski.harness.suite import suite_checks, suite_configs


def main(argv=None):
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("--out", type=Path, default=Path("results"))
    args = parser.parse_args(argv)
    args.out.mkdir(parents=True, exist_ok=True)

    start = time.perf_counter()
    report = run_suite(suite_configs(), name="paper")
    checks = suite_checks()
    elapsed = time.perf_counter() - start

    emit_report(report, args.out / "suite.csv", "csv")
    emit_report(report, args.out / "suite.json", "json")
    summary = {
        "rows": report.summary["rows"],
        "violations": report.summary["violations"],
        "skips": report.summary["skips"],
        "max_ratio": report.summary["max_ratio"],
        "thm24_without_condition_c": report.summary["thm24_without_condition_c"],
        "checks": {c.name: {"passed": bool(c.passed), "detail": c.detail} for c in checks},
    }
    (args.out / "summary.json").write_text(json.dumps(summary, indent=2, sort_keys=True) + "\n")

    for c in checks:
        print(f"[{'PASS' if c.passed else 'FAIL'}] {c.name}: {c.detail}")
    print(f"{report.summary['rows']} rows, {report.summary['violations']} violations, "
          f"{report.summary['skips']} skipped, {elapsed:.1f}s")
    return 0 if report.violations == 0 and all(c.passed for c in checks) else 2


if __name__ == "__main__":
    sys.exit(main())
