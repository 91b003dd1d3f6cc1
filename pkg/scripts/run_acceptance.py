"""Run the acceptance criteria and print one line per criterion.

    python3 scripts/run_acceptance.py            # all ten
    python3 scripts/run_acceptance.py 3 4 --json  # selected, with full reports
"""
import argparse
import sys

from vhtriples.acceptance import run_all
from vhtriples.report import emit_report


def main():
    ap = argparse.ArgumentParser()
    ap.add_argument("numbers", nargs="*", type=int)
    ap.add_argument("--json", action="store_true", help="also dump every check as JSON")
    ap.add_argument("--failures", action="store_true", help="print failing checks with witnesses")
    args = ap.parse_args()
    results = run_all(set(args.numbers) or None)
    for c in results:
        print(c.line(), flush=True)
        if args.failures:
            for f in c.report.failures():
                print(f"    {f.check_id}: {f.witness}")
        if args.json:
            print(emit_report(c.report, "json"))
    return 0 if all(c.passed for c in results) else 1


if __name__ == "__main__":
    sys.exit(main())
