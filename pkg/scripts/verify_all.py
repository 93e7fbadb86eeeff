#!/usr/bin/env python3
"""Run the acceptance checks and print one line per criterion.

Exits 0 when every selected criterion passes and 1 otherwise.
"""
import argparse
import json
import sys

from lqcalc.acceptance import CRITERIA, run_all


def main(argv=None) -> int:
    parser = argparse.ArgumentParser(description=__doc__.splitlines()[0])
    parser.add_argument("criteria", nargs="*", type=int, choices=sorted(CRITERIA),
                        help="criterion numbers to run (default: all)")
    parser.add_argument("--json", action="store_true", help="emit a JSON report instead of text")
    args = parser.parse_args(argv)

    results = run_all(args.criteria or None)
    if args.json:
        doc = [{"criterion": r.number, "title": r.title, "passed": r.passed,
                "seconds": round(r.seconds, 3), "failures": r.failures} for r in results]
        print(json.dumps(doc, indent=2))
    else:
        for r in results:
            print(r.line())
        print(f"{sum(r.passed for r in results)}/{len(results)} criteria pass")
    return 0 if all(r.passed for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
