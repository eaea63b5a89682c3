"""Run the acceptance matrix and optionally write the results as JSON.

    python3 scripts/run_acceptance.py [--profile full] [--out results.json]
"""
import argparse
import json
import sys

from pcurv.acceptance import PROFILES, run_profile


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("--profile", default="full", choices=sorted(PROFILES))
    ap.add_argument("--out", default=None)
    args = ap.parse_args()
    results = run_profile(args.profile)
    for r in results:
        print(r.line())
    if args.out:
        with open(args.out, "w") as fh:
            json.dump([r.to_dict() for r in results], fh, indent=2)
    return 0 if all(r.ok for r in results) else 1


if __name__ == "__main__":
    sys.exit(main())
