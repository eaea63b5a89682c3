"""Verify one model over a range of primes and tabulate pass counts.

Primes the model does not allow are skipped. Example:

    python3 scripts/sweep_primes.py dunkl-a1 --max-p 23 --samples 10
"""
import argparse
import sys

from pcurv import zoo
from pcurv.field import is_prime
from pcurv.runner import RunConfig, verify


def main() -> int:
    ap = argparse.ArgumentParser()
    ap.add_argument("model", choices=sorted(zoo.MODELS))
    ap.add_argument("--max-p", type=int, default=13)
    ap.add_argument("--samples", type=int, default=10)
    ap.add_argument("--seed", type=int, default=0)
    args = ap.parse_args()
    bad = 0
    print(f"{'p':>4} {'ell':>5} {'passed':>7} {'failed':>7}  checks")
    for p in range(2, args.max_p + 1):
        if not is_prime(p):
            continue
        ell = None
        if args.model == "qkz":
            ell = next((l for l in range(p + 1, 50 * p, p) if is_prime(l)), None)
        cfg = RunConfig(args.model, p, ell=ell, samples=args.samples, seed=args.seed)
        try:
            rep = verify(cfg)
        except zoo.ConfigError:
            continue
        checks = " ".join(f"{k}={'ok' if v else 'FAIL'}" for k, v in sorted(rep.checks.items()))
        print(f"{p:>4} {cfg.ell or '-':>5} {rep.passed:>7} {rep.failed:>7}  {checks}")
        bad += not rep.ok
    return 1 if bad else 0


if __name__ == "__main__":
    sys.exit(main())
