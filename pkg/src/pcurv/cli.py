"""pcurv command line: compute, verify, suite."""
from __future__ import annotations

import argparse
import json
import sys
from dataclasses import replace

from . import __version__, zoo
from .matrix import NonCommutingError
from .ratfunc import PoleError
from .runner import RunConfig, compute, verify
from .verify import DegenerateSamplingError, VerificationReport

EXIT_PASS, EXIT_FAIL, EXIT_CONFIG, EXIT_DEGENERATE = 0, 1, 2, 3

# shorthand flags mapped onto ring variable names
_SHORTCUTS = {"hbar": "hbar", "s": "s", "c": "c", "lam": "lam", "eta": "eta"}


def _reps(text: str) -> tuple:
    try:
        return tuple(int(t) for t in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"--reps expects comma-separated integers, got {text!r}")


def _param(text: str) -> tuple:
    name, sep, value = text.partition("=")
    if not sep:
        raise argparse.ArgumentTypeError(f"--param expects NAME=VALUE, got {text!r}")
    try:
        return name.strip(), int(value)
    except ValueError:
        raise argparse.ArgumentTypeError(f"parameter values are integers mod p, got {value!r}")


def _common(sp: argparse.ArgumentParser, samples: bool) -> None:
    sp.add_argument("model", help="model id: " + ", ".join(sorted(zoo.MODELS)))
    sp.add_argument("--p", type=int, default=None, help="characteristic (default: first pinned prime)")
    sp.add_argument("--ell", type=int, default=None, help="base field prime for qkz (p | ell - 1)")
    sp.add_argument("--reps", type=_reps, default=(1, 1), help="sl2 highest weights, e.g. 1,1,1")
    sp.add_argument("--n", type=int, default=3, help="rank of S_n for gaudin-sn / cm-identity")
    sp.add_argument("--param", type=_param, action="append", default=[], metavar="NAME=VALUE")
    for flag in _SHORTCUTS:
        sp.add_argument(f"--{flag}", type=int, default=None, help=f"fix parameter {flag}")
    sp.add_argument("--format", choices=("text", "json"), default="text")
    if samples:
        sp.add_argument("--samples", type=int, default=20)
        sp.add_argument("--seed", type=int, default=0)
        sp.add_argument("--strategy", choices=("symbolic", "sampled"), default=None)


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(prog="pcurv", description="p-curvature computations and isospectrality checks")
    ap.add_argument("--version", action="version", version=f"pcurv {__version__}")
    sub = ap.add_subparsers(dest="command", required=True)
    _common(sub.add_parser("compute", help="print p-curvature matrices and targets"), samples=False)
    _common(sub.add_parser("verify", help="seeded verification against the comparison target"), samples=True)
    su = sub.add_parser("suite", help="run the acceptance matrix")
    su.add_argument("profile", help="quick or full")
    su.add_argument("--format", choices=("text", "json"), default="text")
    return ap


def _config(args) -> RunConfig:
    if args.model not in zoo.MODELS:
        raise zoo.ConfigError(f"unknown model {args.model!r}; known: {', '.join(sorted(zoo.MODELS))}")
    p = args.p if args.p is not None else zoo.MODELS[args.model].pinned[0]
    params = dict(args.param)
    for flag, name in _SHORTCUTS.items():
        v = getattr(args, flag)
        if v is not None:
            params[name] = v
    return RunConfig(args.model, p, ell=args.ell, samples=getattr(args, "samples", 0),
                     seed=getattr(args, "seed", 0), reps=args.reps, n=args.n, params=params,
                     strategy=getattr(args, "strategy", None))


def _cmd_compute(args, out) -> int:
    cfg = _config(args)
    mats = compute(cfg)
    if args.format == "json":
        doc = {"tool": "pcurv", "version": __version__, "model": cfg.model, "p": cfg.p,
               "params": cfg.params,
               "matrices": {label: [[M.ring.to_text(a) for a in r] for r in M.rows] for label, M in mats}}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
        return EXIT_PASS
    out.write(f"model: {cfg.model}\np: {cfg.p}\n")
    if cfg.model == "qkz":
        out.write(f"ell: {cfg.ell}\n")
    for label, M in mats:
        out.write(f"{label} =\n")
        for r in M.rows:
            out.write("  [ " + " ; ".join(M.ring.to_text(a) for a in r) + " ]\n")
    return EXIT_PASS


def _cmd_verify(args, out) -> int:
    cfg = _config(args)
    primes = [cfg.p] if args.p is not None else list(zoo.MODELS[cfg.model].pinned)
    reports = [verify(replace(cfg, p=p, ell=cfg.ell if args.p is not None else None)) for p in primes]
    rep = reports[0] if len(reports) == 1 else VerificationReport.combine(reports)
    if cfg.strategy:
        rep.info["strategy"] = cfg.strategy
    out.write(rep.to_json() + "\n" if args.format == "json" else rep.to_text())
    return EXIT_PASS if rep.ok else EXIT_FAIL


def _cmd_suite(args, out) -> int:
    from .acceptance import PROFILES, run_profile
    if args.profile not in PROFILES:
        raise zoo.ConfigError(f"unknown profile {args.profile!r}; choose from {', '.join(PROFILES)}")
    results = run_profile(args.profile)
    ok = all(r.ok for r in results)
    if args.format == "json":
        doc = {"tool": "pcurv", "version": __version__, "profile": args.profile,
               "verdict": "pass" if ok else "fail", "criteria": [r.to_dict() for r in results]}
        out.write(json.dumps(doc, indent=2, sort_keys=True) + "\n")
    else:
        for r in results:
            out.write(r.line() + "\n")
        out.write(f"suite {args.profile}: {'pass' if ok else 'fail'} "
                  f"({sum(r.ok for r in results)}/{len(results)})\n")
    return EXIT_PASS if ok else EXIT_FAIL


def main(argv=None, out=None) -> int:
    out = out or sys.stdout
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        # argparse exits 2 on usage errors, which is already the config-error code
        return int(e.code or 0)
    handlers = {"compute": _cmd_compute, "verify": _cmd_verify, "suite": _cmd_suite}
    try:
        return handlers[args.command](args, out)
    except (zoo.ConfigError, ValueError, NonCommutingError) as e:
        print(f"pcurv: error: {e}", file=sys.stderr)
        return EXIT_CONFIG
    except DegenerateSamplingError as e:
        print(f"pcurv: degenerate sampling: {e}", file=sys.stderr)
        return EXIT_DEGENERATE
    except PoleError as e:
        print(f"pcurv: parameter values hit a pole: {e}", file=sys.stderr)
        return EXIT_CONFIG


if __name__ == "__main__":
    sys.exit(main())
