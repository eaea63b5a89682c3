"""Seeded isospectrality verification and structured reports."""
from __future__ import annotations

import hashlib
import json
import os
import random
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass, field

from . import __version__
from .connection import ConnectionFamily, evaluate_matrix
from .field import sampling_field
from .matrix import Strategy, char_poly, check_commuting, linear_combination, pencil_isospectral, sample_count
from .ratfunc import PoleError

MAX_RESAMPLES = 100


class DegenerateSamplingError(RuntimeError):
    """Every resampling attempt for one sample index hit a pole."""


def sample_seed(model: str, p: int, seed: int, index: int) -> int:
    """Per-sample seed: SHA-256 of 'model|prime|seed|index', first 8 bytes big-endian."""
    digest = hashlib.sha256(f"{model}|{p}|{seed}|{index}".encode()).digest()
    return int.from_bytes(digest[:8], "big")


def sample_rng(model: str, p: int, seed: int, index: int) -> random.Random:
    return random.Random(sample_seed(model, p, seed, index))


@dataclass
class SampleRecord:
    index: int
    params: dict
    verdict: bool
    resamples: int = 0
    note: str = ""
    charpolys: list | None = None
    prime: int | None = None


@dataclass
class VerificationReport:
    model: str
    primes: list
    seed: int
    records: list = field(default_factory=list)
    checks: dict = field(default_factory=dict)
    info: dict = field(default_factory=dict)
    version: str = __version__

    @property
    def passed(self) -> int:
        return sum(r.verdict for r in self.records)

    @property
    def failed(self) -> int:
        return sum(not r.verdict for r in self.records)

    @property
    def ok(self) -> bool:
        return self.failed == 0 and all(self.checks.values())

    @classmethod
    def combine(cls, reports: list) -> VerificationReport:
        """One report per prime, merged in the given order.

        Checks are AND-ed. Info values that differ between primes are kept per prime.
        """
        first = reports[0]
        out = cls(first.model, [], first.seed, version=first.version)
        for rep in reports:
            p = rep.primes[0]
            out.primes.extend(q for q in rep.primes if q not in out.primes)
            for r in rep.records:
                if r.prime is None:
                    r.prime = p
            out.records.extend(rep.records)
            for k, v in rep.checks.items():
                out.checks[k] = out.checks.get(k, True) and v
        keys = {k for rep in reports for k in rep.info}
        for k in keys:
            vals = {f"p={rep.primes[0]}": rep.info[k] for rep in reports if k in rep.info}
            distinct = {json.dumps(v, sort_keys=True) for v in vals.values()}
            out.info[k] = next(iter(vals.values())) if len(distinct) == 1 and len(vals) == len(reports) else vals
        return out

    def to_dict(self) -> dict:
        return {
            "tool": "pcurv",
            "version": self.version,
            "model": self.model,
            "primes": list(self.primes),
            "seed": self.seed,
            "info": self.info,
            "checks": self.checks,
            "summary": {"samples": len(self.records), "passed": self.passed, "failed": self.failed,
                        "verdict": "pass" if self.ok else "fail"},
            "records": [asdict(r) for r in self.records],
        }

    def to_json(self) -> str:
        return json.dumps(self.to_dict(), indent=2, sort_keys=True)

    def to_text(self) -> str:
        d = self.to_dict()
        lines = [f"tool: pcurv {d['version']}", f"model: {d['model']}",
                 f"primes: {','.join(str(p) for p in d['primes'])}", f"seed: {d['seed']}"]
        for k in sorted(d["info"]):
            v = d["info"][k]
            if isinstance(v, dict):
                v = " ".join(f"{a}:{b}" for a, b in v.items())
            lines.append(f"info.{k}: {v}")
        for k in sorted(d["checks"]):
            lines.append(f"check.{k}: {'pass' if d['checks'][k] else 'fail'}")
        s = d["summary"]
        lines.append(f"summary: samples={s['samples']} passed={s['passed']} failed={s['failed']} "
                     f"verdict={s['verdict']}")
        for r in d["records"]:
            params = " ".join(f"{k}={v}" for k, v in sorted(r["params"].items()))
            where = f"p={r['prime']} " if r["prime"] is not None else ""
            head = f"sample {where}{r['index']}: {'pass' if r['verdict'] else 'fail'} resamples={r['resamples']}"
            if r["note"]:
                head += f" note={r['note']}"
            lines.append(f"{head} [{params}]")
            if r["charpolys"]:
                for side, cp in zip(("computed", "target"), r["charpolys"]):
                    lines.append(f"  {side}: {' | '.join(cp)}")
        return "\n".join(lines) + "\n"


def draw_point(names, fld, rng, nonzero=()) -> dict:
    return {nm: fld.random(rng, nonzero=nm in nonzero) for nm in names}


def compare_pencils(C: list, T: list, fld, rng, strategy: str | None = None) -> tuple:
    """Char-poly comparison of the pencils sum u_i C_i and sum u_i T_i.

    Returns (verdict, witnessing char polys or None). The default samples u;
    ``symbolic`` makes the u-dependence exact.
    """
    check_commuting(C, "p-curvature")
    check_commuting(T, "target")
    if strategy == "symbolic":
        ok = pencil_isospectral(C, T, Strategy.SYMBOLIC, check=False)
        if ok:
            return True, None
        a, b = char_poly(C[0]), char_poly(T[0])
        return False, [a.to_text(), b.to_text()]
    k = sample_count(fld.order, C[0].n)
    for _ in range(k):
        u = [fld.random(rng) for _ in C]
        a = char_poly(linear_combination(C, u))
        b = char_poly(linear_combination(T, u))
        if a != b:
            return False, [a.to_text(), b.to_text()]
    return True, None


def verify_isospectrality(conn: ConnectionFamily, target: list, samples: int, seed: int,
                          model: str | None = None, nonzero=(), fixed: dict | None = None,
                          threads: int | None = None, strategy: str | None = None) -> VerificationReport:
    """Compare C_i(s, x) with target(s, x) at seeded random points of a large field of characteristic p.

    Points are drawn from GF(p^k) (at least 2^16 elements) so that s - s^p is
    generically nonzero; C_i is computed pointwise through truncated series.
    """
    model = model or conn.name or "connection"
    p = conn.ring.p
    fld = sampling_field(p)
    rep = VerificationReport(model, [p], seed)
    rep.info["sampling_field"] = f"GF({p}^{fld.degree})"
    if strategy == "symbolic":
        rep.info["u_check"] = "exact grid"
    else:
        rep.info["u_samples_per_point"] = sample_count(fld.order, conn.rank)
    rep.info["frame"] = conn.frame
    jobs = [(conn, target, model, p, seed, i, tuple(nonzero), fixed or {}, strategy) for i in range(samples)]
    threads = threads if threads is not None else int(os.environ.get("PCURV_THREADS", "1") or 1)
    if threads > 1 and samples > 1:
        with ProcessPoolExecutor(max_workers=threads) as ex:
            records = list(ex.map(_one_sample, jobs))
    else:
        records = [_one_sample(j) for j in jobs]
    rep.records = records
    return rep


def _one_sample(job) -> SampleRecord:
    conn, target, model, p, seed, index, nonzero, fixed, strategy = job
    fld = sampling_field(p)
    rng = sample_rng(model, p, seed, index)
    names = [nm for nm in conn.ring.names if nm not in fixed]
    for attempt in range(MAX_RESAMPLES + 1):
        point = draw_point(names, fld, rng, nonzero)
        point.update({k: fld.from_int(v) for k, v in fixed.items()})
        try:
            C = [conn.p_curvature_at(i, point, fld) for i in range(len(conn.coords))]
            T = [evaluate_matrix(m, point, fld) for m in target]
        except PoleError:
            continue
        verdict, cps = compare_pencils(C, T, fld, rng, strategy)
        params = {k: fld.to_text(v) for k, v in sorted(point.items())}
        return SampleRecord(index, params, verdict, attempt, "", cps)
    raise DegenerateSamplingError(f"sample {index}: {MAX_RESAMPLES} resamples all hit poles")


def fit_univariate(xs, ys, fld):
    """Lagrange interpolation coefficients (low degree first) through the given points."""
    n = len(xs)
    coeffs = [fld.zero] * n
    for i in range(n):
        # basis polynomial prod_{j != i} (X - x_j)/(x_i - x_j)
        basis = [fld.one]
        denom = fld.one
        for j in range(n):
            if j == i:
                continue
            basis = [fld.zero] + basis
            for k in range(len(basis) - 1):
                basis[k] = fld.sub(basis[k], fld.mul(xs[j], basis[k + 1]))
            denom = fld.mul(denom, fld.sub(xs[i], xs[j]))
        scale = fld.mul(ys[i], fld.inv(denom))
        for k in range(n):
            coeffs[k] = fld.add(coeffs[k], fld.mul(scale, basis[k]))
    return coeffs


def eval_univariate(coeffs, x, fld):
    acc = fld.zero
    for c in reversed(coeffs):
        acc = fld.add(fld.mul(acc, x), c)
    return acc
