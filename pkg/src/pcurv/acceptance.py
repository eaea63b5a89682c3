"""The acceptance matrix AC-1..AC-13, shared by ``pcurv suite`` and the test-suite."""
from __future__ import annotations

import random
import time
from dataclasses import dataclass

from . import zoo
from .connection import ConnectionFamily, evaluate_matrix, from_d_plus_a, trivializable_at_zero_test
from .field import PrimeField, sampling_field
from .matrix import RingMatrix, Strategy, char_poly, is_nilpotent, pencil_isospectral, rank
from .poly import PolyRing
from .ratfunc import RatFunc, RatFuncField
from .runner import RunConfig, verify
from .verify import eval_univariate, fit_univariate


@dataclass
class ACResult:
    name: str
    passed: bool
    detail: str
    seconds: float
    limit: float

    @property
    def within_time(self) -> bool:
        return self.seconds < self.limit

    @property
    def ok(self) -> bool:
        return self.passed and self.within_time

    def line(self) -> str:
        verdict = "PASS" if self.ok else "FAIL"
        return f"{self.name}: {verdict} ({self.seconds:.2f}s / limit {self.limit:g}s) {self.detail}"

    def to_dict(self) -> dict:
        return {"name": self.name, "passed": self.passed, "within_time": self.within_time,
                "seconds": round(self.seconds, 3), "limit": self.limit, "detail": self.detail}


def _timed(name: str, limit: float, fn) -> ACResult:
    t0 = time.perf_counter()
    passed, detail = fn()
    return ACResult(name, bool(passed), detail, time.perf_counter() - t0, limit)


def _reports(cfgs) -> tuple[bool, str]:
    parts, ok = [], True
    for cfg in cfgs:
        rep = verify(cfg)
        ok &= rep.ok and len(rep.records) >= cfg.samples
        tag = f"{cfg.model}/p={cfg.p}"
        if cfg.model in ("kz", "kz-irregular"):
            tag += f"/r={len(cfg.reps)}"
        if cfg.model in ("cm-identity",):
            tag += f"/n={cfg.n}"
        parts.append(f"{tag}:{rep.passed}/{len(rep.records)}" + ("" if all(rep.checks.values()) else "!checks"))
    return ok, " ".join(parts)


# AC-1

def _random_poly_matrix(ring: PolyRing, rf: RatFuncField, rng: random.Random, n=3, deg=3) -> RingMatrix:
    x = ring.var("x")
    rows = []
    for _ in range(n):
        row = []
        for _ in range(n):
            f = ring.zero
            for k in range(deg + 1):
                f = f + (x**k).scale(rng.randrange(ring.p))
            row.append(rf.coerce(f))
        rows.append(row)
    return RingMatrix(rf, rows)


def closed_form_d_plus_a(a: RingMatrix, p: int) -> RingMatrix:
    """a^2 + a' for p = 2 and a^3 + [a', a] + a'' for p = 3."""
    def d(m):
        return m.map(lambda e: e.derivative("x"))

    if p == 2:
        return a @ a + d(a)
    if p == 3:
        da = d(a)
        return a @ a @ a + (da @ a - a @ da) + d(da)
    raise ValueError("closed form only for p = 2, 3")


def ac1(seed: int = 0, count: int = 50) -> ACResult:
    def run():
        bad = 0
        for p in (2, 3):
            ring = PolyRing(p, ["x"])
            rf = RatFuncField(ring)
            rng = random.Random(f"ac1|{p}|{seed}")
            for _ in range(count):
                a = _random_poly_matrix(ring, rf, rng)
                C = from_d_plus_a(ring, "x", a).p_curvature(0)
                if C != closed_form_d_plus_a(a, p):
                    bad += 1
        return bad == 0, f"{2 * count} matrices, mismatches={bad}"
    return _timed("AC-1", 2, run)


def ac2() -> ACResult:
    def run():
        out = []
        ok = True
        for p in (2, 3, 5, 7):
            conn = zoo.pseudo_pencil_example(p)
            C = conn.p_curvature(0)
            match = C == zoo.pseudo_pencil_closed_form(conn)
            triv = trivializable_at_zero_test(C, "s")
            ok &= match and not triv
            out.append(f"p={p}:closed_form={'yes' if match else 'no'},trivializable={str(triv).lower()}")
        return ok, " ".join(out)
    return _timed("AC-2", 2, run)


def kz_nilpotent_exhaustive(p: int = 5, x_samples: int = 5, seed: int = 0) -> tuple[bool, str]:
    """C_i nilpotent at every hbar in F_p: symbolic in x for two sites, sampled x for three."""
    ok = True
    conn = zoo.kz_pencil(p, (1, 1))
    for h in range(p):
        for i in range(2):
            ok &= is_nilpotent(conn.p_curvature(i, {"hbar": h}))
    conn3 = zoo.kz_pencil(p, (1, 1, 1))
    fld = sampling_field(p)
    rng = random.Random(f"ac3-nil|{p}|{seed}")
    checked = 0
    for h in range(p):
        for _ in range(x_samples):
            pt = {nm: fld.random(rng) for nm in conn3.coords}
            pt["hbar"] = fld.from_int(h)
            for i in range(3):
                ok &= is_nilpotent(conn3.p_curvature_at(i, pt, fld))
            checked += 1
    return ok, f"nilpotent(hbar in F_{p}): N=4 symbolic, N=8 at {checked} x-points"


def ac3(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        cfgs = [RunConfig("kz", p, samples=samples, seed=seed, reps=reps)
                for reps in ((1, 1), (1, 1, 1)) for p in (5, 7, 11)]
        ok, detail = _reports(cfgs)
        nil_ok, nil_detail = kz_nilpotent_exhaustive(5, seed=seed)
        return ok and nil_ok, f"{detail}; {nil_detail}={'yes' if nil_ok else 'no'}"
    return _timed("AC-3", 60, run)


def ac4(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        return _reports([RunConfig("kz-irregular", p, samples=samples, seed=seed, reps=reps)
                         for reps in ((1, 1), (1, 1, 1)) for p in (5, 7)])
    return _timed("AC-4", 60, run)


def ac5(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        return _reports([RunConfig("dunkl-a1", p, samples=samples, seed=seed) for p in (5, 7, 11)])
    return _timed("AC-5", 10, run)


def gaudin_a1_expected(G: RingMatrix) -> list:
    """Coefficients of Lambda^2 - (y^2 + c^2/x^2), low degree first."""
    rf = G.ring
    c, y, x = rf.ring.gens()
    return [-(rf.coerce(y * y) + RatFunc.from_factors(rf.ring, c * c, {x: -2})), rf.zero, rf.one]


def ac6(p: int = 7) -> ACResult:
    def run():
        G = zoo.gaudin_a1(p)
        cp = char_poly(G)
        ok = cp.degree == 2 and all(a == b for a, b in zip(cp.coeffs, gaudin_a1_expected(G)))
        return ok, f"p={p} char_poly(G) = " + " | ".join(cp.to_text())
    return _timed("AC-6", 1, run)


def ac7(seed: int = 0, samples: int = 10) -> ACResult:
    def run():
        s2 = all(D.is_zero() for D in zoo.cm_operator_identity(7, 2))
        ok, detail = _reports([RunConfig("cm-identity", p, samples=samples, seed=seed, n=3) for p in (7, 11)])
        return ok and s2, f"S2 defects zero={'yes' if s2 else 'no'}; {detail}"
    return _timed("AC-7", 30, run)


def ac8(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        return _reports([RunConfig("qkz", p, ell=ell, samples=samples, seed=seed)
                         for p, ell in ((3, 7), (5, 11), (7, 29))])
    return _timed("AC-8", 30, run)


def ac9(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        return _reports([RunConfig("qkz-additive", p, samples=samples, seed=seed) for p in (3, 5, 7)])
    return _timed("AC-9", 10, run)


def flat_section_check(conn: ConnectionFamily, base: dict, s: dict) -> tuple[bool, int]:
    """nabla F = 0 for every returned F, and the values at the base point span ker C there.

    Flat sections only exist when C vanishes, so the kernel at the base point is the whole fiber.
    """
    F = conn.flat_section_basis(base, s)
    cent = conn.specialize(s).centered(base)
    flat = all(all(a.is_zero() for a in cent.covariant_apply(i, v)) for v in F for i in range(len(conn.coords)))
    fld = PrimeField(conn.ring.p)
    zero = {nm: 0 for nm in conn.ring.names}
    C0 = [evaluate_matrix(cent.p_curvature(i), zero, fld) for i in range(len(conn.coords))]
    kernel_dim = conn.rank if all(C.is_zero() for C in C0) else -1
    values = RingMatrix(fld, [[a.evaluate(zero, fld) for a in v] for v in F])
    rk = rank(values)
    return flat and rk == kernel_dim, rk


def ac10(p: int = 5) -> ACResult:
    def run():
        ok, parts = True, []
        kz = zoo.kz_pencil(p, (1, 1))
        for h in range(p):
            good, rk = flat_section_check(kz, {"x1": 1, "x2": 3}, {"hbar": h})
            ok &= good
            parts.append(f"kz(hbar={h}):rank={rk}")
        ring = PolyRing(p, ["s", "x"])
        rf = RatFuncField(ring)
        sconn = ConnectionFamily.pencil(ring, ["x"], {"s": [RingMatrix(rf, [[RatFunc.from_factors(ring, 1, {ring.var("x"): -1})]])]})
        for s in range(p):
            good, rk = flat_section_check(sconn, {"x": 2}, {"s": s})
            ok &= good
            parts.append(f"d-s/x(s={s}):rank={rk}")
        return ok, " ".join(parts)
    return _timed("AC-10", 30, run)


def random_commuting_pencil(p: int, rng: random.Random) -> tuple[PolyRing, list]:
    """L_i = f_i(A) for one random A over F_p[y]; the L_i commute."""
    ring = PolyRing(p, ["y"])
    y = ring.var("y")
    n = rng.randint(1, 4)
    r = rng.randint(1, 3)
    A = RingMatrix(ring, [[y.scale(rng.randrange(p)) + rng.randrange(p) for _ in range(n)] for _ in range(n)])
    powers = [RingMatrix.identity(ring, n)]
    for _ in range(n - 1):
        powers.append(powers[-1] @ A)
    L = []
    for _ in range(r):
        acc = RingMatrix.zeros(ring, n)
        for P in powers:
            acc = acc + P.scale(ring.const(rng.randrange(p)))
        L.append(acc)
    return ring, L


def frobenius_pencil_identity(ring: PolyRing, L: list) -> bool:
    """char poly of (sum u_i L_i)^p equals that of sum u_i^p L_i^(1), as polynomials in u."""
    p = ring.p
    names = [f"u{i + 1}" for i in range(len(L))]
    ext = ring.extend(names)
    us = [ext.var(nm) for nm in names]
    Ls = [m.map(ext.lift, ext) for m in L]
    lhs = RingMatrix.zeros(ext, L[0].n)
    rhs = RingMatrix.zeros(ext, L[0].n)
    for u, m in zip(us, Ls):
        lhs = lhs + m.scale(u)
        rhs = rhs + m.map(lambda a: a.frobenius_twist()).scale(u**p)
    return char_poly(lhs**p) == char_poly(rhs)


def ac11(seed: int = 0, count: int = 50) -> ACResult:
    def run():
        rng = random.Random(f"ac11|{seed}")
        bad = 0
        for k in range(count):
            p = (3, 5)[k % 2]
            ring, L = random_commuting_pencil(p, rng)
            bad += not frobenius_pencil_identity(ring, L)
        return bad == 0, f"{count} pencils, failures={bad}"
    return _timed("AC-11", 10, run)


def ac12(seed: int = 0, samples: int = 20) -> ACResult:
    def run():
        ok, detail = _reports([RunConfig("toda-a1", p, samples=samples, seed=seed) for p in (5, 7)])
        sym = True
        for p in (5, 7):
            conn = zoo.toda_rank1(p)
            direct = conn.torus_p_curvature("direct")
            sym &= direct == conn.torus_p_curvature("affine")
            sym &= pencil_isospectral([direct], zoo.toda_target(conn), Strategy.SYMBOLIC)
        return ok and sym, f"{detail}; symbolic(direct=affine, isospectral)={'yes' if sym else 'no'}"
    return _timed("AC-12", 10, run)


def kz_wedge_fit(p: int = 5, seed: int = 0) -> tuple[bool, str]:
    """Tr wedge^m(sum u_i C_i) as a function of hbar, at a fixed random (x, u), is beta_m(hbar - hbar^p)
    with deg beta_m <= m and beta_m(0) = 0.

    beta_m is fitted on m + 1 values of w = hbar - hbar^p and checked at m*p + 1 values
    of hbar; since the left side has hbar-degree at most m*p this is an identity in hbar.
    """
    conn = zoo.kz_pencil(p, (1, 1))
    fld = sampling_field(p)
    rng = random.Random(f"ac13|{p}|{seed}")
    N = conn.rank
    x = {nm: fld.random(rng) for nm in conn.coords}
    u = [fld.random(rng) for _ in conn.coords]
    hbars = []
    while len(hbars) < N * p + 1 + N + 1:
        h = fld.random(rng)
        if h not in hbars and not fld.in_prime_field(h):
            hbars.append(h)

    def wedge(h):
        pt = dict(x, hbar=h)
        M = RingMatrix.zeros(fld, N)
        for ui, i in zip(u, range(len(conn.coords))):
            M = M + conn.p_curvature_at(i, pt, fld).scale(ui)
        cp = char_poly(M)
        return [cp.trace_wedge(m) for m in range(N + 1)]

    values = {h: wedge(h) for h in hbars}
    ws = {h: fld.sub(h, fld.pow(h, p)) for h in hbars}
    ok = True
    worst = 0
    for m in range(1, N + 1):
        fit_pts = hbars[: m + 1]
        coeffs = fit_univariate([ws[h] for h in fit_pts], [values[h][m] for h in fit_pts], fld)
        ok &= fld.is_zero(coeffs[0])
        check = hbars[m + 1: m + 1 + m * p + 1]
        resid = sum(not fld.eq(eval_univariate(coeffs, ws[h], fld), values[h][m]) for h in check)
        worst = max(worst, resid)
        ok &= resid == 0 and len(check) == m * p + 1
    return ok, f"KZ p={p} N={N}: m=1..{N} fitted in hbar-hbar^p, nonzero residuals={worst}"


def irregular_infinitesimal_form(p: int = 5) -> tuple[bool, str]:
    """Irregular KZ at hbar = 0: every entry of C_i is a polynomial in eta^p."""
    conn = zoo.irregular_kz(p, (1, 1))
    eta = conn.ring.var_index("eta")
    ok = True
    for i in range(len(conn.coords)):
        C = conn.p_curvature(i, {"hbar": 0})
        for row in C.rows:
            for a in row:
                a = a.normalize()
                ok &= a.is_polynomial()
                ok &= all(conn.ring.exponents(k)[eta] % p == 0 for k in a.num.terms)
    return ok, f"irregular KZ p={p} hbar=0: entries in F_p[eta^p]={'yes' if ok else 'no'}"


def ac13(seed: int = 0) -> ACResult:
    def run():
        a, da = kz_wedge_fit(5, seed)
        b, db = irregular_infinitesimal_form(5)
        return a and b, f"{da}; {db}"
    return _timed("AC-13", 30, run)


ALL = {"AC-1": ac1, "AC-2": ac2, "AC-3": ac3, "AC-4": ac4, "AC-5": ac5, "AC-6": ac6, "AC-7": ac7,
       "AC-8": ac8, "AC-9": ac9, "AC-10": ac10, "AC-11": ac11, "AC-12": ac12, "AC-13": ac13}
PROFILES = {"quick": ("AC-1", "AC-2", "AC-6"), "full": tuple(ALL)}


def run_profile(profile: str) -> list[ACResult]:
    if profile not in PROFILES:
        raise zoo.ConfigError(f"unknown profile {profile!r}; choose from {', '.join(PROFILES)}")
    return [ALL[name]() for name in PROFILES[profile]]
