"""Concrete connections and the closed-form comparison targets they are tested against.

Targets are always assembled directly from their closed formulas (explicit
p-th power denominators, explicit root-of-unity factorizations), never by
running the generic twist machinery on the connection itself, so that a
match between the two is evidence rather than tautology.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from fractions import Fraction

from .connection import ConnectionFamily, Kind
from .difference import ShiftConnection
from .field import find_order_p_element
from .matrix import RingMatrix, char_poly
from .poly import PolyRing, MultiPoly, elementary_symmetric
from .ratfunc import RatFunc, RatFuncField


class ConfigError(ValueError):
    """Model/prime combination that the model does not support."""


# small integer-matrix helpers (entries reduced mod p)

def _eye(n):
    return [[int(i == j) for j in range(n)] for i in range(n)]


def _mm(a, b, p):
    n = len(a)
    return [[sum(a[i][k] * b[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


def _madd(a, b, p):
    return [[(x + y) % p for x, y in zip(r, s)] for r, s in zip(a, b)]


def _mscale(a, c, p):
    return [[x * c % p for x in r] for r in a]


def _kron(a, b, p):
    n, m = len(a), len(b)
    return [[a[i // m][j // m] * b[i % m][j % m] % p for j in range(n * m)] for i in range(n * m)]


def _to_rf(rf: RatFuncField, mat, scalar=None) -> RingMatrix:
    scalar = rf.one if scalar is None else rf.coerce(scalar)
    return RingMatrix(rf, [[scalar * v if v else rf.zero for v in r] for r in mat])


def _inv_mod(a: int, p: int) -> int:
    if a % p == 0:
        raise ConfigError(f"{a} is not invertible mod {p}")
    return pow(a, p - 2, p)


def _frac_mod(x: Fraction, p: int) -> int:
    return x.numerator * _inv_mod(x.denominator, p) % p


def _linear_inverse(ring: PolyRing, lin: MultiPoly, power: int = 1) -> RatFunc:
    return RatFunc.from_factors(ring, 1, {lin: -power})


# sl2

@dataclass
class Sl2Data:
    """The irreducible sl2-module V(m) over F_p with its Casimir two-site tensor."""

    m: int
    p: int
    e: list = field(init=False)
    f: list = field(init=False)
    h: list = field(init=False)

    def __post_init__(self):
        if self.p == 2:
            raise ConfigError("the Casimir tensor needs 1/2, so p = 2 is excluded")
        n = self.m + 1
        p = self.p
        self.h = [[(self.m - 2 * k) % p if i == k else 0 for k in range(n)] for i in range(n)]
        # f v_k = v_{k+1}, e v_k = k(m-k+1) v_{k-1}
        self.f = [[int(i == k + 1) for k in range(n)] for i in range(n)]
        self.e = [[k * (self.m - k + 1) % p if i == k - 1 else 0 for k in range(n)] for i in range(n)]

    @property
    def dim(self) -> int:
        return self.m + 1

    def check_relations(self) -> bool:
        p = self.p
        e, f, h = self.e, self.f, self.h

        def br(a, b):
            return _madd(_mm(a, b, p), _mscale(_mm(b, a, p), -1, p), p)

        return (br(e, f) == [[x % p for x in r] for r in h]
                and br(h, e) == _mscale(e, 2, p) and br(h, f) == _mscale(f, -2, p))

    def omega(self) -> list:
        p = self.p
        half = _inv_mod(2, p)
        t = _madd(_kron(self.e, self.f, p), _kron(self.f, self.e, p), p)
        return _madd(t, _mscale(_kron(self.h, self.h, p), half, p), p)


class TensorSl2:
    """Site operators X^(i) on V(m_1) x ... x V(m_r)."""

    def __init__(self, reps, p: int):
        self.p = p
        self.sites = [Sl2Data(m, p) for m in reps]
        self.dims = [s.dim for s in self.sites]
        self.dim = 1
        for d in self.dims:
            self.dim *= d

    def site(self, op: str, i: int) -> list:
        p = self.p
        out = [[1]]
        for j, s in enumerate(self.sites):
            out = _kron(out, getattr(s, op) if j == i else _eye(s.dim), p)
        return out

    def omega(self, i: int, j: int) -> list:
        p = self.p
        half = _inv_mod(2, p)
        t = _madd(_mm(self.site("e", i), self.site("f", j), p), _mm(self.site("f", i), self.site("e", j), p), p)
        return _madd(t, _mscale(_mm(self.site("h", i), self.site("h", j), p), half, p), p)

    def diagonal(self, op: str) -> list:
        acc = [[0] * self.dim for _ in range(self.dim)]
        for i in range(len(self.sites)):
            acc = _madd(acc, self.site(op, i), self.p)
        return acc


def _kz_components(ring, rf, ts: TensorSl2, coords):
    r = len(coords)
    xs = [ring.var(c) for c in coords]
    comps = []
    for i in range(r):
        acc = RingMatrix.zeros(rf, ts.dim)
        for j in range(r):
            if j != i:
                acc = acc + _to_rf(rf, ts.omega(i, j), _linear_inverse(ring, xs[i] - xs[j]))
        comps.append(acc)
    return comps


def kz_pencil(p: int, reps=(1, 1)) -> ConnectionFamily:
    """d - hbar sum_i sum_{j != i} Omega^{ij}/(x_i - x_j) dx_i on V(m_1) x ... x V(m_r)."""
    ts = TensorSl2(reps, p)
    coords = [f"x{i + 1}" for i in range(len(reps))]
    ring = PolyRing(p, ["hbar"] + coords)
    rf = RatFuncField(ring)
    conn = ConnectionFamily.pencil(ring, coords, {"hbar": _kz_components(ring, rf, ts, coords)},
                                   {"hbar": Kind.PERIODIC}, name="kz")
    conn.tensor = ts
    return conn


def _kz_twisted_part(conn: ConnectionFamily, ts: TensorSl2, i: int) -> RingMatrix:
    ring, rf = conn.ring, conn.rf
    xs = [ring.var(c) for c in conn.coords]
    p = ring.p
    acc = RingMatrix.zeros(rf, ts.dim)
    for j in range(len(xs)):
        if j != i:
            # 1/(x_i^p - x_j^p) = (x_i - x_j)^(-p) in characteristic p
            acc = acc + _to_rf(rf, ts.omega(i, j), _linear_inverse(ring, xs[i] - xs[j], p))
    return acc


def kz_target(conn: ConnectionFamily) -> list:
    """(hbar - hbar^p) sum_{j != i} Omega^{ij}/(x_i^p - x_j^p)."""
    ring = conn.ring
    hb = ring.var("hbar")
    w = conn.rf.coerce(hb - hb**ring.p)
    return [_kz_twisted_part(conn, conn.tensor, i).scale(w) for i in range(len(conn.coords))]


def irregular_kz(p: int, reps=(1, 1)) -> ConnectionFamily:
    """d - sum_i (eta H^(i) + hbar sum_{j != i} Omega^{ij}/(x_i - x_j)) dx_i.

    The Cartan direction is h = eta*H; hbar is periodic, eta infinitesimal.
    """
    ts = TensorSl2(reps, p)
    coords = [f"x{i + 1}" for i in range(len(reps))]
    ring = PolyRing(p, ["hbar", "eta"] + coords)
    rf = RatFuncField(ring)
    hs = [_to_rf(rf, ts.site("h", i)) for i in range(len(reps))]
    conn = ConnectionFamily.pencil(ring, coords,
                                   {"hbar": _kz_components(ring, rf, ts, coords), "eta": hs},
                                   {"hbar": Kind.PERIODIC, "eta": Kind.INFINITESIMAL}, name="kz-irregular")
    conn.tensor = ts
    return conn


def irregular_kz_target(conn: ConnectionFamily) -> list:
    """(-h^p)^(i) + (hbar - hbar^p) sum_{j != i} Omega^{ij}/(x_i^p - x_j^p), h = eta*H."""
    ring, rf, ts = conn.ring, conn.rf, conn.tensor
    p = ring.p
    hb, eta = ring.var("hbar"), ring.var("eta")
    w = rf.coerce(hb - hb**p)
    out = []
    for i in range(len(conn.coords)):
        h_pow = _to_rf(rf, ts.site("h", i)) ** p
        out.append(h_pow.scale(rf.coerce(-(eta**p))) + _kz_twisted_part(conn, ts, i).scale(w))
    return out


def irregular_casimir_sl2(p: int, reps=(1,)) -> ConnectionFamily:
    """Irregular Casimir connection of sl2 on the alpha-line, affine coordinate a = alpha(h).

    d - hbar Cas/a da + sum_j x_j (omega^vee)^(j) da, with omega^vee = H/2 and
    Cas = (ef + fe)/2 for the diagonal action on V(m_1)(x_1) x ... x V(m_n)(x_n).
    Parameters: hbar periodic, x_j infinitesimal.
    """
    ts = TensorSl2(reps, p)
    n = len(reps)
    xnames = [f"x{j + 1}" for j in range(n)]
    ring = PolyRing(p, ["hbar"] + xnames + ["a"])
    rf = RatFuncField(ring)
    cas = _casimir(ts)
    half = _inv_mod(2, p)
    pieces = {"hbar": [_to_rf(rf, cas, _linear_inverse(ring, ring.var("a")))]}
    for j, nm in enumerate(xnames):
        pieces[nm] = [_to_rf(rf, _mscale(ts.site("h", j), -half, p))]
    kinds = {"hbar": Kind.PERIODIC, **{nm: Kind.INFINITESIMAL for nm in xnames}}
    conn = ConnectionFamily.pencil(ring, ["a"], pieces, kinds, name="casimir-irregular")
    conn.tensor = ts
    return conn


def _casimir(ts: TensorSl2) -> list:
    p = ts.p
    E, F = ts.diagonal("e"), ts.diagonal("f")
    return _mscale(_madd(_mm(E, F, p), _mm(F, E, p), p), _inv_mod(2, p), p)


def irregular_casimir_target(conn: ConnectionFamily) -> list:
    """(hbar - hbar^p) alpha(omega^vee)/a^p Cas + sum_j x_j^p (omega^vee)^(j)."""
    ring, rf, ts = conn.ring, conn.rf, conn.tensor
    p = ring.p
    hb = ring.var("hbar")
    half = _inv_mod(2, p)
    out = _to_rf(rf, _casimir(ts), _linear_inverse(ring, ring.var("a"), p)).scale(rf.coerce(hb - hb**p))
    for j in range(len(ts.sites)):
        xj = ring.var(f"x{j + 1}")
        out = out + _to_rf(rf, _mscale(ts.site("h", j), half, p), xj**p)
    return [out]


# Dunkl, Gaudin, Calogero-Moser

SIGMA = [[0, 1], [1, 0]]


def dunkl_irregular_a1(p: int, sign: int = 1) -> ConnectionFamily:
    """d - diag(lam, -lam) dx - sign*(c/x) sigma dx on kW, W = {1, s}; c periodic, lam infinitesimal."""
    ring = PolyRing(p, ["c", "lam", "x"])
    rf = RatFuncField(ring)
    pieces = {"c": [_to_rf(rf, _mscale(SIGMA, sign, p), _linear_inverse(ring, ring.var("x")))],
              "lam": [_to_rf(rf, [[1, 0], [0, p - 1]])]}
    return ConnectionFamily.pencil(ring, ["x"], pieces, {"c": Kind.PERIODIC, "lam": Kind.INFINITESIMAL},
                                   name="dunkl-a1")


def dunkl_a1_target(conn: ConnectionFamily, sign: int = 1) -> list:
    """-diag(lam^p, -lam^p) + (c - c^p) sigma/x^p."""
    ring, rf = conn.ring, conn.rf
    p = ring.p
    c, lam, x = ring.gens()
    diag = RingMatrix(rf, [[rf.coerce(-(lam**p)), rf.zero], [rf.zero, rf.coerce(lam**p)]])
    refl = _to_rf(rf, _mscale(SIGMA, sign, p), RatFunc.from_factors(ring, c - c**p, {x: -p}))
    return [diag + refl]


@dataclass
class ReflectionGroupData:
    """S_n (n <= 3) acting on k^n by permuting coordinates, with reflections the transpositions."""

    n: int
    elements: list = field(init=False)
    reflections: list = field(init=False)

    def __post_init__(self):
        if not 2 <= self.n <= 3:
            raise ConfigError("only S_2 and S_3 are supported")
        self.elements = sorted(itertools.permutations(range(self.n)))
        self.reflections = []
        for i in range(self.n):
            for j in range(i + 1, self.n):
                w = list(range(self.n))
                w[i], w[j] = j, i
                self.reflections.append((tuple(w), (i, j)))
        self.index = {w: k for k, w in enumerate(self.elements)}

    def mul(self, a, b):
        # (ab)(i) = a(b(i))
        return tuple(a[b[i]] for i in range(self.n))

    def inverse(self, a):
        out = [0] * self.n
        for i, ai in enumerate(a):
            out[ai] = i
        return tuple(out)

    def act(self, w, v):
        """w . v with (w v)_{w(i)} = v_i."""
        out = [None] * self.n
        for i in range(self.n):
            out[w[i]] = v[i]
        return out

    def check_axioms(self) -> bool:
        e = tuple(range(self.n))
        els = set(self.elements)
        ok = all(self.mul(a, b) in els for a in els for b in els)
        ok &= all(self.mul(a, self.inverse(a)) == e for a in els)
        ok &= all(self.mul(self.mul(a, b), c) == self.mul(a, self.mul(b, c))
                  for a in els for b in els for c in els)
        ok &= all(self.mul(s, s) == e for s, _ in self.reflections)
        # alpha_s vanishes on the fixed hyperplane: alpha(v) = v_i - v_j, fixed vectors have v_i = v_j
        for s, (i, j) in self.reflections:
            v = [Fraction(k + 1) for k in range(self.n)]
            v[j] = v[i]
            ok &= self.act(s, v) == v and v[i] - v[j] == 0
        return ok

    def left_mult(self, s) -> list:
        m = len(self.elements)
        out = [[0] * m for _ in range(m)]
        for w in self.elements:
            out[self.index[self.mul(s, w)]][self.index[w]] = 1
        return out

    def coweight_projection(self, j: int) -> list:
        """pi(e_j) = e_j - (1/n) sum e_k, the projection to the sum-zero hyperplane."""
        return [Fraction(int(k == j)) - Fraction(1, self.n) for k in range(self.n)]


def gaudin_matrices(group: ReflectionGroupData, rf: RatFuncField, lam, h, c, ys) -> list:
    """G_y = y acting by w -> lam(w^-1 y) w, plus sum_s c alpha_s(y)/alpha_s(h) s (left multiplication)."""
    ring = rf.ring
    p = ring.p
    m = len(group.elements)
    out = []
    for y in ys:
        rows = [[rf.zero] * m for _ in range(m)]
        for w in group.elements:
            k = group.index[w]
            v = group.act(group.inverse(w), y)
            val = ring.zero
            for lj, vj in zip(lam, v):
                val = val + lj.scale(_frac_mod(Fraction(vj), p))
            rows[k][k] = rf.coerce(val)
        G = RingMatrix(rf, rows)
        for s, (i, j) in group.reflections:
            ay = _frac_mod(Fraction(y[i]) - Fraction(y[j]), p)
            if ay == 0:
                continue
            coeff = RatFunc.from_factors(ring, c.scale(ay), {h[i] - h[j]: -1})
            G = G + _to_rf(rf, group.left_mult(s), coeff)
        out.append(G)
    return out


def gaudin_operators(p: int, n: int) -> tuple:
    """M_j = G_{pi(e_j)} on kS_n; returns (ring, group, matrices, lam vector, h vector)."""
    if n == 3 and p == 3:
        raise ConfigError("S_3 coweights need 1/3, so p = 3 is excluded")
    if p == 2:
        raise ConfigError("p = 2 is excluded for Gaudin models")
    group = ReflectionGroupData(n)
    lnames = [f"l{k + 1}" for k in range(n - 1)]
    xnames = [f"x{k + 1}" for k in range(n)]
    ring = PolyRing(p, ["c"] + lnames + xnames)
    rf = RatFuncField(ring)
    ls = [ring.var(nm) for nm in lnames]
    lam = ls + [-sum(ls, ring.zero)]
    h = [ring.var(nm) for nm in xnames]
    ys = [group.coweight_projection(j) for j in range(n)]
    mats = gaudin_matrices(group, rf, lam, h, ring.var("c"), ys)
    return ring, group, mats, lam, h


def gaudin_a1(p: int) -> RingMatrix:
    """The S_2 Gaudin operator for omega^vee in coordinates y = lam(omega^vee), x = alpha(h)."""
    group = ReflectionGroupData(2)
    ring = PolyRing(p, ["c", "y", "x"])
    rf = RatFuncField(ring)
    c, y, x = ring.gens()
    return gaudin_matrices(group, rf, [y, -y], [x, ring.zero], c, [[Fraction(1, 2), Fraction(-1, 2)]])[0]


def cm_lax(rf: RatFuncField, mu, h, c) -> RingMatrix:
    """diag(mu) + sum_{i != j} c/(x_i - x_j) E_ij."""
    ring = rf.ring
    n = len(mu)
    rows = []
    for i in range(n):
        row = []
        for j in range(n):
            if i == j:
                row.append(rf.coerce(mu[i]))
            else:
                if h[i] == h[j]:
                    raise ConfigError("coincident points in the Lax matrix")
                row.append(RatFunc.from_factors(ring, c, {h[i] - h[j]: -1}))
        rows.append(row)
    return RingMatrix(rf, rows)


@dataclass
class CMHamiltonians:
    """H_k = Tr wedge^k of the Lax matrix, expanded as polynomials in mu with RatFunc coefficients."""

    ring: PolyRing
    n: int
    mu_names: list
    H: list  # H[k] for k = 0..n as RatFunc over ring

    def mu_expansion(self, k: int) -> list:
        """[(mu exponent tuple, RatFunc coefficient)] for H_k."""
        f = self.H[k]
        idx = [self.ring.var_index(nm) for nm in self.mu_names]
        groups: dict = {}
        for key, c in f.num.terms.items():
            exps = self.ring.exponents(key)
            me = tuple(exps[i] for i in idx)
            rest = list(exps)
            for i in idx:
                rest[i] = 0
            groups.setdefault(me, {})[self.ring.monomial_key(rest)] = c
        return [(me, RatFunc(self.ring, MultiPoly(self.ring, t), f.den)) for me, t in sorted(groups.items())]


def cm_hamiltonians(base: PolyRing, h, c) -> CMHamiltonians:
    n = len(h)
    mu_names = [f"mu{k + 1}" for k in range(n)]
    ring = base.extend(mu_names)
    rf = RatFuncField(ring)
    L = cm_lax(rf, [ring.var(nm) for nm in mu_names], [ring.lift(x) for x in h], ring.lift(c))
    cp = char_poly(L)
    return CMHamiltonians(ring, n, mu_names, [cp.trace_wedge(k).normalize() for k in range(n + 1)])


def cm_operator_identity(p: int, n: int, point: dict | None = None, fld=None) -> list:
    """Defects D_k = H_k(c, h, M) - e_k(lam) Id for k = 1..n.

    Without ``point`` the defects are symbolic RatFunc matrices; with a
    point (name -> element of ``fld``) everything is evaluated there first.
    """
    ring, group, mats, lam, h = gaudin_operators(p, n)
    for a in range(n):
        for b in range(a + 1, n):
            if not mats[a].commutes_with(mats[b]):
                raise ValueError("Gaudin operators do not commute; construction bug")
    ham = cm_hamiltonians(ring, h, ring.var("c"))
    m = len(group.elements)
    if point is None:
        rf = RatFuncField(ring)

        def conv(f):
            return RatFunc(ring, _restrict(f.num, ring), {_restrict(g, ring): e for g, e in f.den.items()})

        target_ring, M = rf, mats
        scal = conv
        ek = [rf.coerce(elementary_symmetric(lam, k, ring)) for k in range(n + 1)]
    else:
        fld = fld or ring.field
        M = [RingMatrix(fld, [[a.evaluate(point, fld) for a in r] for r in G.rows]) for G in mats]
        target_ring = fld

        def scal(f):
            return RatFunc(ring, _restrict(f.num, ring), {_restrict(g, ring): e for g, e in f.den.items()}).evaluate(point, fld)

        ek = [elementary_symmetric([x.evaluate(point, fld) for x in lam], k, fld) for k in range(n + 1)]
    powers: dict = {}

    def mpow(j, e):
        key = (j, e)
        if key not in powers:
            powers[key] = M[j] ** e
        return powers[key]

    defects = []
    for k in range(1, n + 1):
        acc = RingMatrix.zeros(target_ring, m)
        for me, coeff in ham.mu_expansion(k):
            term = RingMatrix.identity(target_ring, m)
            for j, e in enumerate(me):
                if e:
                    term = term @ mpow(j, e)
            acc = acc + term.scale(scal(coeff))
        acc = acc - RingMatrix.identity(target_ring, m).scale(ek[k])
        if point is None:
            acc = acc.map(lambda a: a.normalize())
        defects.append(acc)
    return defects


def _restrict(f: MultiPoly, ring: PolyRing) -> MultiPoly:
    """Move a polynomial free of the extra variables back to ``ring``."""
    src = f.ring
    pos = [src.var_index(nm) for nm in ring.names]
    out = {}
    for key, c in f.terms.items():
        exps = src.exponents(key)
        if sum(exps) != sum(exps[i] for i in pos):
            raise ValueError("polynomial still involves mu variables")
        out[ring.monomial_key([exps[i] for i in pos])] = c
    return MultiPoly(ring, out)


# Toda

@dataclass
class NilHeckeA1Module:
    """V_{infty,lam} = span(1x1, sbar x1) for A_1 with alpha(omega^vee) = 1, s(omega^vee) = -omega^vee."""

    rf: RatFuncField
    lam: object  # lam(omega^vee) as a ring element

    def h_action(self, y) -> RingMatrix:
        """Action of h = y*omega^vee: [[lam(h), alpha(h)], [0, lam(sh)]]."""
        rf = self.rf
        y = rf.coerce(y)
        lam = rf.coerce(self.lam)
        return RingMatrix(rf, [[lam * y, y], [rf.zero, -(lam * y)]])

    def sbar(self) -> RingMatrix:
        rf = self.rf
        return RingMatrix(rf, [[rf.zero, rf.zero], [rf.one, rf.zero]])

    def check_relations(self, y=1) -> bool:
        S = self.sbar()
        H, Hs = self.h_action(y), self.h_action(-self.rf.coerce(y))
        alpha = RingMatrix.identity(self.rf, 2).scale(self.rf.coerce(y))
        return (S @ S).is_zero() and (S @ H - Hs @ S) == alpha


def toda_rank1(p: int) -> ConnectionFamily:
    """theta - omega - z*sbar on V_{infty,lam} in the torus frame theta = z d/dz."""
    ring = PolyRing(p, ["lam", "z"])
    rf = RatFuncField(ring)
    mod = NilHeckeA1Module(rf, ring.var("lam"))
    A = mod.h_action(1) + mod.sbar().scale(rf.var("z"))
    conn = ConnectionFamily(ring, ["z"], [A], ["lam"], {"lam": Kind.PERIODIC}, None, "torus", "toda-a1")
    conn.module = mod
    return conn


def toda_target(conn: ConnectionFamily) -> list:
    """-(omega + alpha(omega) z^p sbar) on V_{infty, lam^p - lam}."""
    ring, rf = conn.ring, conn.rf
    lam, z = ring.gens()
    mod = NilHeckeA1Module(rf, lam**ring.p - lam)
    return [-(mod.h_action(1) + mod.sbar().scale(rf.coerce(z**ring.p)))]


# pseudo-pencil

def pseudo_pencil_example(p: int) -> ConnectionFamily:
    """d - (1/x) [[0, 1], [s, 0]]: not trivializable at s = 0."""
    ring = PolyRing(p, ["s", "x"])
    rf = RatFuncField(ring)
    s, x = ring.gens()
    xi = _linear_inverse(ring, x)
    B = RingMatrix(rf, [[rf.zero, xi], [xi * s, rf.zero]])
    return ConnectionFamily(ring, ["x"], [B], ["s"], name="pseudo-pencil")


def pseudo_pencil_closed_form(conn: ConnectionFamily) -> RingMatrix:
    ring, rf = conn.ring, conn.rf
    p = ring.p
    s, x = ring.gens()
    xp = RatFunc.from_factors(ring, 1, {x: -p})
    if p == 2:
        return RingMatrix(rf, [[xp * s, xp], [xp * s, xp * s]])
    half = (p - 1) // 2
    return RingMatrix(rf, [[rf.zero, xp * (1 - s**half)], [xp * (s - s ** (half + 1)), rf.zero]])


# R-matrix models

@dataclass
class RMatrixModel:
    """R(q, z) with the twist diag(t, 1/t), over F_ell(q, t, z)."""

    ring: PolyRing

    def __post_init__(self):
        self.rf = RatFuncField(self.ring)

    def R(self, q, z) -> RingMatrix:
        ring, rf = self.ring, self.rf
        d = _linear_inverse(ring, z - 1)
        a = d * (q * z - 1)
        return RingMatrix(rf, [[a, d * ((q - 1) * z)], [d * (q - 1), a]])

    def twist(self, t) -> RingMatrix:
        rf = self.rf
        return RingMatrix(rf, [[rf.coerce(t), rf.zero], [rf.zero, _linear_inverse(self.ring, t)]])

    def det_R(self, q, z) -> RatFunc:
        return RatFunc.from_factors(self.ring, q * q * z - 1, {z - 1: -1})


def qkz_model(ell: int, p: int) -> ShiftConnection:
    """T^{-1} R(q, z) diag(t, 1/t) with T: z -> zeta z, zeta of order p in F_ell."""
    zeta = find_order_p_element(ell, p)
    ring = PolyRing(ell, ["q", "t", "z"])
    model = RMatrixModel(ring)
    q, t, z = ring.gens()
    B = model.R(q, z) @ model.twist(t)
    conn = ShiftConnection(ring, ["z"], [B], "multiplicative", q=zeta, order=p, name="qkz")
    conn.model = model
    return conn


def qkz_target(conn: ShiftConnection) -> RingMatrix:
    """R(q^p, z^p) diag(t^p, t^-p), with z^p - 1 = prod_j (z - zeta^j)."""
    ring, rf = conn.ring, conn.rf
    p, zeta, ell = conn.order, conn.q, ring.p
    q, t, z = ring.gens()
    den = {z - pow(zeta, j, ell): -1 for j in range(p)}
    qp, zp = q**p, z**p
    a = RatFunc.from_factors(ring, qp * zp - 1, den)
    b = RatFunc.from_factors(ring, (qp - 1) * zp, den)
    c = RatFunc.from_factors(ring, qp - 1, den)
    R = RingMatrix(rf, [[a, b], [c, a]])
    tw = RingMatrix(rf, [[rf.coerce(t**p), rf.zero], [rf.zero, RatFunc.from_factors(ring, 1, {t: -p})]])
    return R @ tw


def qkz_additive_model(p: int) -> ShiftConnection:
    """T^{-1} R_add(s, u) diag(t, 1/t), R_add = 1 + (s/u) [[1,1],[1,1]], T: u -> u + 1."""
    ring = PolyRing(p, ["s", "t", "u"])
    rf = RatFuncField(ring)
    s, t, u = ring.gens()
    r = RatFunc.from_factors(ring, s, {u: -1})
    R = RingMatrix(rf, [[r + 1, r], [r, r + 1]])
    tw = RingMatrix(rf, [[rf.coerce(t), rf.zero], [rf.zero, _linear_inverse(ring, t)]])
    return ShiftConnection(ring, ["u"], [R @ tw], "additive", name="qkz-additive")


def qkz_additive_target(conn: ShiftConnection) -> RingMatrix:
    """R_add(s^p - s, u^p - u) diag(t^p, t^-p) with u^p - u = prod_{j in F_p} (u - j)."""
    ring, rf = conn.ring, conn.rf
    p = ring.p
    s, t, u = ring.gens()
    r = RatFunc.from_factors(ring, s**p - s, {u - j: -1 for j in range(p)})
    R = RingMatrix(rf, [[r + 1, r], [r, r + 1]])
    tw = RingMatrix(rf, [[rf.coerce(t**p), rf.zero], [rf.zero, RatFunc.from_factors(ring, 1, {t: -p})]])
    return R @ tw


# registry

@dataclass
class ModelSpec:
    id: str
    summary: str
    constraint: str
    pinned: tuple

    def check_prime(self, p: int, ell: int | None = None) -> None:
        from .field import is_prime
        if not is_prime(p):
            raise ConfigError(f"{p} is not prime; {self.id} requires {self.constraint}")
        ok = _PRIME_RULES[self.id](p, ell)
        if not ok:
            raise ConfigError(f"model {self.id} requires {self.constraint} (got p={p}"
                              + (f", ell={ell})" if ell is not None else ")"))


def _ell_ok(p, ell):
    from .field import is_prime
    return ell is not None and is_prime(ell) and (ell - 1) % p == 0


_PRIME_RULES = {
    "kz": lambda p, ell: p > 2,
    "kz-irregular": lambda p, ell: p > 2,
    "casimir-irregular": lambda p, ell: p > 2,
    "dunkl-a1": lambda p, ell: True,
    "gaudin-sn": lambda p, ell: p > 3,
    "cm-identity": lambda p, ell: p > 3,
    "toda-a1": lambda p, ell: True,
    "qkz": _ell_ok,
    "qkz-additive": lambda p, ell: True,
    "pseudo-pencil": lambda p, ell: True,
}

MODELS = {
    "kz": ModelSpec("kz", "KZ pencil for sl2, d - hbar sum Omega^{ij}/(x_i - x_j) dx_i", "p > 2", (5, 7, 11)),
    "kz-irregular": ModelSpec("kz-irregular", "irregular KZ, hbar periodic and eta infinitesimal", "p > 2", (5, 7)),
    "casimir-irregular": ModelSpec("casimir-irregular", "irregular Casimir connection of sl2", "p > 2", (5, 7)),
    "dunkl-a1": ModelSpec("dunkl-a1", "irregular Dunkl connection for A_1", "any prime p", (5, 7, 11)),
    "gaudin-sn": ModelSpec("gaudin-sn", "Gaudin operators on kS_n, n = 2, 3", "p > 3", (7, 11)),
    "cm-identity": ModelSpec("cm-identity", "Calogero-Moser operator identity on kS_n", "p > 3", (7, 11)),
    "toda-a1": ModelSpec("toda-a1", "rank-1 Toda connection on the nil-Hecke module", "any prime p", (5, 7)),
    "qkz": ModelSpec("qkz", "qKZ difference connection with the 2x2 R-matrix",
                     "a prime ell with p | ell - 1 (pass --ell)", (3, 5, 7)),
    "qkz-additive": ModelSpec("qkz-additive", "additive qKZ with R_add", "any prime p", (3, 5, 7)),
    "pseudo-pencil": ModelSpec("pseudo-pencil", "d - (1/x)[[0,1],[s,0]]", "any prime p", (2, 3, 5, 7)),
}

DEFAULT_ELL = {3: 7, 5: 11, 7: 29}
