"""Differential connections d - B(s, x) in characteristic p and their p-curvature."""
from __future__ import annotations

import enum
from dataclasses import dataclass, field
from typing import Sequence

from .matrix import RingMatrix, char_poly
from .poly import PolyRing
from .ratfunc import RatFunc, RatFuncField
from .series import compile_matrix, p_curvature_point


class Kind(str, enum.Enum):
    PERIODIC = "periodic"
    INFINITESIMAL = "infinitesimal"


class NonzeroCurvatureError(ValueError):
    """Flat sections were requested for a connection whose p-curvature is not zero."""


@dataclass
class PCurvatureResult:
    C: list
    frame: str = "affine"  # affine: d^[p] = 0, torus: theta^[p] = theta


@dataclass
class ConnectionFamily:
    """Connection ``d - sum_i B_i dx_i`` with entries in RatFunc over ``ring``.

    ``params`` are ring variables the matrices may depend on polynomially;
    for a pencil, ``pieces[s]`` holds the s-independent matrices with
    ``B_i = sum_s s * pieces[s][i]``.
    """

    ring: PolyRing
    coords: list
    B: list
    params: list = field(default_factory=list)
    kinds: dict = field(default_factory=dict)
    pieces: dict | None = None
    frame: str = "affine"
    name: str = ""

    def __post_init__(self):
        self.rf = RatFuncField(self.ring)
        if len(self.B) != len(self.coords):
            raise ValueError("one matrix per coordinate is required")
        for s in self.params:
            self.kinds.setdefault(s, Kind.PERIODIC)
        self._compiled: dict = {}

    @property
    def rank(self) -> int:
        return self.B[0].n

    @classmethod
    def pencil(cls, ring: PolyRing, coords, pieces: dict, kinds: dict | None = None,
               frame: str = "affine", name: str = "") -> ConnectionFamily:
        rf = RatFuncField(ring)
        params = list(pieces)
        pidx = {ring.var_index(s) for s in params}
        for s, mats in pieces.items():
            if len(mats) != len(coords):
                raise ValueError(f"parameter {s}: need one matrix per coordinate")
            for m in mats:
                for row in m.rows:
                    for a in row:
                        if pidx.intersection(a.num.variables()):
                            raise ValueError(f"pencil component for {s} depends on a parameter")
        B = []
        for i in range(len(coords)):
            n = next(iter(pieces.values()))[i].n
            acc = RingMatrix.zeros(rf, n)
            for s, mats in pieces.items():
                acc = acc + mats[i].scale(rf.var(s))
            B.append(acc)
        kinds = {s: Kind(k) for s, k in (kinds or {}).items()}
        return cls(ring, list(coords), B, params, kinds, dict(pieces), frame, name)

    def direction(self, i) -> int:
        """Ring variable index of coordinate ``i`` (position or name)."""
        name = self.coords[i] if isinstance(i, int) else i
        if name not in self.coords:
            raise ValueError(f"{name!r} is not a coordinate of this connection")
        return self.ring.var_index(name)

    def _pos(self, i) -> int:
        return i if isinstance(i, int) else self.coords.index(i)

    def specialize(self, values: dict | None) -> ConnectionFamily:
        """Substitute field values (ints) for some parameters."""
        if not values:
            return self
        for k in values:
            if k not in self.params:
                raise ValueError(f"{k!r} is not a parameter")
        B = [m.map(lambda a: a.substitute(values)) for m in self.B]
        params = [s for s in self.params if s not in values]
        return ConnectionFamily(self.ring, self.coords, B, params,
                                {s: self.kinds[s] for s in params}, None, self.frame, self.name)

    # covariant derivatives
    def covariant_apply(self, i, v: Sequence, s: dict | None = None) -> list:
        conn = self.specialize(s)
        pos = self._pos(i)
        var = conn.direction(pos)
        Bv = conn.B[pos].apply([conn.rf.coerce(a) for a in v])
        return [conn.rf.coerce(a).derivative(var) - b for a, b in zip(v, Bv)]

    def p_curvature(self, i, s: dict | None = None) -> RingMatrix:
        """C_i = nabla_i^p as a matrix over RatFunc (exact, coordinate frame)."""
        conn = self.specialize(s)
        pos = self._pos(i)
        if conn.frame == "torus":
            return conn.torus_p_curvature()
        var = conn.direction(pos)
        Bi = conn.B[pos]
        M = RingMatrix.identity(conn.rf, conn.rank)
        for _ in range(self.ring.p):
            M = M.map(lambda a: a.derivative(var)) - Bi @ M
            M = M.map(lambda a: a.normalize())
        return M

    def p_curvatures(self, s: dict | None = None) -> PCurvatureResult:
        return PCurvatureResult([self.p_curvature(i, s) for i in range(len(self.coords))], self.frame)

    def apply_power(self, i, v, k: int, s: dict | None = None) -> list:
        for _ in range(k):
            v = self.covariant_apply(i, v, s)
        return v

    def check_linearity(self, i, f, C: RingMatrix | None = None, s: dict | None = None) -> bool:
        """nabla_i^p (f e_k) == C_i (f e_k) for every basis vector; f a scalar RatFunc."""
        C = C if C is not None else self.p_curvature(i, s)
        n = self.rank
        zero = self.rf.zero
        f = self.rf.coerce(f)
        for k in range(n):
            v = [f if j == k else zero for j in range(n)]
            lhs = self.apply_power(i, v, self.ring.p, s)
            rhs = C.apply(v)
            if any(a != b for a, b in zip(lhs, rhs)):
                return False
        return True

    def p_curvature_at(self, i, point: dict, fld) -> RingMatrix:
        """C_i evaluated at a point (all ring variables given as elements of ``fld``)."""
        pos = self._pos(i)
        vals = [None] * self.ring.n
        for k, v in point.items():
            vals[self.ring.var_index(k)] = v
        if self.frame == "torus":
            # theta = z d/dz: C_theta = z^p * C of the affine connection d/dz - A/z
            var = self.direction(pos)
            key = ("torus", pos)
            if key not in self._compiled:
                zinv = RatFunc.from_factors(self.ring, 1, {self.ring.var(var): -1})
                self._compiled[key] = compile_matrix(self.B[pos].map(lambda a: a * zinv), var)
            rows = p_curvature_point(self._compiled[key], self.rank, vals, var, fld)
            zp = fld.pow(vals[var], self.ring.p)
            return RingMatrix(fld, [[fld.mul(zp, a) for a in r] for r in rows])
        var = self.direction(pos)
        if pos not in self._compiled:
            self._compiled[pos] = compile_matrix(self.B[pos], var)
        rows = p_curvature_point(self._compiled[pos], self.rank, vals, var, fld)
        return RingMatrix(fld, rows)

    # comparison targets
    def b_star(self) -> list:
        """sum_j (s_j - s_j^p) B_ij^(1) for an all-periodic pencil."""
        if self.pieces is None:
            raise ValueError("b_star needs pencil data")
        bad = [s for s in self.params if self.kinds[s] != Kind.PERIODIC]
        if bad:
            raise ValueError(f"parameters {bad} are not periodic; use b_star_mixed")
        return self.b_star_mixed()

    def b_star_mixed(self) -> list:
        """sum_periodic (s - s^p) B^(1) - sum_infinitesimal s^p B^(1)."""
        if self.pieces is None:
            raise ValueError("b_star_mixed needs pencil data")
        p = self.ring.p
        out = []
        for i in range(len(self.coords)):
            acc = RingMatrix.zeros(self.rf, self.rank)
            for s, mats in self.pieces.items():
                sv = self.ring.var(s)
                coeff = sv - sv**p if self.kinds[s] == Kind.PERIODIC else -(sv**p)
                tw = mats[i].map(lambda a: a.frobenius_twist())
                acc = acc + tw.scale(self.rf.coerce(coeff))
            out.append(acc)
        return out

    # flatness
    def curvature(self, i, l) -> RingMatrix:
        a, b = self.direction(i), self.direction(l)
        Bi, Bl = self.B[self._pos(i)], self.B[self._pos(l)]
        d = Bl.map(lambda e: e.derivative(a)) - Bi.map(lambda e: e.derivative(b))
        return (d - (Bi @ Bl - Bl @ Bi)).map(lambda e: e.normalize())

    def flatness_check(self) -> bool:
        r = len(self.coords)
        return all(self.curvature(i, l).is_zero() for i in range(r) for l in range(i + 1, r))

    # torus frame
    def torus_p_curvature(self, method: str = "direct") -> RingMatrix:
        """nabla_theta^p - nabla_theta for nabla_theta = theta - A, theta = z d/dz."""
        if len(self.coords) != 1:
            raise ValueError("torus frame is implemented for one coordinate")
        z = self.ring.var(self.coords[0])
        var = self.direction(0)
        A = self.B[0]
        p = self.ring.p
        if method == "direct":
            zr = self.rf.coerce(z)

            def theta(a):
                return (zr * a.derivative(var)).normalize()

            M = RingMatrix.identity(self.rf, self.rank)
            for _ in range(p):
                M = M.map(theta) - A @ M
            return (M + A).map(lambda a: a.normalize())
        if method == "affine":
            zinv = RatFunc.from_factors(self.ring, 1, {z: -1})
            aff = ConnectionFamily(self.ring, self.coords, [A.map(lambda a: a * zinv)], self.params,
                                   dict(self.kinds), None, "affine", self.name)
            C = aff.p_curvature(0)
            zp = self.rf.coerce(z**p)
            return C.map(lambda a: (zp * a).normalize())
        raise ValueError(f"unknown method {method!r}")

    # flat sections
    def flat_section_basis(self, base_point: dict | None = None, s: dict | None = None,
                           basis: Sequence | None = None) -> list:
        """Flat sections F with F(base) = F0 via F = (-1)^r prod_i nabla_i^(p-1)(F0 prod_i x_i^(p-1)).

        Coordinates of the returned vectors are centered at ``base_point``.
        """
        conn = self.specialize(s).centered(base_point or {})
        for i in range(len(conn.coords)):
            if not conn.p_curvature(i).is_zero():
                raise NonzeroCurvatureError(f"p-curvature in direction {conn.coords[i]} is not zero")
        p = self.ring.p
        n = conn.rank
        r = len(conn.coords)
        weight = conn.rf.one
        for c in conn.coords:
            weight = weight * conn.rf.coerce(self.ring.var(c) ** (p - 1))
        if basis is None:
            basis = [[1 if j == k else 0 for j in range(n)] for k in range(n)]
        sign = -1 if r % 2 else 1
        out = []
        for F0 in basis:
            v = [weight * int(a) for a in F0]
            for i in range(r):
                v = conn.apply_power(i, v, p - 1)
            out.append([(a * sign).normalize() for a in v])
        return out

    def centered(self, base_point: dict) -> ConnectionFamily:
        """Same connection written in coordinates x - a (base point moved to 0)."""
        if not base_point:
            return self
        subs = {c: self.ring.var(c) + a for c, a in base_point.items()}
        B = [m.map(lambda e: e.substitute(subs)) for m in self.B]
        return ConnectionFamily(self.ring, self.coords, B, self.params, dict(self.kinds), None,
                                self.frame, self.name)


def from_d_plus_a(ring: PolyRing, coord: str, a: RingMatrix) -> ConnectionFamily:
    """Adapter for connections written d + a: internally d - B with B = -a."""
    return ConnectionFamily(ring, [coord], [-a])


def trivializable_at_zero_test(C: RingMatrix, s: str = "s") -> bool:
    """True iff Tr wedge^m C is divisible by s^m for every m (C polynomial in s)."""
    cp = char_poly(C)
    for m in range(1, C.n + 1):
        tw = cp.trace_wedge(m).normalize()
        if tw.is_zero():
            continue
        if tw.valuation(s) < m:
            return False
    return True


def evaluate_matrix(M: RingMatrix, point: dict, fld) -> RingMatrix:
    """Evaluate a RatFunc/MultiPoly matrix at a point given as name -> element of ``fld``."""
    return RingMatrix(fld, [[a.evaluate(point, fld) for a in r] for r in M.rows])
