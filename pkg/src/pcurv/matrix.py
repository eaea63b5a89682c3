"""Dense matrices over a coefficient ring and division-free characteristic polynomials.

A "ring" is any object with ``zero``, ``one``, ``add``, ``sub``, ``mul``,
``neg``, ``eq``, ``is_zero`` and ``from_int``: the finite fields, PolyRing
and RatFuncField all qualify.
"""
from __future__ import annotations

import enum
import itertools
import math
import random
from dataclasses import dataclass
from typing import Sequence

from .poly import PolyRing, MultiPoly
from .ratfunc import RatFunc, RatFuncField


class NonCommutingError(ValueError):
    """A pencil was given matrices that do not pairwise commute."""


class RingMatrix:
    __slots__ = ("ring", "rows", "n")

    def __init__(self, ring, rows: Sequence[Sequence]):
        rows = [list(r) for r in rows]
        n = len(rows)
        if any(len(r) != n for r in rows):
            raise ValueError("matrix must be square")
        self.ring = ring
        self.rows = rows
        self.n = n

    @classmethod
    def identity(cls, ring, n: int) -> RingMatrix:
        return cls(ring, [[ring.one if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def zeros(cls, ring, n: int) -> RingMatrix:
        return cls(ring, [[ring.zero] * n for _ in range(n)])

    @classmethod
    def diag(cls, ring, entries) -> RingMatrix:
        n = len(entries)
        return cls(ring, [[entries[i] if i == j else ring.zero for j in range(n)] for i in range(n)])

    @classmethod
    def from_ints(cls, ring, rows) -> RingMatrix:
        return cls(ring, [[ring.from_int(v) for v in r] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.rows[i][j]

    def map(self, fn, ring=None) -> RingMatrix:
        return RingMatrix(ring or self.ring, [[fn(a) for a in r] for r in self.rows])

    def _check(self, other):
        if not isinstance(other, RingMatrix):
            raise TypeError("expected a RingMatrix")
        if other.n != self.n:
            raise ValueError(f"size mismatch: {self.n} vs {other.n}")

    def __add__(self, other):
        self._check(other)
        add = self.ring.add
        return RingMatrix(self.ring, [[add(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __sub__(self, other):
        self._check(other)
        sub = self.ring.sub
        return RingMatrix(self.ring, [[sub(a, b) for a, b in zip(r, s)] for r, s in zip(self.rows, other.rows)])

    def __neg__(self):
        return self.map(self.ring.neg)

    def scale(self, c) -> RingMatrix:
        mul = self.ring.mul
        return self.map(lambda a: mul(c, a))

    def __matmul__(self, other):
        self._check(other)
        ring = self.ring
        add, mul, is_zero = ring.add, ring.mul, ring.is_zero
        n = self.n
        cols = list(zip(*other.rows))
        out = []
        for r in self.rows:
            nz = [(k, a) for k, a in enumerate(r) if not is_zero(a)]
            row = []
            for j in range(n):
                col = cols[j]
                acc = ring.zero
                for k, a in nz:
                    b = col[k]
                    if not is_zero(b):
                        acc = add(acc, mul(a, b))
                row.append(acc)
            out.append(row)
        return RingMatrix(ring, out)

    def __pow__(self, k: int):
        if k < 0:
            raise ValueError("negative matrix power")
        result = RingMatrix.identity(self.ring, self.n)
        base = self
        while k:
            if k & 1:
                result = result @ base
            k >>= 1
            if k:
                base = base @ base
        return result

    def transpose(self) -> RingMatrix:
        return RingMatrix(self.ring, [list(c) for c in zip(*self.rows)])

    def trace(self):
        acc = self.ring.zero
        for i in range(self.n):
            acc = self.ring.add(acc, self.rows[i][i])
        return acc

    def is_zero(self) -> bool:
        return all(self.ring.is_zero(a) for r in self.rows for a in r)

    def __eq__(self, other):
        if not isinstance(other, RingMatrix) or other.n != self.n:
            return False
        eq = self.ring.eq
        return all(eq(a, b) for r, s in zip(self.rows, other.rows) for a, b in zip(r, s))

    __hash__ = None

    def commutes_with(self, other) -> bool:
        return (self @ other) == (other @ self)

    def apply(self, vec: Sequence):
        add, mul = self.ring.add, self.ring.mul
        out = []
        for r in self.rows:
            acc = self.ring.zero
            for a, v in zip(r, vec):
                acc = add(acc, mul(a, v))
            out.append(acc)
        return out

    def column(self, j: int) -> list:
        return [r[j] for r in self.rows]

    @classmethod
    def from_columns(cls, ring, cols) -> RingMatrix:
        return cls(ring, [list(r) for r in zip(*cols)])

    def inverse(self) -> RingMatrix:
        """Gauss-Jordan inverse; entries must live in a field."""
        ring = self.ring
        n = self.n
        a = [list(r) + [ring.one if i == j else ring.zero for j in range(n)] for i, r in enumerate(self.rows)]
        for c in range(n):
            piv = next((r for r in range(c, n) if not ring.is_zero(a[r][c])), None)
            if piv is None:
                raise ZeroDivisionError("matrix is singular")
            a[c], a[piv] = a[piv], a[c]
            iv = ring.inv(a[c][c])
            a[c] = [ring.mul(iv, v) for v in a[c]]
            for r in range(n):
                if r != c and not ring.is_zero(a[r][c]):
                    f = a[r][c]
                    a[r] = [ring.sub(v, ring.mul(f, w)) for v, w in zip(a[r], a[c])]
        return RingMatrix(ring, [r[n:] for r in a])

    def to_text(self) -> str:
        tt = getattr(self.ring, "to_text", str)
        return "\n".join("[" + ", ".join(tt(a) for a in r) + "]" for r in self.rows)

    def __repr__(self):
        return f"RingMatrix({self.n}x{self.n} over {self.ring!r})"


@dataclass
class CharPoly:
    """Coefficients ``c_0..c_N`` of det(Lambda*I - M), low degree first."""

    ring: object
    coeffs: list

    @property
    def degree(self) -> int:
        return len(self.coeffs) - 1

    def __eq__(self, other):
        if not isinstance(other, CharPoly) or other.degree != self.degree:
            return False
        return all(self.ring.eq(a, b) for a, b in zip(self.coeffs, other.coeffs))

    def trace_wedge(self, m: int):
        n = self.degree
        if not 0 <= m <= n:
            raise ValueError(f"m={m} out of range 0..{n}")
        c = self.coeffs[n - m]
        return c if m % 2 == 0 else self.ring.neg(c)

    def to_text(self) -> list[str]:
        tt = getattr(self.ring, "to_text", str)
        return [tt(c) for c in self.coeffs]


def char_poly(M: RingMatrix) -> CharPoly:
    """Berkowitz (Samuelson) recursion; no divisions, so valid over any commutative ring."""
    ring = M.ring
    add, mul, neg, is_zero = ring.add, ring.mul, ring.neg, ring.is_zero
    n = M.n
    if n == 0:
        return CharPoly(ring, [ring.one])
    a = M.rows
    # poly holds coefficients high-to-low of the char poly of the trailing k x k block.
    poly = [ring.one, neg(a[n - 1][n - 1])]
    for k in range(n - 2, -1, -1):
        size = n - k  # new block is rows/cols k..n-1
        R = a[k][k + 1:]
        Cc = [a[i][k] for i in range(k + 1, n)]
        A = [row[k + 1:] for row in a[k + 1:]]
        # column of the Toeplitz multiplier: 1, -a_kk, -R C, -R A C, ..., -R A^{size-2} C
        col = [ring.one, neg(a[k][k])]
        v = Cc
        for j in range(size - 1):
            acc = ring.zero
            for r, x in zip(R, v):
                if not is_zero(r) and not is_zero(x):
                    acc = add(acc, mul(r, x))
            col.append(neg(acc))
            if j < size - 2:
                nv = []
                for row in A:
                    s = ring.zero
                    for y, x in zip(row, v):
                        if not is_zero(y) and not is_zero(x):
                            s = add(s, mul(y, x))
                    nv.append(s)
                v = nv
        new = []
        for i in range(size + 1):
            acc = ring.zero
            for j in range(max(0, i - size), min(i, size - 1) + 1):
                c = col[i - j]
                pj = poly[j]
                if not is_zero(c) and not is_zero(pj):
                    acc = add(acc, mul(c, pj))
            new.append(acc)
        poly = new
    return CharPoly(ring, poly[::-1])


def rank(M: RingMatrix) -> int:
    """Rank over a field by row reduction."""
    ring = M.ring
    a = [list(r) for r in M.rows]
    rk = 0
    for c in range(M.n):
        piv = next((r for r in range(rk, M.n) if not ring.is_zero(a[r][c])), None)
        if piv is None:
            continue
        a[rk], a[piv] = a[piv], a[rk]
        iv = ring.inv(a[rk][c])
        for r in range(rk + 1, M.n):
            if not ring.is_zero(a[r][c]):
                f = ring.mul(a[r][c], iv)
                a[r] = [ring.sub(x, ring.mul(f, y)) for x, y in zip(a[r], a[rk])]
        rk += 1
    return rk


def trace_wedge(M: RingMatrix, m: int):
    """Tr of the m-th exterior power, read off the characteristic polynomial."""
    if not 0 <= m <= M.n:
        raise ValueError(f"m={m} out of range 0..{M.n}")
    return char_poly(M).trace_wedge(m)


def is_nilpotent(M: RingMatrix) -> bool:
    cp = char_poly(M)
    return all(M.ring.is_zero(c) for c in cp.coeffs[:-1])


def isospectral(M1: RingMatrix, M2: RingMatrix) -> bool:
    if M1.n != M2.n:
        raise ValueError(f"size mismatch: {M1.n} vs {M2.n}")
    return char_poly(M1) == char_poly(M2)


def matrix_frobenius_twist(M: RingMatrix) -> RingMatrix:
    ring = M.ring
    if hasattr(ring, "frobenius"):
        return M.map(ring.frobenius)
    return M.map(lambda a: a.frobenius_twist())


def check_commuting(mats: Sequence[RingMatrix], label: str = "pencil") -> None:
    for i in range(len(mats)):
        for j in range(i + 1, len(mats)):
            if not mats[i].commutes_with(mats[j]):
                raise NonCommutingError(f"{label}: matrices {i} and {j} do not commute")


class Strategy(enum.Enum):
    SYMBOLIC = "symbolic"
    SAMPLED = "sampled"


def linear_combination(mats: Sequence[RingMatrix], coeffs: Sequence) -> RingMatrix:
    ring = mats[0].ring
    out = RingMatrix.zeros(ring, mats[0].n)
    for c, m in zip(coeffs, mats):
        out = out + m.scale(c)
    return out


def sample_count(order: int, degree: int, bits: int = 30) -> int:
    """Samples needed so (degree/order)^k < 2^-bits."""
    if degree <= 0:
        return 1
    ratio = order / degree
    if ratio <= 1:
        raise ValueError(f"field of order {order} too small for degree {degree} sampling")
    return max(1, math.ceil(bits / math.log2(ratio)))


def pencil_isospectral(L: Sequence[RingMatrix], M: Sequence[RingMatrix], strategy=None,
                       rng: random.Random | None = None, check: bool = True) -> bool:
    """Char polys of sum u_i L_i and sum u_i M_i agree as polynomials in u."""
    if len(L) != len(M):
        raise ValueError("pencils of different lengths")
    if not L:
        return True
    n = L[0].n
    if any(m.n != n for m in list(L) + list(M)):
        raise ValueError("size mismatch inside pencils")
    if check:
        check_commuting(L, "first pencil")
        check_commuting(M, "second pencil")
    r = len(L)
    if strategy is None:
        strategy = Strategy.SAMPLED if n * r > 8 else Strategy.SYMBOLIC
    strategy = Strategy(strategy)
    ring = L[0].ring
    if strategy is Strategy.SAMPLED:
        return _pencil_sampled(L, M, rng or random.Random(0))
    return _pencil_symbolic(L, M, ring)


def _pencil_sampled(L, M, rng) -> bool:
    ring = L[0].ring
    if not hasattr(ring, "order"):
        raise ValueError("SAMPLED strategy needs field entries; evaluate first")
    n = L[0].n
    k = sample_count(ring.order, n)
    for _ in range(k):
        u = [ring.random(rng) for _ in L]
        if char_poly(linear_combination(L, u)) != char_poly(linear_combination(M, u)):
            return False
    return True


def _pencil_symbolic(L, M, ring) -> bool:
    r = len(L)
    n = L[0].n
    names = [f"u{i + 1}" for i in range(r)]
    if isinstance(ring, PolyRing) or isinstance(ring, RatFuncField):
        base = ring if isinstance(ring, PolyRing) else ring.ring
        if any(nm in base.index for nm in names):
            names = [f"_u{i + 1}" for i in range(r)]
        ext = base.extend(names)
        if isinstance(ring, PolyRing):
            lift = ext.lift
            target = ext
        else:
            target = RatFuncField(ext)

            def lift(a):
                return RatFunc(ext, ext.lift(a.num), {ext.lift(f): e for f, e in a.den.items()})
        us = [target.coerce(ext.var(nm)) if isinstance(target, RatFuncField) else ext.var(nm) for nm in names]
        Ls = [m.map(lift, target) for m in L]
        Ms = [m.map(lift, target) for m in M]
        return char_poly(linear_combination(Ls, us)) == char_poly(linear_combination(Ms, us))
    if getattr(ring, "degree", None) == 1:
        # prime field: lift to F_p[u]
        ext = PolyRing(ring.p, names)
        Ls = [m.map(ext.const, ext) for m in L]
        Ms = [m.map(ext.const, ext) for m in M]
        us = ext.gens()
        return char_poly(linear_combination(Ls, us)) == char_poly(linear_combination(Ms, us))
    # extension field: the char poly has degree <= n in each u_i, so agreement on
    # a grid S^r with |S| = n + 1 is an identity of polynomials.
    grid = [ring.from_code(c) if hasattr(ring, "from_code") else c for c in range(n + 1)]
    for u in itertools.product(grid, repeat=r):
        if char_poly(linear_combination(L, u)) != char_poly(linear_combination(M, u)):
            return False
    return True
