"""Pointwise p-curvature through truncated power series.

In characteristic p the ideal (t^p) of F[t] is stable under d/dt, so
restricting a connection to the line ``x0 + t*e_i`` and working in
F[t]/(t^p) loses nothing: the constant term of ``(d/dt - B)^p`` applied to
the standard basis is exactly ``C_i(x0)``.  This avoids the symbolic degree
blow-up of iterating over rational functions and lets ``x0`` live in any
field of characteristic p (in particular the large extension fields used for
sampling).
"""
from __future__ import annotations

import math

from .ratfunc import PoleError, RatFunc


class LineEntry:
    """A RatFunc prepared for restriction to lines in one coordinate direction."""

    __slots__ = ("num_parts", "den_parts", "zero")

    def __init__(self, f: RatFunc, direction: int):
        ring = f.ring
        s = ring.shifts[direction]
        self.zero = f.is_zero()
        parts = f.num.coefficients_in(direction)
        self.num_parts = sorted(parts.items(), reverse=True)
        self.den_parts = []
        for lin, e in f.den.items():
            a = lin.terms.get(1 << s, 0)
            self.den_parts.append((lin, a, e))

    def series(self, point, direction: int, field, n: int) -> list:
        """Coefficients of f(point + t e_direction) mod t^n."""
        if self.zero:
            return [field.zero] * n
        x0 = point[direction]
        # numerator by Horner in (x0 + t)
        acc = [field.zero] * n
        prev_e = None
        for e, cpoly in self.num_parts:
            if prev_e is not None:
                for _ in range(prev_e - e):
                    acc = _mul_linear(acc, x0, field)
            acc[0] = field.add(acc[0], cpoly.evaluate(point, field))
            prev_e = e
        if prev_e:
            for _ in range(prev_e):
                acc = _mul_linear(acc, x0, field)
        out = acc
        for lin, a, e in self.den_parts:
            f0 = lin.evaluate(point, field)
            if field.is_zero(f0):
                raise PoleError("line passes through a pole at t = 0")
            inv0 = field.inv(f0)
            scale = field.pow(inv0, e)
            if a == 0:
                out = [field.mul(c, scale) for c in out]
                continue
            # (f0 + a t)^(-e) = f0^-e * sum_k C(-e, k) (a/f0)^k t^k
            u = field.mul(field.from_int(a), inv0)
            ser = []
            upow = field.one
            p = field.characteristic
            for k in range(n):
                b = math.comb(e + k - 1, k) % p
                if k % 2:
                    b = (-b) % p
                ser.append(field.mul(field.mul(field.from_int(b), upow), scale))
                upow = field.mul(upow, u)
            out = mul_series(out, ser, field, n)
        return out


def _mul_linear(acc, x0, field):
    # acc * (x0 + t), truncated to len(acc)
    n = len(acc)
    out = [field.mul(acc[0], x0)]
    for k in range(1, n):
        out.append(field.add(field.mul(acc[k], x0), acc[k - 1]))
    return out


def mul_series(a, b, field, n):
    add, mul, is_zero = field.add, field.mul, field.is_zero
    out = [field.zero] * n
    for i, x in enumerate(a[:n]):
        if is_zero(x):
            continue
        for j in range(min(len(b), n - i)):
            y = b[j]
            if not is_zero(y):
                out[i + j] = add(out[i + j], mul(x, y))
    return out


def compile_matrix(B, direction: int):
    """Sparse rows of LineEntry objects for a RingMatrix of RatFunc."""
    rows = []
    for r in B.rows:
        rows.append([(k, LineEntry(f, direction)) for k, f in enumerate(r) if not f.is_zero()])
    return rows


def p_curvature_point(compiled, n: int, point, direction: int, field):
    """C = (d - B)^p at ``point``, returned as a list of rows of field elements."""
    p = field.characteristic
    zero = field.zero
    # series of every nonzero B entry, truncated to p terms
    bser = [[(k, e.series(point, direction, field, p)) for k, e in row] for row in compiled]
    add, sub, mul, is_zero = field.add, field.sub, field.mul, field.is_zero
    # M_k only matters mod t^(p - k + 1) for the constant term of M_p
    M = [[[field.one if r == c else zero] + [zero] * p for c in range(n)] for r in range(n)]
    for step in range(p):
        length = p - step
        new = []
        for r in range(n):
            row = []
            for c in range(n):
                old = M[r][c]
                d = [field.mul(field.from_int(j + 1), old[j + 1]) if not is_zero(old[j + 1]) else zero
                     for j in range(length)]
                row.append(d)
            new.append(row)
        for r in range(n):
            brow = bser[r]
            if not brow:
                continue
            for c in range(n):
                acc = new[r][c]
                for k, bs in brow:
                    ms = M[k][c]
                    for i in range(length):
                        x = bs[i]
                        if is_zero(x):
                            continue
                        for j in range(length - i):
                            y = ms[j]
                            if not is_zero(y):
                                acc[i + j] = sub(acc[i + j], mul(x, y))
        M = new
    return [[M[r][c][0] for c in range(n)] for r in range(n)]
