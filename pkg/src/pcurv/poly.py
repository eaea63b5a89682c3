"""Sparse multivariate polynomials over a prime field.

Monomials are packed into a single int: variable ``i`` of an ``n``-variable
ring occupies bits ``[BITS*(n-1-i), BITS*(n-i))``.  With variable 0 in the
most significant slot, comparing packed keys is lexicographic comparison of
exponent vectors, and multiplying monomials is integer addition.
"""
from __future__ import annotations

import re
from typing import Iterable, Sequence

from .field import PrimeField

BITS = 20
MASK = (1 << BITS) - 1


class PolyRing:
    """A session context: prime modulus plus an ordered variable registry."""

    def __init__(self, p: int, names: Sequence[str]):
        if len(set(names)) != len(names):
            raise ValueError(f"duplicate variable names in {list(names)}")
        for nm in names:
            if not re.fullmatch(r"[A-Za-z_][A-Za-z_0-9]*", nm):
                raise ValueError(f"bad variable name {nm!r}")
        self.field = PrimeField(p)
        self.p = p
        self.names = tuple(names)
        self.n = len(names)
        self.shifts = tuple(BITS * (self.n - 1 - i) for i in range(self.n))
        self.index = {nm: i for i, nm in enumerate(self.names)}
        self.zero = MultiPoly(self, {})
        self.one = MultiPoly(self, {0: 1})

    def __repr__(self):
        return f"PolyRing({self.p}, {list(self.names)})"

    def __eq__(self, other):
        return isinstance(other, PolyRing) and (self.p, self.names) == (other.p, other.names)

    def __hash__(self):
        return hash((self.p, self.names))

    # ring protocol used by RingMatrix
    def add(self, a, b):
        return a + b

    def sub(self, a, b):
        return a - b

    def mul(self, a, b):
        return a * b

    def neg(self, a):
        return -a

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return not a.terms

    def from_int(self, c: int) -> MultiPoly:
        return self.const(c)

    def to_text(self, a) -> str:
        return a.to_text(with_modulus=False)

    # constructors
    def var_index(self, v) -> int:
        if isinstance(v, int):
            if not 0 <= v < self.n:
                raise ValueError(f"variable index {v} out of range")
            return v
        if isinstance(v, MultiPoly):
            v = v.as_variable()
        try:
            return self.index[v]
        except KeyError:
            raise ValueError(f"unknown variable {v!r}; registry is {list(self.names)}") from None

    def var(self, name) -> MultiPoly:
        i = self.var_index(name)
        return MultiPoly(self, {1 << self.shifts[i]: 1})

    def vars(self, *names) -> list[MultiPoly]:
        return [self.var(nm) for nm in names]

    def gens(self) -> list[MultiPoly]:
        return [self.var(i) for i in range(self.n)]

    def const(self, c: int) -> MultiPoly:
        c %= self.p
        return MultiPoly(self, {0: c} if c else {})

    def monomial_key(self, exps: Sequence[int]) -> int:
        if len(exps) != self.n:
            raise ValueError("exponent vector length does not match registry")
        key = 0
        for i, e in enumerate(exps):
            if e < 0 or e > MASK:
                raise ValueError(f"exponent {e} out of range")
            key |= e << self.shifts[i]
        return key

    def exponents(self, key: int) -> tuple[int, ...]:
        return tuple((key >> s) & MASK for s in self.shifts)

    def from_dict(self, d: dict) -> MultiPoly:
        """Build from ``{exponent tuple: coefficient}``."""
        terms: dict[int, int] = {}
        for exps, c in d.items():
            k = self.monomial_key(exps)
            terms[k] = (terms.get(k, 0) + c) % self.p
        return MultiPoly(self, {k: c for k, c in terms.items() if c})

    def extend(self, extra: Sequence[str]) -> PolyRing:
        return PolyRing(self.p, list(self.names) + [nm for nm in extra if nm not in self.index])

    def lift(self, f: MultiPoly) -> MultiPoly:
        """Map ``f`` from a ring whose registry is a subsequence of ours."""
        if f.ring == self:
            return f
        pos = [self.var_index(nm) for nm in f.ring.names]
        if f.ring.p != self.p:
            raise ValueError("moduli differ")
        out = {}
        for k, c in f.terms.items():
            nk = 0
            for i, e in enumerate(f.ring.exponents(k)):
                if e:
                    nk |= e << self.shifts[pos[i]]
            out[nk] = c
        return MultiPoly(self, out)

    def parse(self, text: str) -> MultiPoly:
        """Inverse of :meth:`MultiPoly.to_text` (the ``(mod p)`` suffix is optional)."""
        m = re.fullmatch(r"\s*(.*?)\s*(?:\(mod\s+(\d+)\))?\s*", text)
        body, mod = m.group(1), m.group(2)
        if mod is not None and int(mod) != self.p:
            raise ValueError(f"text is mod {mod}, ring is mod {self.p}")
        if not re.fullmatch(r"[A-Za-z_0-9\s\+\-\*\^\(\)]*", body):
            raise ValueError(f"unparseable polynomial text {text!r}")
        ns = {nm: self.var(nm) for nm in self.names}
        val = eval(body.replace("^", "**"), {"__builtins__": {}}, ns)
        return val if isinstance(val, MultiPoly) else self.const(val)


class MultiPoly:
    __slots__ = ("ring", "terms", "_hash")

    def __init__(self, ring: PolyRing, terms: dict):
        self.ring = ring
        self.terms = terms
        self._hash = None

    # basic structure
    def is_zero(self) -> bool:
        return not self.terms

    def __bool__(self):
        return bool(self.terms)

    def is_constant(self) -> bool:
        return not self.terms or (len(self.terms) == 1 and 0 in self.terms)

    def constant_term(self) -> int:
        return self.terms.get(0, 0)

    def degree(self, v=None) -> int:
        """Total degree, or degree in one variable; -1 for the zero polynomial."""
        if not self.terms:
            return -1
        if v is None:
            return max(sum(self.ring.exponents(k)) for k in self.terms)
        s = self.ring.shifts[self.ring.var_index(v)]
        return max((k >> s) & MASK for k in self.terms)

    def min_degree(self, v) -> int:
        s = self.ring.shifts[self.ring.var_index(v)]
        return min((k >> s) & MASK for k in self.terms)

    def variables(self) -> list[int]:
        present = 0
        for k in self.terms:
            present |= k
        return [i for i, s in enumerate(self.ring.shifts) if (present >> s) & MASK]

    def as_variable(self) -> str:
        if len(self.terms) == 1:
            (k, c), = self.terms.items()
            if c == 1:
                exps = self.ring.exponents(k)
                if sorted(exps)[-1] == 1 and sum(exps) == 1:
                    return self.ring.names[exps.index(1)]
        raise ValueError(f"{self} is not a single variable")

    def _coerce(self, other):
        if isinstance(other, MultiPoly):
            if other.ring is not self.ring and other.ring != self.ring:
                raise ValueError("polynomials from different rings")
            return other
        if isinstance(other, int):
            return self.ring.const(other)
        return NotImplemented

    # arithmetic
    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        p = self.ring.p
        t = dict(self.terms)
        for k, c in o.terms.items():
            v = (t.get(k, 0) + c) % p
            if v:
                t[k] = v
            else:
                t.pop(k, None)
        return MultiPoly(self.ring, t)

    __radd__ = __add__

    def __neg__(self):
        p = self.ring.p
        return MultiPoly(self.ring, {k: p - c for k, c in self.terms.items()})

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self + (-o)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o + (-self)

    def __mul__(self, other):
        if isinstance(other, int):
            return self.scale(other)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        a, b = self.terms, o.terms
        if len(a) < len(b):
            a, b = b, a
        if len(b) == 1:
            (kb, cb), = b.items()
            p = self.ring.p
            return MultiPoly(self.ring, {k + kb: c * cb % p for k, c in a.items()})
        out: dict[int, int] = {}
        get = out.get
        for kb, cb in b.items():
            for ka, ca in a.items():
                k = ka + kb
                out[k] = get(k, 0) + ca * cb
        p = self.ring.p
        return MultiPoly(self.ring, {k: c % p for k, c in out.items() if c % p})

    __rmul__ = __mul__

    def scale(self, c: int) -> MultiPoly:
        p = self.ring.p
        c %= p
        if c == 0:
            return self.ring.zero
        return MultiPoly(self.ring, {k: v * c % p for k, v in self.terms.items()})

    def __pow__(self, n: int):
        if n < 0:
            raise ValueError("negative power of a polynomial")
        result = self.ring.one
        base = self
        while n:
            if n & 1:
                result = result * base
            n >>= 1
            if n:
                base = base * base
        return result

    def __eq__(self, other):
        if isinstance(other, int):
            other = self.ring.const(other)
        if not isinstance(other, MultiPoly):
            return NotImplemented
        return self.ring == other.ring and self.terms == other.terms

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.ring.p, self.ring.names, frozenset(self.terms.items())))
        return self._hash

    # calculus and twists
    def derivative(self, v) -> MultiPoly:
        i = self.ring.var_index(v)
        s = self.ring.shifts[i]
        p = self.ring.p
        unit = 1 << s
        out = {}
        for k, c in self.terms.items():
            e = (k >> s) & MASK
            nc = c * e % p
            if nc:
                out[k - unit] = nc
        return MultiPoly(self.ring, out)

    def frobenius_twist(self) -> MultiPoly:
        """Coefficients to the p-th power (identity on F_p) and every variable v to v^p."""
        p = self.ring.p
        return MultiPoly(self.ring, {k * p: c for k, c in self.terms.items()})

    def power_substitute(self, e: int) -> MultiPoly:
        """Replace every variable v by v^e, coefficients unchanged."""
        if e < 1:
            raise ValueError("exponent must be positive")
        return MultiPoly(self.ring, {k * e: c for k, c in self.terms.items()})

    # evaluation and substitution
    def evaluate(self, point, field=None):
        """Evaluate at ``point`` (sequence aligned with the registry, or a name->value dict).

        Values are elements of ``field`` (default: the ring's prime field);
        coefficients are embedded with ``field.from_int``.
        """
        field = field or self.ring.field
        vals = self._point_list(point)
        if field == self.ring.field:
            p = self.ring.p
            acc = 0
            for k, c in self.terms.items():
                t = c
                for i, s in enumerate(self.ring.shifts):
                    e = (k >> s) & MASK
                    if e:
                        t = t * pow(vals[i], e, p) % p
                acc += t
            return acc % p
        acc = field.zero
        cache: dict = {}
        for k, c in self.terms.items():
            t = field.from_int(c)
            for i, s in enumerate(self.ring.shifts):
                e = (k >> s) & MASK
                if e:
                    key = (i, e)
                    pw = cache.get(key)
                    if pw is None:
                        pw = cache[key] = field.pow(vals[i], e)
                    t = field.mul(t, pw)
            acc = field.add(acc, t)
        return acc

    def _point_list(self, point):
        if isinstance(point, dict):
            out = [None] * self.ring.n
            for nm, v in point.items():
                out[self.ring.var_index(nm)] = v
            return out
        if len(point) != self.ring.n:
            raise ValueError("point length does not match registry")
        return list(point)

    def substitute(self, mapping: dict) -> MultiPoly:
        """Replace variables by polynomials (or ints) of the same ring."""
        subs = {}
        for v, val in mapping.items():
            i = self.ring.var_index(v)
            subs[i] = val if isinstance(val, MultiPoly) else self.ring.const(val)
        if not subs:
            return self
        powers: dict = {}

        def pw(i, e):
            key = (i, e)
            r = powers.get(key)
            if r is None:
                r = powers[key] = subs[i] ** e
            return r

        out = self.ring.zero
        keep_mask = 0
        for i, s in enumerate(self.ring.shifts):
            if i not in subs:
                keep_mask |= MASK << s
        groups: dict = {}
        for k, c in self.terms.items():
            sub_part = k & ~keep_mask
            groups.setdefault(sub_part, {})[k & keep_mask] = c
        for sub_part, rest in groups.items():
            factor = self.ring.one
            for i in subs:
                e = (sub_part >> self.ring.shifts[i]) & MASK
                if e:
                    factor = factor * pw(i, e)
            out = out + factor * MultiPoly(self.ring, rest)
        return out

    def coefficients_in(self, v) -> dict[int, MultiPoly]:
        """Split as a polynomial in ``v``: ``{exponent: coefficient polynomial}``."""
        s = self.ring.shifts[self.ring.var_index(v)]
        out: dict[int, dict] = {}
        for k, c in self.terms.items():
            e = (k >> s) & MASK
            out.setdefault(e, {})[k - (e << s)] = c
        return {e: MultiPoly(self.ring, t) for e, t in out.items()}

    def div_linear(self, lin: MultiPoly) -> MultiPoly | None:
        """Exact quotient by a linear form monic in its leading variable, or None."""
        lead = leading_variable(lin)
        s = self.ring.shifts[lead]
        rest = lin - MultiPoly(self.ring, {1 << s: 1})  # lin = v + rest
        root = -rest
        coeffs = self.coefficients_in(lead)
        if not coeffs:
            return self.ring.zero
        d = max(coeffs)
        # synthetic division by (v - root)
        q = {}
        carry = self.ring.zero
        for e in range(d, 0, -1):
            carry = coeffs.get(e, self.ring.zero) + carry
            q[e - 1] = carry
            carry = carry * root
        remainder = coeffs.get(0, self.ring.zero) + carry
        if remainder:
            return None
        out = self.ring.zero
        for e, cpoly in q.items():
            if cpoly:
                out = out + cpoly * MultiPoly(self.ring, {e << s: 1})
        return out

    # text
    def sorted_terms(self):
        """Terms in graded-lex descending order."""
        ex = self.ring.exponents
        return sorted(self.terms.items(), key=lambda kc: (sum(ex(kc[0])), kc[0]), reverse=True)

    def to_text(self, with_modulus: bool = True) -> str:
        parts = []
        for k, c in self.sorted_terms():
            mono = []
            for nm, e in zip(self.ring.names, self.ring.exponents(k)):
                if e == 1:
                    mono.append(nm)
                elif e > 1:
                    mono.append(f"{nm}^{e}")
            if not mono:
                parts.append(str(c))
            elif c == 1:
                parts.append("*".join(mono))
            else:
                parts.append(f"{c}*" + "*".join(mono))
        body = " + ".join(parts) if parts else "0"
        return f"{body} (mod {self.ring.p})" if with_modulus else body

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"MultiPoly({self.to_text()!r})"


def leading_variable(lin: MultiPoly) -> int:
    """Index of the lowest-index variable occurring in ``lin``."""
    vs = lin.variables()
    if not vs:
        raise ValueError("constant has no leading variable")
    return vs[0]


def is_linear(f: MultiPoly) -> bool:
    return f.degree() <= 1


def monic_linear(f: MultiPoly) -> tuple[int, MultiPoly]:
    """Write a nonconstant linear form as ``scalar * monic`` (monic in its leading variable)."""
    if f.degree() != 1:
        raise ValueError(f"{f} is not a linear form")
    i = leading_variable(f)
    c = f.terms[1 << f.ring.shifts[i]]
    return c, f.scale(f.ring.field.inv(c))


def elementary_symmetric(values: Iterable, k: int, ring) -> object:
    """e_k of ``values`` computed in ``ring`` (anything with add/mul/zero/one)."""
    e = [ring.one] + [ring.zero] * k
    for v in values:
        for j in range(k, 0, -1):
            e[j] = ring.add(e[j], ring.mul(e[j - 1], v))
    return e[k]
