"""Rational functions whose denominators are products of linear forms.

Every model handled here has its poles on a fixed hyperplane arrangement,
and that arrangement is stable under differentiation, so no multivariate gcd
is ever needed: the denominator is kept factored as ``{monic linear form:
exponent}`` and the numerator is an expanded :class:`MultiPoly`.
"""
from __future__ import annotations

from .poly import MultiPoly, PolyRing, monic_linear


class PoleError(ZeroDivisionError):
    """Evaluation or substitution landed on a pole."""


class RatFunc:
    __slots__ = ("ring", "num", "den")

    def __init__(self, ring: PolyRing, num: MultiPoly, den: dict | None = None):
        self.ring = ring
        self.num = num
        self.den = den or {}

    # construction helpers
    @classmethod
    def from_poly(cls, f: MultiPoly) -> RatFunc:
        return cls(f.ring, f, {})

    @classmethod
    def from_factors(cls, ring: PolyRing, scalar, factors: dict) -> RatFunc:
        """``scalar * prod f**e`` for linear (or constant) ``f``; negative ``e`` go below the line."""
        num = scalar if isinstance(scalar, MultiPoly) else ring.const(scalar)
        den: dict = {}
        for f, e in factors.items():
            if isinstance(f, str):
                f = ring.var(f)
            if e == 0:
                continue
            if f.is_constant():
                c = f.constant_term()
                if c == 0:
                    if e < 0:
                        raise PoleError("zero factor in a denominator")
                    return cls(ring, ring.zero, {})
                num = num.scale(pow(c, e, ring.p) if e > 0 else pow(ring.field.inv(c), -e, ring.p))
                continue
            if e > 0:
                num = num * f**e
            else:
                c, g = monic_linear(f)
                num = num.scale(pow(ring.field.inv(c), -e, ring.p))
                den[g] = den.get(g, 0) - e
        return cls(ring, num, den)

    @classmethod
    def const(cls, ring: PolyRing, c: int) -> RatFunc:
        return cls(ring, ring.const(c), {})

    def _coerce(self, other):
        if isinstance(other, RatFunc):
            return other
        if isinstance(other, MultiPoly):
            return RatFunc(other.ring, other, {})
        if isinstance(other, int):
            return RatFunc(self.ring, self.ring.const(other), {})
        return NotImplemented

    # predicates
    def is_zero(self) -> bool:
        return not self.num.terms

    def __bool__(self):
        return bool(self.num.terms)

    def is_polynomial(self) -> bool:
        return not self.den

    def __eq__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if self.den == o.den:
            return self.num == o.num
        return (self - o).is_zero()

    __hash__ = None

    # arithmetic
    def _lift_to(self, den: dict) -> MultiPoly:
        num = self.num
        for f, e in den.items():
            k = e - self.den.get(f, 0)
            if k:
                num = num * (f if k == 1 else f**k)
        return num

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not o.num.terms:
            return self
        if not self.num.terms:
            return o
        if self.den == o.den:
            return RatFunc(self.ring, self.num + o.num, self.den)
        den = dict(self.den)
        for f, e in o.den.items():
            if den.get(f, 0) < e:
                den[f] = e
        return RatFunc(self.ring, self._lift_to(den) + o._lift_to(den), den)

    __radd__ = __add__

    def __neg__(self):
        return RatFunc(self.ring, -self.num, self.den)

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
            return RatFunc(self.ring, self.num.scale(other), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        if not self.num.terms or not o.num.terms:
            return RatFunc(self.ring, self.ring.zero, {})
        if not o.den:
            den = self.den
        elif not self.den:
            den = o.den
        else:
            den = dict(self.den)
            for f, e in o.den.items():
                den[f] = den.get(f, 0) + e
        return RatFunc(self.ring, self.num * o.num, den)

    __rmul__ = __mul__

    def __pow__(self, n: int):
        if n < 0:
            return self.inv() ** (-n)
        num = self.num**n
        return RatFunc(self.ring, num, {f: e * n for f, e in self.den.items()})

    def inv(self) -> RatFunc:
        """Inverse, available when the numerator is a constant or a product of powers of one linear form."""
        r = self.normalize()
        num = r.num
        if not num.terms:
            raise ZeroDivisionError("inverse of zero rational function")
        if num.is_constant():
            scalar = self.ring.field.inv(num.constant_term())
            return RatFunc.from_factors(self.ring, scalar, dict(r.den))
        if num.degree() == 1:
            return RatFunc.from_factors(self.ring, 1, {**r.den, num: -1})
        raise ValueError(f"cannot invert {self}: numerator does not split into known linear factors")

    def __truediv__(self, other):
        if isinstance(other, int):
            return RatFunc(self.ring, self.num.scale(self.ring.field.inv(other)), self.den)
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return self * o.inv()

    def __rtruediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return o * self.inv()

    # calculus
    def derivative(self, v) -> RatFunc:
        i = self.ring.var_index(v)
        s = self.ring.shifts[i]
        touched = [(f, e, f.terms.get(1 << s, 0)) for f, e in self.den.items()]
        touched = [(f, e, c) for f, e, c in touched if c]
        dnum = self.num.derivative(i)
        if not touched:
            return RatFunc(self.ring, dnum, self.den)
        # (N / prod f^e)' = (N' * P - N * sum e c_f P/f) / (prod f^e * P), P = prod of touched f
        prod_all = self.ring.one
        for f, _, _ in touched:
            prod_all = prod_all * f
        num = dnum * prod_all
        for j, (f, e, c) in enumerate(touched):
            others = self.ring.one
            for k, (g, _, _) in enumerate(touched):
                if k != j:
                    others = others * g
            num = num - self.num * others.scale(e * c)
        den = dict(self.den)
        for f, _, _ in touched:
            den[f] += 1
        return RatFunc(self.ring, num, den)

    def frobenius_twist(self) -> RatFunc:
        """Twist: coefficients to the p-th power, variables v -> v^p.

        A linear form with F_p coefficients twists to its own p-th power, so
        the factored denominator just has its exponents multiplied by p.
        """
        p = self.ring.p
        return RatFunc(self.ring, self.num.frobenius_twist(), {f: e * p for f, e in self.den.items()})

    # simplification
    def normalize(self) -> RatFunc:
        """Cancel every denominator factor that exactly divides the numerator."""
        num = self.num
        if not num.terms:
            return RatFunc(self.ring, num, {})
        den = {}
        for f, e in self.den.items():
            while e:
                q = num.div_linear(f)
                if q is None:
                    break
                num = q
                e -= 1
            if e:
                den[f] = e
        return RatFunc(self.ring, num, den)

    def valuation(self, v) -> int:
        """Order of vanishing along the hyperplane ``v = 0`` (``v`` a variable)."""
        if not self.num.terms:
            raise ValueError("valuation of zero")
        var = self.ring.var(v)
        return self.num.min_degree(v) - self.den.get(var, 0)

    # evaluation and substitution
    def evaluate(self, point, field=None):
        field = field or self.ring.field
        d = field.one
        for f, e in self.den.items():
            fv = f.evaluate(point, field)
            if field.is_zero(fv):
                raise PoleError(f"pole of {self} at the requested point")
            d = field.mul(d, field.pow(fv, e))
        return field.mul(self.num.evaluate(point, field), field.inv(d))

    def substitute(self, mapping: dict) -> RatFunc:
        """Affine-linear substitution of variables (values: ints or degree <= 1 polynomials)."""
        ring = self.ring
        subs = {}
        for v, val in mapping.items():
            val = val if isinstance(val, MultiPoly) else ring.const(val)
            if val.degree() > 1:
                raise ValueError("only affine-linear substitutions keep denominators linear")
            subs[v] = val
        num = self.num.substitute(subs)
        factors = {}
        for f, e in self.den.items():
            g = f.substitute(subs)
            factors[g] = factors.get(g, 0) - e
        try:
            return RatFunc.from_factors(ring, num, factors)
        except PoleError:
            raise PoleError(f"substitution {mapping} hits a pole of {self}") from None

    def shift(self, v, amount) -> RatFunc:
        x = self.ring.var(v)
        return self.substitute({v: x + amount})

    # text
    def to_text(self, with_modulus: bool = True) -> str:
        num = self.num.to_text(with_modulus=False)
        if self.den:
            fs = []
            for f, e in sorted(self.den.items(), key=lambda fe: fe[0].to_text(False)):
                ft = f.to_text(with_modulus=False)
                if len(f.terms) > 1:
                    ft = f"({ft})"
                fs.append(ft if e == 1 else f"{ft}^{e}")
            body = f"({num})/({'*'.join(fs)})"
        else:
            body = num
        return f"{body} (mod {self.ring.p})" if with_modulus else body

    def __str__(self):
        return self.to_text()

    def __repr__(self):
        return f"RatFunc({self.to_text()!r})"


class RatFuncField:
    """Ring-protocol wrapper so RingMatrix can hold RatFunc entries."""

    def __init__(self, ring: PolyRing):
        self.ring = ring
        self.p = ring.p
        self.zero = RatFunc(ring, ring.zero, {})
        self.one = RatFunc(ring, ring.one, {})

    def __eq__(self, other):
        return isinstance(other, RatFuncField) and other.ring == self.ring

    def __hash__(self):
        return hash(("RF", self.ring))

    def __repr__(self):
        return f"RatFuncField({self.ring!r})"

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
        return a.is_zero()

    def from_int(self, c: int) -> RatFunc:
        return RatFunc.const(self.ring, c)

    def to_text(self, a) -> str:
        return a.normalize().to_text(with_modulus=False)

    def var(self, name) -> RatFunc:
        return RatFunc.from_poly(self.ring.var(name))

    def coerce(self, a) -> RatFunc:
        if isinstance(a, RatFunc):
            return a
        if isinstance(a, MultiPoly):
            return RatFunc.from_poly(a)
        return self.from_int(a)
