"""Finite field arithmetic.

Two field types share one duck-typed interface (``zero``, ``one``, ``add``,
``sub``, ``mul``, ``neg``, ``inv``, ``pow``, ``eq``, ``is_zero``,
``from_int``, ``frobenius``, ``random``):

* :class:`PrimeField` -- residues mod a word-size prime, stored as ints.
* :class:`ExtField` -- GF(p^k) in Zech-logarithm form.  It is only used as a
  sampling domain: random points drawn from a large field keep the
  Schwartz-Zippel failure bound small even when p itself is tiny.

:class:`FieldElement` wraps a residue together with its field for
operator-style use at the API boundary; polynomial internals work on plain
ints for speed.
"""
from __future__ import annotations

import functools
import math
import random


def is_prime(n: int) -> bool:
    if n < 2:
        return False
    if n % 2 == 0:
        return n == 2
    r = math.isqrt(n)
    f = 3
    while f <= r:
        if n % f == 0:
            return False
        f += 2
    return True


def prime_factors(n: int) -> list[int]:
    out = []
    f = 2
    while f * f <= n:
        if n % f == 0:
            out.append(f)
            while n % f == 0:
                n //= f
        f += 1
    if n > 1:
        out.append(n)
    return out


class PrimeField:
    """The prime field F_p with elements represented as ints in [0, p)."""

    def __init__(self, p: int):
        if not is_prime(p):
            raise ValueError(f"modulus {p} is not prime")
        if p >= 2**31:
            raise ValueError("only word-size moduli (< 2^31) are supported")
        self.p = p
        self.characteristic = p
        self.order = p
        self.degree = 1
        self.zero = 0
        self.one = 1

    def __repr__(self):
        return f"PrimeField({self.p})"

    def __eq__(self, other):
        return isinstance(other, PrimeField) and other.p == self.p

    def __hash__(self):
        return hash(("F", self.p))

    def __call__(self, v: int) -> FieldElement:
        return FieldElement(v % self.p, self)

    def add(self, a, b):
        return (a + b) % self.p

    def sub(self, a, b):
        return (a - b) % self.p

    def mul(self, a, b):
        return (a * b) % self.p

    def neg(self, a):
        return (-a) % self.p

    def inv(self, a):
        a %= self.p
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in F_{self.p}")
        return pow(a, self.p - 2, self.p)

    def pow(self, a, n: int):
        if n < 0:
            return pow(self.inv(a), -n, self.p)
        return pow(a, n, self.p)

    def eq(self, a, b):
        return (a - b) % self.p == 0

    def is_zero(self, a):
        return a % self.p == 0

    def from_int(self, n: int):
        return n % self.p

    def frobenius(self, a):
        return a % self.p

    def random(self, rng: random.Random, nonzero: bool = False):
        return rng.randrange(1 if nonzero else 0, self.p)

    def to_text(self, a) -> str:
        return str(a % self.p)

    def elements(self):
        return range(self.p)


class FieldElement:
    """A residue bound to its :class:`PrimeField`."""

    __slots__ = ("value", "field")

    def __init__(self, value: int, field: PrimeField):
        self.value = value % field.p
        self.field = field

    def _coerce(self, other):
        if isinstance(other, FieldElement):
            if other.field != self.field:
                raise ValueError("elements of different fields")
            return other.value
        if isinstance(other, int):
            return other
        return NotImplemented

    def __add__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value + o, self.field)

    __radd__ = __add__

    def __sub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value - o, self.field)

    def __rsub__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(o - self.value, self.field)

    def __mul__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * o, self.field)

    __rmul__ = __mul__

    def __neg__(self):
        return FieldElement(-self.value, self.field)

    def inv(self) -> FieldElement:
        return FieldElement(self.field.inv(self.value), self.field)

    def __truediv__(self, other):
        o = self._coerce(other)
        if o is NotImplemented:
            return o
        return FieldElement(self.value * self.field.inv(o), self.field)

    def __pow__(self, n: int):
        return FieldElement(self.field.pow(self.value, n), self.field)

    def __eq__(self, other):
        if isinstance(other, FieldElement):
            return self.field == other.field and self.value == other.value
        if isinstance(other, int):
            return (self.value - other) % self.field.p == 0
        return NotImplemented

    def __hash__(self):
        return hash((self.value, self.field.p))

    def __int__(self):
        return self.value

    def __repr__(self):
        return f"{self.value} (mod {self.field.p})"


def find_order_p_element(ell: int, p: int) -> int:
    """Return an element of F_ell of exact multiplicative order ``p``."""
    if not is_prime(ell):
        raise ValueError(f"{ell} is not prime")
    if p < 2:
        raise ValueError("order must be at least 2")
    if (ell - 1) % p != 0:
        raise ValueError(f"{p} does not divide {ell} - 1 = {ell - 1}; F_{ell} has no element of order {p}")
    cofactor = (ell - 1) // p
    for g in range(2, ell):
        c = pow(g, cofactor, ell)
        if c != 1 and all(pow(c, p // r, ell) != 1 for r in prime_factors(p)):
            return c
    raise AssertionError("unreachable: cyclic group has an element of every order dividing ell-1")


def multiplicative_order(a: int, ell: int) -> int:
    a %= ell
    if a == 0:
        raise ValueError("zero has no multiplicative order")
    x, k = a, 1
    while x != 1:
        x = x * a % ell
        k += 1
    return k


class ExtField:
    """GF(p^k) with elements encoded by Zech logarithms.

    Encoding: 0 is the zero element and ``i + 1`` is ``g**i`` for the
    primitive root ``g`` (a root of the defining polynomial).  Multiplication
    is addition of logarithms; addition goes through the Zech table
    ``zech[n] = log(1 + g**n)``.
    """

    def __init__(self, p: int, k: int):
        if not is_prime(p):
            raise ValueError(f"{p} is not prime")
        if k < 1:
            raise ValueError("extension degree must be positive")
        self.p = p
        self.k = k
        self.characteristic = p
        self.order = q = p**k
        self.degree = k
        self.zero = 0
        self.one = 1
        self._m = q - 1
        self.modulus_poly, exp = _primitive_table(p, k)
        # exp[i] = base-p digit code of g^i; log maps code -> i.
        log = [0] * q
        for i, code in enumerate(exp):
            log[code] = i
        zech = [0] * self._m
        for n, code in enumerate(exp):
            c0 = code % p
            one_plus = code - c0 + (c0 + 1) % p
            zech[n] = 0 if one_plus == 0 else log[one_plus] + 1
        self._exp = exp
        self._log = log
        self._zech = zech
        self._minus_one = 1 if p == 2 else self._m // 2 + 1
        self._prime_embed = [0] + [log[c] + 1 for c in range(1, p)]

    def __repr__(self):
        return f"ExtField({self.p}, {self.k})"

    def __eq__(self, other):
        return isinstance(other, ExtField) and (other.p, other.k) == (self.p, self.k)

    def __hash__(self):
        return hash(("GF", self.p, self.k))

    def mul(self, a, b):
        if a == 0 or b == 0:
            return 0
        return (a + b - 2) % self._m + 1

    def add(self, a, b):
        if a == 0:
            return b
        if b == 0:
            return a
        z = self._zech[(b - a) % self._m]
        if z == 0:
            return 0
        return (a + z - 2) % self._m + 1

    def neg(self, a):
        return self.mul(a, self._minus_one)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def inv(self, a):
        if a == 0:
            raise ZeroDivisionError(f"inverse of zero in GF({self.p}^{self.k})")
        return (1 - a) % self._m + 1

    def pow(self, a, n: int):
        if a == 0:
            if n <= 0:
                raise ZeroDivisionError("zero to a non-positive power")
            return 0
        return ((a - 1) * n) % self._m + 1

    def eq(self, a, b):
        return a == b

    def is_zero(self, a):
        return a == 0

    def from_int(self, n: int):
        return self._prime_embed[n % self.p]

    def frobenius(self, a):
        return self.pow(a, self.p)

    def in_prime_field(self, a) -> bool:
        return a == 0 or self._exp[a - 1] < self.p

    def random(self, rng: random.Random, nonzero: bool = False):
        return rng.randrange(1 if nonzero else 0, self.order)

    def code(self, a) -> int:
        """Base-p digit code of ``a`` (coefficients in the polynomial basis)."""
        return 0 if a == 0 else self._exp[a - 1]

    def from_code(self, code: int):
        return 0 if code == 0 else self._log[code] + 1

    def to_text(self, a) -> str:
        code = self.code(a)
        if code == 0:
            return "0"
        parts = []
        for i in reversed(range(self.k)):
            d = (code // self.p**i) % self.p
            if d == 0:
                continue
            mono = "" if i == 0 else ("g" if i == 1 else f"g^{i}")
            if not mono:
                parts.append(str(d))
            elif d == 1:
                parts.append(mono)
            else:
                parts.append(f"{d}*{mono}")
        return " + ".join(parts)


@functools.lru_cache(maxsize=None)
def _primitive_table(p: int, k: int):
    """Find a primitive polynomial of degree k over F_p; return (coeffs, exp table)."""
    q = p**k
    m = q - 1
    if k == 1:
        g = next(g for g in range(1, p) if multiplicative_order(g, p) == m) if p > 2 else 1
        exp, x = [], 1
        for _ in range(m):
            exp.append(x)
            x = x * g % p
        return (1, (-g) % p), exp
    factors = prime_factors(m)
    # Monic f = x^k + c_{k-1} x^{k-1} + ... + c_0, scanned in a fixed order.
    for tail in range(1, q):
        low = [(tail // p**i) % p for i in range(k)]
        if low[0] == 0:
            continue
        if all(_xpow_code(p, k, low, m // r) != 1 for r in factors) and _xpow_code(p, k, low, m) == 1:
            exp, code = [], 1
            for _ in range(m):
                exp.append(code)
                code = _times_x(p, k, low, code)
            if len(set(exp)) != m:
                continue
            return (1, *reversed(low)), exp
    raise AssertionError(f"no primitive polynomial found for GF({p}^{k})")


def _times_x(p, k, low, code):
    top = code // p ** (k - 1)
    shifted = (code % p ** (k - 1)) * p
    if top == 0:
        return shifted
    out = 0
    for i in range(k):
        d = (shifted // p**i) % p
        d = (d - top * low[i]) % p
        out += d * p**i
    return out


def _xpow_code(p, k, low, n):
    # Square-and-multiply on codes via polynomial multiplication mod f.
    def mulmod(a, b):
        da = [(a // p**i) % p for i in range(k)]
        db = [(b // p**i) % p for i in range(k)]
        prod = [0] * (2 * k - 1)
        for i, x in enumerate(da):
            if x:
                for j, y in enumerate(db):
                    prod[i + j] += x * y
        for d in range(2 * k - 2, k - 1, -1):
            c = prod[d] % p
            if c:
                for i in range(k):
                    prod[d - k + i] -= c * low[i]
            prod[d] = 0
        return sum((prod[i] % p) * p**i for i in range(k))

    result, base = 1, p  # the code of x is p (digit 1 at position 1)
    if k == 1:
        base = (-low[0]) % p
    while n:
        if n & 1:
            result = mulmod(result, base)
        base = mulmod(base, base)
        n >>= 1
    return result


def sampling_field(p: int, min_order: int = 2**16) -> ExtField:
    """Smallest GF(p^k) with at least ``min_order`` elements (cached)."""
    k = 1
    while p**k < min_order:
        k += 1
    return _cached_ext(p, k)


@functools.lru_cache(maxsize=None)
def _cached_ext(p: int, k: int) -> ExtField:
    return ExtField(p, k)
