"""Independent reference implementations used only by the tests.

Nothing here imports the package's algebra: each oracle works on plain
Python ints, lists and dicts so that agreement is meaningful.
"""
from __future__ import annotations

import itertools


# GF(p^k) as digit vectors modulo a monic polynomial (coefficients high first)

def digits(code: int, p: int, k: int) -> list[int]:
    return [(code // p**i) % p for i in range(k)]


def undigits(d, p: int) -> int:
    return sum((c % p) * p**i for i, c in enumerate(d))


def ext_add(a: int, b: int, p: int, k: int) -> int:
    return undigits([x + y for x, y in zip(digits(a, p, k), digits(b, p, k))], p)


def ext_mul(a: int, b: int, p: int, k: int, modulus_high_first) -> int:
    low = list(reversed(modulus_high_first[1:]))  # c_0 .. c_{k-1}
    prod = [0] * (2 * k - 1)
    for i, x in enumerate(digits(a, p, k)):
        for j, y in enumerate(digits(b, p, k)):
            prod[i + j] += x * y
    for d in range(2 * k - 2, k - 1, -1):
        c = prod[d] % p
        for i in range(k):
            prod[d - k + i] -= c * low[i]
        prod[d] = 0
    return undigits(prod[:k], p)


# determinants by permutation expansion

def _perm_sign(perm) -> int:
    sign, seen = 1, set()
    for i in range(len(perm)):
        if i in seen:
            continue
        j, length = i, 0
        while j not in seen:
            seen.add(j)
            j = perm[j]
            length += 1
        if length % 2 == 0:
            sign = -sign
    return sign


def _upoly_mul(a, b, p):
    out = [0] * (len(a) + len(b) - 1)
    for i, x in enumerate(a):
        for j, y in enumerate(b):
            out[i + j] = (out[i + j] + x * y) % p
    return out


def leibniz_charpoly(M, p: int) -> list[int]:
    """det(Lambda I - M) over F_p, low degree first, by summing over permutations."""
    n = len(M)
    total = [0] * (n + 1)
    for perm in itertools.permutations(range(n)):
        term = [_perm_sign(perm) % p]
        for i, j in enumerate(perm):
            entry = [(-M[i][j]) % p, 1] if i == j else [(-M[i][j]) % p]
            term = _upoly_mul(term, entry, p)
        for d, c in enumerate(term):
            total[d] = (total[d] + c) % p
    return total


def leibniz_det(M, p: int) -> int:
    n = len(M)
    acc = 0
    for perm in itertools.permutations(range(n)):
        t = _perm_sign(perm)
        for i, j in enumerate(perm):
            t *= M[i][j]
        acc += t
    return acc % p


def int_matmul(A, B, p):
    n = len(A)
    return [[sum(A[i][k] * B[k][j] for k in range(n)) % p for j in range(n)] for i in range(n)]


# scalar connections on Laurent polynomials in x with coefficients in F_p[s]
# a Laurent element is {(x_exp, s_exp): coeff}

def laurent_mul(a: dict, b: dict, p: int) -> dict:
    out: dict = {}
    for (i, j), c in a.items():
        for (k, l), d in b.items():
            key = (i + k, j + l)
            out[key] = (out.get(key, 0) + c * d) % p
    return {k: v for k, v in out.items() if v}


def laurent_dx(a: dict, p: int) -> dict:
    out = {}
    for (i, j), c in a.items():
        v = (i * c) % p
        if v:
            out[(i - 1, j)] = v
    return out


def laurent_sub(a: dict, b: dict, p: int) -> dict:
    out = dict(a)
    for k, v in b.items():
        out[k] = (out.get(k, 0) - v) % p
    return {k: v for k, v in out.items() if v}


def scalar_connection_power(b: dict, v: dict, p: int, times: int) -> dict:
    """Apply v -> v' - b v ``times`` times."""
    for _ in range(times):
        v = laurent_sub(laurent_dx(v, p), laurent_mul(b, v, p), p)
    return v
