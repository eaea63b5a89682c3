import random

import pytest
from hypothesis import given
from hypothesis import strategies as st

from oracles import int_matmul, leibniz_charpoly, leibniz_det
from pcurv.acceptance import frobenius_pencil_identity, random_commuting_pencil
from pcurv.field import PrimeField, sampling_field
from pcurv.matrix import (CharPoly, NonCommutingError, RingMatrix, Strategy, char_poly, is_nilpotent,
                          isospectral, matrix_frobenius_twist, pencil_isospectral, rank, sample_count,
                          trace_wedge)
from pcurv.poly import PolyRing
from pcurv.ratfunc import RatFunc, RatFuncField

F7 = PrimeField(7)


def int_matrices(p=7, max_n=4):
    return st.integers(1, max_n).flatmap(
        lambda n: st.lists(st.lists(st.integers(0, p - 1), min_size=n, max_size=n), min_size=n, max_size=n))


def _invertible(rng, n, F):
    while True:
        g = RingMatrix(F, [[rng.randrange(F.p) for _ in range(n)] for _ in range(n)])
        if rank(g) == n:
            return g


@given(int_matrices())
def test_berkowitz_matches_leibniz(rows):
    M = RingMatrix(F7, rows)
    assert char_poly(M).coeffs == leibniz_charpoly(rows, 7)


@given(int_matrices())
def test_trace_wedge_extremes(rows):
    M = RingMatrix(F7, rows)
    assert trace_wedge(M, 0) == 1
    assert trace_wedge(M, 1) == M.trace()
    assert trace_wedge(M, M.n) == leibniz_det(rows, 7)
    with pytest.raises(ValueError):
        trace_wedge(M, M.n + 1)


@given(int_matrices(), st.integers(0, 2**32))
def test_char_poly_conjugation_invariant(rows, seed):
    M = RingMatrix(F7, rows)
    g = _invertible(random.Random(seed), M.n, F7)
    assert char_poly(g @ M @ g.inverse()) == char_poly(M)


@given(int_matrices(), int_matrices(), int_matrices())
def test_matrix_product_associative(a, b, c):
    n = min(len(a), len(b), len(c))
    A, B, C = (RingMatrix(F7, [r[:n] for r in m[:n]]) for m in (a, b, c))
    assert (A @ B) @ C == A @ (B @ C)
    assert (A @ B).rows == int_matmul(A.rows, B.rows, 7)


def test_char_poly_examples():
    assert char_poly(RingMatrix.from_ints(F7, [[0, 1], [1, 0]])).coeffs == [6, 0, 1]
    R = PolyRing(7, ["c", "y", "x"])
    rf = RatFuncField(R)
    c, y, x = R.gens()
    cx = RatFunc.from_factors(R, c, {x: -1})
    G = RingMatrix(rf, [[rf.coerce(y), cx], [cx, rf.coerce(-y)]])
    cp = char_poly(G)
    assert cp.coeffs[0] == -(rf.coerce(y * y) + cx * cx)
    assert cp.coeffs[1] == 0 and cp.coeffs[2] == 1


def test_nilpotence_examples():
    rng = random.Random(3)
    for n in range(1, 6):
        U = RingMatrix(F7, [[rng.randrange(7) if j > i else 0 for j in range(n)] for i in range(n)])
        assert is_nilpotent(U)
        g = _invertible(rng, n, F7)
        N = g @ U @ g.inverse()
        assert is_nilpotent(N)
        assert (N ** n).is_zero()
    assert not is_nilpotent(RingMatrix.identity(F7, 3))


def test_isospectral_examples():
    M = RingMatrix.from_ints(F7, [[1, 2], [3, 4]])
    assert isospectral(M, M.transpose())
    assert isospectral(RingMatrix.diag(F7, [1, 2]), RingMatrix.diag(F7, [2, 1]))
    assert not isospectral(RingMatrix.diag(F7, [1, 1]), RingMatrix.diag(F7, [1, 2]))
    with pytest.raises(ValueError):
        isospectral(M, RingMatrix.identity(F7, 3))


def test_frobenius_twist_of_matrices():
    R = PolyRing(5, ["a", "b"])
    a, b = R.gens()
    D = RingMatrix.diag(R, [a, b])
    assert matrix_frobenius_twist(D) == RingMatrix.diag(R, [a**5, b**5])
    assert matrix_frobenius_twist(RingMatrix.identity(R, 2)) == RingMatrix.identity(R, 2)
    F5 = PrimeField(5)
    C = RingMatrix.from_ints(F5, [[1, 2], [3, 4]])
    assert matrix_frobenius_twist(C) == C


@given(st.integers(0, 2**32))
def test_twist_raises_eigenvalues_to_pth_power(seed):
    # companion-style check: char_poly(M^(1)) = twisted coefficients of char_poly(M)
    rng = random.Random(seed)
    R = PolyRing(3, ["t"])
    t = R.var("t")
    n = rng.randint(1, 3)
    M = RingMatrix(R, [[t.scale(rng.randrange(3)) + rng.randrange(3) for _ in range(n)] for _ in range(n)])
    lhs = char_poly(matrix_frobenius_twist(M))
    rhs = [c.frobenius_twist() for c in char_poly(M).coeffs]
    assert lhs.coeffs == rhs


def test_pencil_checks_commutativity():
    A = RingMatrix.from_ints(F7, [[0, 1], [0, 0]])
    B = RingMatrix.from_ints(F7, [[0, 0], [1, 0]])
    with pytest.raises(NonCommutingError):
        pencil_isospectral([A, B], [A, B])


@given(st.integers(0, 2**32))
def test_pencil_conjugation(seed):
    rng = random.Random(seed)
    ring, L = random_commuting_pencil(5, rng)
    F = PrimeField(5)
    y = rng.randrange(5)
    Lf = [m.map(lambda a: a.evaluate([y]), F) for m in L]
    g = _invertible(rng, Lf[0].n, F)
    gi = g.inverse()
    M = [g @ m @ gi for m in Lf]
    assert pencil_isospectral(Lf, M, Strategy.SYMBOLIC)


@given(st.integers(0, 2**32))
def test_symbolic_and_sampled_strategies_agree(seed):
    rng = random.Random(seed)
    F = sampling_field(5)
    ring, L = random_commuting_pencil(5, rng)
    y = F.random(rng)
    Lf = [m.map(lambda a: a.evaluate([y], F), F) for m in L]
    _, L2 = random_commuting_pencil(5, rng)
    other = [m.map(lambda a: a.evaluate([y], F), F) for m in L2]
    if other[0].n != Lf[0].n or len(other) != len(Lf):
        other = [m.scale(F.from_int(2)) for m in Lf]
    for M in (Lf, other):
        s = pencil_isospectral(Lf, M, Strategy.SYMBOLIC)
        r = pencil_isospectral(Lf, M, Strategy.SAMPLED, rng=random.Random(seed))
        assert s == r


@given(st.integers(0, 2**32), st.sampled_from([3, 5]))
def test_frobenius_pencil_property(seed, p):
    ring, L = random_commuting_pencil(p, random.Random(seed))
    assert frobenius_pencil_identity(ring, L)


def test_frobenius_pencil_detects_wrong_twist():
    R = PolyRing(3, ["y"])
    y = R.var("y")
    L = [RingMatrix(R, [[y, R.zero], [R.zero, y + 1]])]
    names = ["u1"]
    ext = R.extend(names)
    u = ext.var("u1")
    Ls = [m.map(ext.lift, ext) for m in L]
    # untwisted right-hand side must fail
    assert char_poly((Ls[0].scale(u)) ** 3) != char_poly(Ls[0].scale(u**3))
    assert frobenius_pencil_identity(R, L)


def test_sample_count_bound():
    assert sample_count(5**7, 4) == 3  # log2(78125/4) ~ 14.25
    assert sample_count(2**16, 8) == 3
    with pytest.raises(ValueError):
        sample_count(3, 4)


def test_rank_and_inverse():
    M = RingMatrix.from_ints(F7, [[1, 2, 3], [2, 4, 6], [0, 1, 1]])
    assert rank(M) == 2
    G = RingMatrix.from_ints(F7, [[2, 1], [1, 1]])
    assert G @ G.inverse() == RingMatrix.identity(F7, 2)


def test_charpoly_text():
    cp = CharPoly(F7, [6, 0, 1])
    assert cp.to_text() == ["6", "0", "1"]
    assert cp.trace_wedge(2) == 6
