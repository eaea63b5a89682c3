import random

import pytest
from hypothesis import given, settings
from hypothesis import strategies as st

from pcurv import zoo
from pcurv.connection import trivializable_at_zero_test
from pcurv.field import PrimeField
from pcurv.matrix import RingMatrix, char_poly, is_nilpotent
from pcurv.ratfunc import PoleError, RatFunc, RatFuncField


def _cp_text(M):
    return [M.ring.to_text(a) for a in char_poly(M).coeffs]


@pytest.mark.parametrize("p", [3, 5, 7])
@pytest.mark.parametrize("m", [1, 2, 3, 4])
def test_sl2_relations(p, m):
    assert zoo.Sl2Data(m, p).check_relations()


def test_sl2_rejects_p2():
    with pytest.raises(zoo.ConfigError):
        zoo.Sl2Data(1, 2)


@pytest.mark.parametrize("reps", [(1, 1), (1, 2), (2, 2)])
def test_omega_commutes_with_diagonal_action(reps):
    p = 7
    ts = zoo.TensorSl2(reps, p)
    F = PrimeField(p)
    om = RingMatrix.from_ints(F, ts.omega(0, 1))
    for op in ("e", "f", "h"):
        D = RingMatrix.from_ints(F, ts.diagonal(op))
        assert om.commutes_with(D)


def test_kz_is_flat():
    assert zoo.kz_pencil(5, (1, 1, 1)).flatness_check()


def test_kz_symbolic_isospectral():
    conn = zoo.kz_pencil(5, (1, 1))
    for C, T in zip([conn.p_curvature(i) for i in range(2)], zoo.kz_target(conn)):
        assert char_poly(C) == char_poly(T)


def test_kz_target_mutation_detected():
    conn = zoo.kz_pencil(5, (1, 1))
    T = zoo.kz_target(conn)[0]
    bad = T.scale(conn.rf.from_int(2))
    assert char_poly(conn.p_curvature(0)) != char_poly(bad)


def test_kz_rejects_p2():
    with pytest.raises(zoo.ConfigError):
        zoo.kz_pencil(2)


def test_irregular_kz_hbar_zero_is_constant():
    conn = zoo.irregular_kz(5)
    flat = conn.specialize({"hbar": 0})
    target = zoo.irregular_kz_target(conn)
    for i in range(2):
        expected = target[i].map(lambda a: a.substitute({"hbar": 0}).normalize())
        assert flat.p_curvature(i) == expected


def test_irregular_kz_eta_zero_reduces_to_kz():
    irr = zoo.irregular_kz(5).specialize({"eta": 0})
    kz = zoo.kz_pencil(5)
    for i in range(2):
        assert _cp_text(irr.p_curvature(i)) == _cp_text(kz.p_curvature(i))


def test_irregular_casimir_isospectral():
    conn = zoo.irregular_casimir_sl2(5, (1,))
    assert char_poly(conn.p_curvature(0)) == char_poly(zoo.irregular_casimir_target(conn)[0])


@pytest.mark.parametrize("sign", [1, -1])
@pytest.mark.parametrize("p", [3, 5, 7])
def test_dunkl_isospectral(p, sign):
    conn = zoo.dunkl_irregular_a1(p, sign)
    assert char_poly(conn.p_curvature(0)) == char_poly(zoo.dunkl_a1_target(conn, sign)[0])


@pytest.mark.parametrize("sign", [1, -1])
def test_dunkl_c_zero_is_diagonal_power(sign):
    p = 5
    conn = zoo.dunkl_irregular_a1(p, sign)
    lam = conn.ring.var("lam")
    rf = conn.rf
    C = conn.specialize({"c": 0}).p_curvature(0)
    expected = RingMatrix(rf, [[rf.coerce(-(lam**p)), rf.zero], [rf.zero, rf.coerce(lam**p)]])
    assert C == expected


@pytest.mark.parametrize("sign", [1, -1])
@given(c=st.integers(0, 4))
def test_dunkl_integral_c_nilpotent(sign, c):
    conn = zoo.dunkl_irregular_a1(5, sign)
    assert is_nilpotent(conn.specialize({"c": c, "lam": 0}).p_curvature(0))


@pytest.mark.parametrize("p", [5, 7])
def test_gaudin_commute(p):
    _, _, mats, _, _ = zoo.gaudin_operators(p, 3)
    for a in range(3):
        for b in range(a + 1, 3):
            assert mats[a].commutes_with(mats[b])


def test_gaudin_a1_char_poly():
    G = zoo.gaudin_a1(7)
    ring = G.ring.ring
    c, y, x = ring.gens()
    rf = G.ring
    expected = -(rf.coerce(y * y) + RatFunc.from_factors(ring, c * c, {x: -2}))
    cp = char_poly(G).coeffs
    assert cp[0] == expected and cp[1] == rf.zero


def test_gaudin_prime_restrictions():
    with pytest.raises(zoo.ConfigError):
        zoo.gaudin_operators(3, 3)
    with pytest.raises(zoo.ConfigError):
        zoo.ReflectionGroupData(4)


@pytest.mark.parametrize("n", [2, 3])
def test_reflection_group_axioms(n):
    assert zoo.ReflectionGroupData(n).check_axioms()


def test_cm_lax_n2_determinant():
    from pcurv.poly import PolyRing
    R = PolyRing(7, ["c", "m1", "m2", "x1", "x2"])
    rf = RatFuncField(R)
    c, m1, m2, x1, x2 = R.gens()
    L = zoo.cm_lax(rf, [m1, m2], [x1, x2], c)
    expected = rf.coerce(m1 * m2) + RatFunc.from_factors(R, c * c, {x1 - x2: -2})
    assert char_poly(L).trace_wedge(2) == expected


def test_cm_hamiltonians_n3():
    from pcurv.poly import PolyRing
    base = PolyRing(7, ["c", "x1", "x2", "x3"])
    c, x1, x2, x3 = base.gens()
    ham = zoo.cm_hamiltonians(base, [x1, x2, x3], c)
    R = ham.ring
    mu = [R.var(f"mu{k}") for k in (1, 2, 3)]
    xs = [R.lift(x) for x in (x1, x2, x3)]
    cc = R.lift(c)
    pairs = [(0, 1), (0, 2), (1, 2)]
    H2 = RatFunc.from_poly(mu[0] * mu[1] + mu[0] * mu[2] + mu[1] * mu[2])
    for i, j in pairs:
        H2 = H2 + RatFunc.from_factors(R, cc * cc, {xs[i] - xs[j]: -2})
    assert ham.H[2] == H2.normalize()
    H3 = RatFunc.from_poly(mu[0] * mu[1] * mu[2])
    for (i, j), k in zip(pairs, (2, 1, 0)):
        H3 = H3 + RatFunc.from_factors(R, cc * cc * mu[k], {xs[i] - xs[j]: -2})
    assert ham.H[3] == H3.normalize()


def test_cm_identity_n2_symbolic():
    assert all(D.is_zero() for D in zoo.cm_operator_identity(7, 2))


def test_cm_identity_n3_sampled_nilpotent():
    p = 7
    ring = zoo.gaudin_operators(p, 3)[0]
    fld = PrimeField(p)
    rng = random.Random(3)
    done = 0
    while done < 3:
        pt = {nm: fld.random(rng) for nm in ring.names}
        try:
            defects = zoo.cm_operator_identity(p, 3, pt, fld)
        except PoleError:
            continue
        assert all(is_nilpotent(D) for D in defects)
        done += 1


@given(st.integers(0, 6))
def test_nil_hecke_relations(y):
    from pcurv.poly import PolyRing
    R = PolyRing(7, ["lam"])
    mod = zoo.NilHeckeA1Module(RatFuncField(R), R.var("lam"))
    assert mod.check_relations(y)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_toda_isospectral(p):
    conn = zoo.toda_rank1(p)
    assert char_poly(conn.p_curvature(0)) == char_poly(zoo.toda_target(conn)[0])


@pytest.mark.parametrize("p,ell", [(3, 7), (5, 11)])
def test_qkz_isospectral(p, ell):
    conn = zoo.qkz_model(ell, p)
    assert char_poly(conn.p_curvature(0)) == char_poly(zoo.qkz_target(conn))


def test_qkz_q_one_is_pure_twist():
    conn = zoo.qkz_model(7, 3)
    C = conn.p_curvature(0).map(lambda a: a.substitute({"q": 1}).normalize())
    t = conn.ring.var("t")
    rf = conn.rf
    assert C == RingMatrix(rf, [[rf.coerce(t**3), rf.zero], [rf.zero, RatFunc.from_factors(conn.ring, 1, {t: -3})]])


def test_qkz_target_mutation_detected():
    conn = zoo.qkz_model(7, 3)
    T = zoo.qkz_target(conn)
    # drop the twist
    bad = T @ conn.model.twist(conn.ring.var("t"))
    assert char_poly(conn.p_curvature(0)) != char_poly(bad)


@pytest.mark.parametrize("p", [3, 5, 7])
def test_qkz_additive_isospectral(p):
    conn = zoo.qkz_additive_model(p)
    assert char_poly(conn.p_curvature(0)) == char_poly(zoo.qkz_additive_target(conn))


def test_qkz_additive_s_zero():
    conn = zoo.qkz_additive_model(5)
    C = conn.p_curvature(0).map(lambda a: a.substitute({"s": 0}).normalize())
    T = zoo.qkz_additive_target(conn).map(lambda a: a.substitute({"s": 0}).normalize())
    assert C == T


@pytest.mark.parametrize("p", [2, 3, 5, 7])
def test_pseudo_pencil_closed_form(p):
    conn = zoo.pseudo_pencil_example(p)
    C = conn.p_curvature(0)
    assert C == zoo.pseudo_pencil_closed_form(conn)
    assert not trivializable_at_zero_test(C, "s")


def test_registry():
    assert set(zoo.MODELS) == {"kz", "kz-irregular", "casimir-irregular", "dunkl-a1", "gaudin-sn",
                               "cm-identity", "toda-a1", "qkz", "qkz-additive", "pseudo-pencil"}
    for entry in zoo.MODELS.values():
        for p in entry.pinned:
            entry.check_prime(p, zoo.DEFAULT_ELL.get(p))


@pytest.mark.parametrize("model,p,ell", [("kz", 2, None), ("gaudin-sn", 3, None), ("qkz", 5, 7),
                                         ("qkz", 3, None), ("dunkl-a1", 9, None)])
def test_prime_rules_reject(model, p, ell):
    with pytest.raises(zoo.ConfigError):
        zoo.MODELS[model].check_prime(p, ell)
