import random

import pytest

from wittkit import gf, rla, witt
from wittkit.errors import NotInParabolic, UnsupportedP


def test_jacobson_p2():
    t = rla.jacobson_polynomials(2)
    assert t.s == ({("y",): 1},)
    assert rla.JacobsonTable.word_str(("y",)) == "[y,x]"


def test_jacobson_p3():
    t = rla.jacobson_polynomials(3)
    assert t.s[0] == {("y", "y"): 1}
    assert t.s[1] == {("x", "y"): 2}


def test_unsupported_prime():
    with pytest.raises(UnsupportedP):
        rla.jacobson_polynomials(11)
    with pytest.raises(UnsupportedP):
        rla.build_ws_model(2, 2, 2)


@pytest.mark.parametrize("p,trials", [(2, 1000), (3, 300), (5, 100), (7, 20)])
def test_restricted_check(p, trials, rng):
    assert rla.restricted_check(p, trials, rng)


def test_restricted_check_commuting_pairs(rng):
    F = gf.field(3, 1)
    pairs = []
    for _ in range(20):
        X = gf.random_matrix(F, rng, 2)
        pairs.append((X, gf.mat_mul(F, X, X)))
    assert rla.restricted_check(3, 0, rng, pairs=pairs)


def test_restricted_check_detects_wrong_table(rng, monkeypatch):
    real = rla.jacobson_polynomials(3)
    fake = rla.JacobsonTable(3, (real.s[0], {("x", "y"): 1}))
    monkeypatch.setattr(rla, "jacobson_polynomials", lambda p: fake)
    assert not rla.restricted_check(3, 50, rng)


def test_ws_model_audits(rng):
    m = rla.build_ws_model(2, 2, 3)
    assert m.dim == 6
    assert m.audit_antisymmetry() and m.audit_jacobi() and m.audit_weights()
    assert m.audit_pmap_semilinear(rng) and m.audit_restricted()


def test_beta_on_root_vectors():
    m = rla.build_ws_model(2, 2, 3)
    for a in ("X12", "X21"):
        assert rla.beta_map(m, m.unit(m.index(f"{a}^0"))) == m.unit(m.index(f"{a}^1"))


def test_beta_additive_and_homogeneous(rng):
    m = rla.build_ws_model(2, 2, 3, m=2)
    F = m.F
    for _ in range(200):
        x, y = rla.random_g0_element(m, rng), rla.random_g0_element(m, rng)
        assert rla.beta_map(m, m.add(x, y)) == m.add(rla.beta_map(m, x), rla.beta_map(m, y))
        c = F.random(rng)
        assert rla.beta_map(m, m.scale(c, x)) == m.scale(F.pow(c, 3), rla.beta_map(m, x))


def test_canonical_weight():
    assert rla.canonical_weight(2, 1, 2)[0].c == -6
    assert rla.canonical_weight(2, 1, 2, "equal_char")[0].c == -2
    for n in (2, 3):
        for r in (1, 2):
            for p in (2, 3, 5):
                ch, terms = rla.canonical_weight(n, r, p)
                assert sum(terms) == ch.c


def _ring():
    return witt.galois_ring(gf.field(2, 1), 3)


def test_modular_action_identity_and_translation(rng):
    R = _ring()
    I = [[1 if i == j else 0 for j in range(3)] for i in range(3)]
    for _ in range(20):
        u = tuple(R.mul_p(R.random(rng)) for _ in range(2))
        assert rla.modular_action(R, I, u) == u
        a = R.mul_p(R.random(rng))
        T = [row[:] for row in I]
        T[0][1] = a
        assert rla.modular_action(R, T, u) == (R.add(u[0], a), u[1])


def test_modular_action_group_law(rng):
    R = _ring()
    done = 0
    while done < 500:
        X, Y = rla.random_parabolic(R, rng, 3), rla.random_parabolic(R, rng, 3)
        u = tuple(R.mul_p(R.random(rng)) for _ in range(2))
        XY = rla._gr_mat_mul(R, X, Y)
        assert rla.modular_action(R, XY, u) == rla.modular_action(R, X, rla.modular_action(R, Y, u))
        done += 1


def test_stabiliser_of_zero():
    R = witt.galois_ring(gf.field(2, 1), 2)
    pW = [x for x in range(R.size) if R.valuation(x) >= 1]
    import itertools
    for x11, x12, x21, x22 in itertools.product(range(R.size), pW, range(R.size), range(R.size)):
        X = [[x11, x12], [x21, x22]]
        if not (R.is_unit(x11) and R.is_unit(x22)):
            continue
        assert (rla.modular_action(R, X, (0,)) == (0,)) == (x12 == 0)


def test_parabolic_factor(rng):
    R = _ring()
    for _ in range(100):
        X = rla.random_parabolic(R, rng, 3)
        try:
            U, P = rla.parabolic_factor(R, X)
        except rla.BlockSingular:
            continue
        assert rla._gr_mat_mul(R, U, P) == X
        assert all(x == 0 for x in P[0][1:])
    with pytest.raises(NotInParabolic):
        rla.parabolic_factor(R, [[1, 1], [0, 1]])
