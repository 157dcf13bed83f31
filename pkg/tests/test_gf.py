import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wittkit import gf
from wittkit.errors import Inconsistent, UnsupportedField

FIELDS = [(2, 1), (2, 2), (2, 3), (3, 1), (3, 2), (5, 1), (7, 1)]


def elems(F):
    return st.integers(min_value=0, max_value=F.q - 1)


def test_f4_mul_and_frobenius():
    F4 = gf.field(2, 2)
    a = gf.FieldElement(F4, 2)
    assert int(gf.ff_ops(a, a, "mul")) == 3
    assert int(gf.frobenius(a, 1)) == 3  # x -> x^2 = x + 1


def test_unsupported_field():
    with pytest.raises(UnsupportedField):
        gf.field(101, 3)


@pytest.mark.parametrize("p,m", FIELDS)
def test_multiplicative_group_is_cyclic_of_order_q_minus_1(p, m):
    F = gf.field(p, m)
    orders = set()
    for a in range(1, F.q):
        k, x = 1, a
        while x != 1:
            x = F.mul(x, a)
            k += 1
        orders.add(k)
        assert F.mul(a, F.inv(a)) == 1
    assert max(orders) == F.q - 1


@pytest.mark.parametrize("p,m", FIELDS)
def test_frobenius_is_additive_and_has_order_m(p, m):
    F = gf.field(p, m)
    for a, b in itertools.product(range(F.q), repeat=2):
        assert F.frob(F.add(a, b)) == F.add(F.frob(a), F.frob(b))
    for a in range(F.q):
        assert F.frob(a, m) == a
        assert F.frob(F.frob(a, 1), -1) == a


@settings(max_examples=200, deadline=None)
@given(st.sampled_from(FIELDS), st.data())
def test_field_axioms(pm, data):
    F = gf.field(*pm)
    a, b, c = (data.draw(elems(F)) for _ in range(3))
    assert F.mul(a, F.add(b, c)) == F.add(F.mul(a, b), F.mul(a, c))
    assert F.mul(F.mul(a, b), c) == F.mul(a, F.mul(b, c))
    assert F.sub(F.add(a, b), b) == a
    assert F.pow(a, F.q) == a


def test_semilinear_artin_schreier_over_f2():
    F = gf.field(2, 1)
    # u^2 + u = 0
    sol = gf.solve_semilinear(F, [([(1, 0, 1), (1, 0, 0)], 0)], 1)
    assert sorted(v[0] for v in sol.elements()) == [0, 1]


def test_semilinear_fixed_points_over_f4():
    F = gf.field(2, 2)
    # u^2 - u = 0 cuts out F_2, prime dimension 1
    sol = gf.solve_semilinear(F, [([(1, 0, 1), (F.neg(1), 0, 0)], 0)], 1)
    assert sol.prime_dimension == 1
    assert sorted(v[0] for v in sol.elements()) == [0, 1]


def test_semilinear_inconsistent():
    F = gf.field(2, 1)
    # u^2 + u = 1 has no root in F_2
    with pytest.raises(Inconsistent):
        gf.solve_semilinear(F, [([(1, 0, 1), (1, 0, 0)], 1)], 1)


@pytest.mark.parametrize("p,m", [(2, 2), (3, 2), (2, 3)])
def test_semilinear_matches_brute_force(p, m, rng):
    F = gf.field(p, m)
    for _ in range(20):
        eqs = []
        for _ in range(2):
            terms = [(F.random(rng), j, rng.randrange(-1, m)) for j in range(2)]
            eqs.append((terms, F.random(rng)))

        def holds(u):
            for terms, d in eqs:
                acc = 0
                for c, j, e in terms:
                    acc = F.add(acc, F.mul(c, F.frob(u[j], e)))
                if acc != d:
                    return False
            return True

        brute = {u for u in itertools.product(range(F.q), repeat=2) if holds(u)}
        try:
            got = set(gf.solve_semilinear(F, eqs, 2).elements())
        except Inconsistent:
            got = set()
        assert got == brute


def test_rank_and_inverse(rng):
    F = gf.field(3, 2)
    for _ in range(20):
        A = gf.random_invertible(F, rng, 3)
        Ai = gf.mat_inv(F, A)
        assert [list(r) for r in gf.mat_mul(F, A, Ai)] == [list(r) for r in gf.identity(3)]
        assert gf.det(F, A) != 0
        assert gf.rank(F, [list(r) for r in A], 3) == 3
