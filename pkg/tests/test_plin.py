import random

import pytest
from hypothesis import given, settings, strategies as st

from wittkit import gf, plin
from wittkit.errors import NotNilpotent, NotTransversal, Singular

F2, F4 = gf.field(2, 1), gf.field(2, 2)


def test_twisted_apply_example():
    B = ((0, 1), (0, 0))
    assert plin.twisted_apply(F2, (1, 0), B) == (0, 1)
    assert plin.PLinearMap(F2, B)((1, 0)) == (0, 1)


def test_lattice_of_shift():
    L = plin.lattice_of_nilpotent(F2, ((0, 1), (0, 0)))
    assert L.basis == ((0, 1, 1, 0), (0, 0, 0, 1))


def test_lattice_of_zero_map():
    for n in (2, 3):
        Z = tuple((0,) * n for _ in range(n))
        L = plin.lattice_of_nilpotent(F4, Z)
        # theta-bar (O/theta^n (x) V): everything in grades >= 1
        assert all(all(x == 0 for x in b[:n]) for b in L.basis)
        assert len(L.basis) == n * n - n


def test_not_nilpotent():
    with pytest.raises(NotNilpotent):
        plin.lattice_of_nilpotent(F2, ((1, 0), (0, 0)))


def test_non_transversal_rejected():
    n = 2
    # theta-bar (O/theta^2 (x) V) plus a vector of V is not a complement
    L = plin._plattice(F2, n, [(1, 0, 0, 0), (0, 0, 1, 0)])
    with pytest.raises(NotTransversal):
        plin.nilpotent_of_lattice(L)


def test_conjugate_singular():
    with pytest.raises(Singular):
        plin.conjugate(F2, ((0, 1), (0, 0)), ((1, 1), (1, 1)))


@pytest.mark.parametrize("q,n", [(2, 2), (2, 3), (4, 2)])
def test_bijection_exhaustive(q, n):
    F = gf.field(2, 2 if q == 4 else 1)
    nil = plin.all_nilpotents(F, n)
    lats = plin.enumerate_transversal_lattices(F, n)
    assert len(nil) == len(lats) == q ** (n * n - n)
    image = {plin.lattice_of_nilpotent(F, B) for B in nil}
    assert image == set(lats)
    for B in nil:
        assert plin.nilpotent_of_lattice(plin.lattice_of_nilpotent(F, B)) == B


def _random_nilpotent(F, n, rng):
    while True:
        B = tuple(tuple(F.random(rng) for _ in range(n)) for _ in range(n))
        if plin.is_p_nilpotent(F, B):
            return B


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1, 2), (2, 2, 2), (3, 1, 2), (2, 1, 3)]), st.integers(0, 10 ** 6))
def test_equivariance(params, seed):
    p, m, n = params
    F = gf.field(p, m)
    rng = random.Random(seed)
    B = _random_nilpotent(F, n, rng)
    A = gf.random_invertible(F, rng, n)
    Ai = gf.mat_inv(F, A)
    lhs = plin.lattice_of_nilpotent(F, plin.conjugate(F, B, A))
    assert lhs == plin.act_lattice(plin.lattice_of_nilpotent(F, B), Ai)


@settings(max_examples=60, deadline=None)
@given(st.sampled_from([(2, 1, 2), (2, 2, 2), (2, 3, 2), (3, 1, 2), (3, 2, 2), (2, 2, 3)]),
       st.integers(0, 10 ** 6))
def test_duality(params, seed):
    p, m, n = params
    F = gf.field(p, m)
    B = _random_nilpotent(F, n, random.Random(seed))
    rep = plin.orthogonality_report(F, B)
    assert rep["orthogonal"]
    assert rep["complement_fp_dim"] == rep["tau_span_fp_dim"] == rep["expected_fp_dim"]


def test_tau_adjunction(rng):
    F = gf.field(2, 3)
    for _ in range(50):
        B = _random_nilpotent(F, 2, rng)
        tau = plin.dual_tau(F, B)
        u = tuple(F.random(rng) for _ in range(2))
        v = tuple(F.random(rng) for _ in range(2))
        phi_v = plin.twisted_apply(F, v, B)
        assert plin.sum_mul(F, u, phi_v) == F.frob(plin.sum_mul(F, tau(u), v), 1)


def test_serialisation_roundtrip():
    phi = plin.PLinearMap(F4, ((0, 2), (0, 0)))
    assert plin.PLinearMap.from_json(phi.to_json(), F4) == phi
