import itertools

import pytest
from hypothesis import given, settings, strategies as st

from wittkit import gf, lattice, ore
from wittkit.errors import HypothesisViolated, NotABasis, TruncationTooShort
from wittkit.lattice import WittMatrix
from wittkit.witt import WittRing

F2 = gf.field(2, 1)


def W_(F, s):
    return WittRing(F, s)


def gl(W, rng, n):
    """Random invertible matrix over W_s as a product of elementary moves."""
    gr = W.gr
    M = [[1 if i == j else 0 for j in range(n)] for i in range(n)]
    for _ in range(3 * n):
        i, j = rng.sample(range(n), 2) if n > 1 else (0, 0)
        c = gr.random(rng)
        if i != j:
            M = [[gr.add(M[a][b], gr.mul(c, M[j][b])) if a == i else M[a][b]
                  for b in range(n)] for a in range(n)]
        u = gr.random(rng)
        if gr.is_unit(u):
            M[i] = [gr.mul(u, x) for x in M[i]]
    return WittMatrix.from_gr_rows(W, M)


def matmul(A, B):
    gr = A.ring.gr
    a, b = A.gr_rows(), B.gr_rows()
    n = len(a)
    rows = [[0] * n for _ in range(n)]
    for i in range(n):
        for j in range(n):
            for k in range(n):
                rows[i][j] = gr.add(rows[i][j], gr.mul(a[i][k], b[k][j]))
    return WittMatrix.from_gr_rows(A.ring, rows)


def test_determinant_of_diagonal():
    W = W_(F2, 3)
    dd = lattice.determinant_digits(lattice.diagonal(W, (2, 0)))
    assert dd.delta == (0, 0, 1)
    assert dd.valuation() == 2


def test_column_replacement_on_diagonal():
    W = W_(F2, 3)
    U = lattice.diagonal(W, (1, 1))
    v = (W.from_int(2), W.zero())
    dd = lattice.determinant_digits(U, v)
    assert dd.eta_valuations() == (2, 3)


def test_random_unimodular_has_unit_determinant(rng):
    W = W_(gf.field(3, 1), 3)
    for _ in range(50):
        assert lattice.determinant_digits(gl(W, rng, 3)).delta[0] != 0


def test_discriminant_basis():
    W = W_(F2, 4)
    assert lattice.is_discriminant_basis(lattice.diagonal(W, (3, 0, 0)), 3)
    assert not lattice.is_discriminant_basis(lattice.diagonal(W, (0, 0, 0)), 1)
    with pytest.raises(TruncationTooShort):
        lattice.is_discriminant_basis(lattice.diagonal(W, (3, 0)), 4)


def test_path_family_fibres_are_bases():
    F = gf.field(2, 2)
    fam = lattice.specialization_path((2, 0), 0, 1, F)
    for t in range(1, F.q):
        assert lattice.is_discriminant_basis(fam.fiber(t), 2)


def test_membership_examples():
    W = W_(F2, 3)
    U = lattice.diagonal(W, (1, 1))
    x = lattice.membership_solve(U, (W.from_int(2), W.zero()), 2)
    assert x == (W.one(), W.zero())
    assert lattice.membership_solve(U, (W.one(), W.zero()), 2) is None
    with pytest.raises(NotABasis):
        lattice.membership_solve(U, (W.one(), W.zero()), 1)


def test_membership_recovers_combinations(rng):
    F = gf.field(3, 1)
    for _ in range(50):
        U = lattice.sample_open_cell(2, 2, rng, F)
        W = U.ring
        c = [W.random(rng) for _ in range(2)]
        v = tuple(sum((U.entry(i, j) * c[j] for j in range(2)), W.zero()) for i in range(2))
        x = lattice.membership_solve(U, v, 2)
        assert x is not None
        assert U.apply(x) == v


def test_membership_matches_span_closure():
    W = W_(F2, 3)
    U = lattice.diagonal(W, (1, 1))
    span = lattice.span_set(W, U.gr_cols(), 2)
    for v in itertools.product(range(W.gr.size), repeat=2):
        vec = tuple(W.from_gr(g) for g in v)
        assert (lattice.membership_solve(U, vec, 2) is not None) == (tuple(v) in span)


def test_sample_open_cell(rng):
    for nr in (1, 2, 3):
        for _ in range(100):
            assert lattice.is_discriminant_basis(lattice.sample_open_cell(2, nr, rng, F2), nr)
    U = lattice.sample_open_cell(1, 2, rng, gf.field(3, 1))
    assert U.entry(0, 0).valuation() == 2


def test_smith_examples():
    W = W_(F2, 3)
    gr = W.gr
    U = WittMatrix.from_gr_rows(W, [[gr.pi(1), 1], [0, gr.pi(1)]])
    assert lattice.smith_form(U)[0] == (2, 0)
    assert lattice.smith_form(lattice.diagonal(W, (0, 2, 1)))[0] == (2, 1, 0)


def test_smith_transforms_diagonalise(rng):
    W = W_(gf.field(3, 1), 3)
    for _ in range(30):
        U = WittMatrix.from_gr_rows(W, [[W.gr.random(rng) for _ in range(2)] for _ in range(2)])
        t, A, B = lattice.smith_form(U)
        D = matmul(matmul(A, U), B).gr_rows()
        assert all(D[i][j] == 0 for i in range(2) for j in range(2) if i != j)
        assert sorted((W.gr.valuation(D[i][i]) for i in range(2)), reverse=True) == list(t)


@pytest.mark.parametrize("p,n", [(2, 2), (3, 2), (2, 3)])
def test_smith_type_is_gl_invariant(p, n, rng):
    W = W_(gf.field(p, 1), 3)
    for _ in range(100):
        U = WittMatrix.from_gr_rows(W, [[W.gr.random(rng) for _ in range(n)] for _ in range(n)])
        t = lattice.smith_form(U)[0]
        assert lattice.smith_form(matmul(matmul(gl(W, rng, n), U), gl(W, rng, n)))[0] == t


def test_canonical_form_examples(rng):
    W = W_(F2, 3)
    D = lattice.diagonal(W, (2, 0))
    L = lattice.canonical_form(D)
    assert L.span == D
    assert lattice.canonical_form(L.span) == L
    for _ in range(100):
        U = lattice.sample_open_cell(2, 2, rng, F2)
        L = lattice.canonical_form(U)
        assert lattice.canonical_form(matmul(U, gl(U.ring, rng, 2))) == L
        assert lattice.canonical_form(L.span) == L


def test_canonical_form_rejects_vanishing_determinant():
    W = W_(F2, 2)
    with pytest.raises(TruncationTooShort):
        lattice.canonical_form(lattice.diagonal(W, (2, 0)))
    assert lattice.canonical_form(lattice.diagonal(W, (2, 0)), allow_degenerate=True).pivots == (2, 0)


def test_enumeration_small():
    Ls = lattice.enumerate_lattices(2, 2, F2, 2)
    assert {L.type for L in Ls} == {(2, 0), (1, 1)}
    full = lattice.enumerate_lattices(2, 0, F2, 2)
    assert len(full) == 1 and full[0].type == (0, 0)


def test_enumeration_agrees_with_closure_oracle():
    W = W_(F2, 2)
    hermite = lattice.enumerate_lattices(2, 2, F2, 2)
    closure = lattice.enumerate_lattices(2, 2, F2, 2, method="closure")
    assert len(hermite) == len(closure)
    assert {L for _, L in closure} == set(hermite)
    # equal canonical forms <=> equal spans
    spans = {L: lattice.span_set(W, L.key, 2) for L in hermite}
    assert len(set(spans.values())) == len(hermite)
    for S, L in closure:
        assert spans[L] == S


def test_lie_algebra_examples():
    W = W_(F2, 2)
    L = lattice.lattice_from_vectors(W, [(W.gr.pi(1),)], 1)
    rep = lattice.lie_algebra(L)
    assert rep.basis == ((0, 1),) and rep.theta_closed
    full = lattice.lie_algebra(lattice.lattice_from_vectors(W, [(1,)], 1))
    assert full.dim == 2


def test_lie_algebra_on_all_small_lattices():
    for colength in range(0, 5):
        for L in lattice.enumerate_lattices(2, colength, F2, 2):
            rep = lattice.lie_algebra(L)
            assert rep.theta_closed
            assert rep.dim == 4 - colength


def test_lie_type_transport():
    R = ore.ore_ring(F2, 2)
    for colength in range(0, 5):
        for L in lattice.enumerate_lattices(2, colength, F2, 2):
            rep = lattice.lie_algebra(L)
            assert ore.ore_smith(R, basis=rep.basis, n=2) == L.type


def test_hom_dimension_values():
    assert lattice.hom_dimension(lattice.diagonal_lattice((2, 0), F2, 2)) == 2
    assert lattice.hom_dimension(lattice.diagonal_lattice((1, 1), F2, 2)) == 4


@pytest.mark.parametrize("t,dim", [((2, 0), 2), ((1, 1), 4)])
def test_hom_dimension_against_map_count(t, dim):
    count, _ = lattice.hom_map_count(lattice.diagonal_lattice(t, F2, 2))
    assert count == 2 ** dim


def test_additive_characters():
    F = gf.field(2, 2)
    assert len(lattice.additive_characters((0,), 1, F).characters) == 1
    B = lattice.additive_characters((0,), 2, F)
    assert ((0, 0, 0, 1),) in B.characters
    W = W_(F, 2)
    for a, b in itertools.product(range(W.gr.size), repeat=2):
        x, y = W.from_gr(a), W.from_gr(b)
        for ch in B.characters:
            assert B.evaluate(ch, [(x + y).digits]) == F.add(
                B.evaluate(ch, [x.digits]), B.evaluate(ch, [y.digits]))


def test_mt_family_fibres():
    F = gf.field(2, 2)
    fam = lattice.mt_family((1, 3), 0, 1, F, 2)
    assert fam.fiber_type(0) == (2, 2)
    assert fam.fiber_type(1) == (3, 1)
    assert fam.verify()
    with pytest.raises(HypothesisViolated):
        lattice.mt_family((2, 2), 0, 1, F, 2)


def test_mt_relation(rng):
    F4 = gf.field(2, 2)
    fam = lattice.mt_family((1, 3), 0, 1, F4, 2)
    assert lattice.verify_mt_relation(fam, 200, rng)
    assert not lattice.verify_mt_relation(fam, 200, rng, variant="no_frobenius")
    assert all(lattice.mt_relation_value(fam, 0, [(x, 0, 0, 0, 0), (0, 0, 0, 0, 0)]) == 0
               for x in range(4))
    # over F_16 the relation as printed needs the corrected exponent
    F16 = gf.field(2, 4)
    fam16 = lattice.mt_family((1, 3), 0, 1, F16, 2)
    assert lattice.verify_mt_relation(fam16, 200, rng, variant="corrected")


def test_specialization_chain_reaches_every_type():
    for n, nr in [(2, 2), (2, 4), (3, 3)]:
        edges, seen = lattice.specialization_chain(n, nr)
        assert seen == set(lattice.partitions(nr, n))
        for g, sp, i, j in edges:
            fam = lattice.specialization_path(g, i, j, gf.field(2, 1))
            assert fam.generic_type == g and fam.special_type == sp
            assert fam.verify()


def test_complete_intersection(rng):
    rep = lattice.verify_complete_intersection(2, 2, 20, F2, rng)
    assert set(rep["ranks"]) == {2}
    assert (rep["ambient_dim"], rep["variety_dim"]) == (12, 10)
    assert lattice.verify_complete_intersection(2, 0, 3, F2, rng)["ranks"] == [0, 0, 0]


@settings(max_examples=50, deadline=None)
@given(st.integers(0, 10 ** 6))
def test_fibres_of_generating_map(seed):
    import random
    rng = random.Random(seed)
    F = gf.field(2, 1)
    U = lattice.sample_open_cell(2, 2, rng, F)
    V = matmul(U, gl(U.ring, rng, 2))
    X = lattice.transition_matrix(U, V, 2)
    assert X is not None and matmul(U, X) == V
    assert lattice.canonical_form(U) == lattice.canonical_form(V)


def test_eta_tangent_is_not_reduced():
    W = W_(F2, 2)
    L = lattice.diagonal_lattice((1, 1), F2, 2)
    assert lattice.lie_algebra(L).dim == 2
    assert lattice.lie_algebra_eta(L.span, 2).dim == 4
    with pytest.raises(TruncationTooShort):
        lattice.lie_algebra_eta(lattice.diagonal(W, (2, 1)), 3)
