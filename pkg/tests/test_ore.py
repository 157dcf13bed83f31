import pytest
from hypothesis import given, settings, strategies as st

from wittkit import gf, ore
from wittkit.errors import TypeInvalid

F4 = gf.field(2, 2)


def rings():
    return st.sampled_from([(2, 1, 3), (2, 2, 3), (3, 1, 3), (3, 2, 2)]).map(
        lambda t: ore.ore_ring(gf.field(t[0], t[1]), t[2]))


def element(R):
    return st.tuples(*[st.integers(0, R.F.q - 1)] * R.s)


def test_defining_relation():
    R = ore.ore_ring(F4, 3)
    for a in range(4):
        for b in range(4):
            lhs = R.mul((0, a, 0), (0, b, 0))
            assert lhs == (0, 0, F4.mul(a, F4.frob(b, 1)))
        assert R.sub(R.mul(R.theta(), R.scalar(a)), R.mul(R.scalar(F4.frob(a, 1)), R.theta())) == R.zero


def test_ore_op_on_elements():
    R = ore.ore_ring(F4, 2)
    a, b = ore.OreElement(R, (1, 2)), ore.OreElement(R, (3, 1))
    assert ore.ore_op(a, b, "add").coeffs == (2, 3)
    assert ore.ore_op(a, b, "mul").coeffs == R.mul((1, 2), (3, 1))


@settings(max_examples=300, deadline=None)
@given(rings().flatmap(lambda R: st.tuples(st.just(R), element(R), element(R), element(R))))
def test_associative_and_distributive(args):
    R, a, b, c = args
    assert R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
    assert R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
    assert R.mul(R.add(a, b), c) == R.add(R.mul(a, c), R.mul(b, c))


@settings(max_examples=200, deadline=None)
@given(rings().flatmap(lambda R: st.tuples(st.just(R), element(R), st.integers(0, 3))))
def test_factors(args):
    R, a, d = args
    a = R.mul(R.pi(d), a)
    if R.ord(a) >= d:
        assert R.mul(R.rfactor(a, d), R.pi(d)) == a
        assert R.mul(R.pi(d), R.lfactor(a, d)) == a


def test_matrix_inverse(rng):
    R = ore.ore_ring(gf.field(3, 1), 4)
    n = 3
    I = ore.identity(R, n)
    for _ in range(200):
        A = ore.random_invertible(R, rng, n)
        ok, B = ore.ore_matrix_invertible(R, A)
        assert ok and ore.mat_mul(R, A, B) == I and ore.mat_mul(R, B, A) == I
    N = ore.random_matrix(R, rng, n)
    A = tuple(tuple(R.add(I[i][j], R.mul(R.theta(), N[i][j])) for j in range(n)) for i in range(n))
    assert ore.ore_matrix_invertible(R, A)[0]
    Z = tuple(tuple(R.mul(R.theta(), x) for x in row) for row in N)
    assert ore.ore_matrix_invertible(R, Z) == (False, None)


def test_smith_examples():
    R = ore.ore_ring(F4, 3)
    assert ore.ore_smith(R, M=ore.diag_lattice_rows(R, (1, 3, 0))) == (3, 1, 0)
    M = ((R.theta(), R.one), (R.zero, R.theta()))
    assert ore.ore_smith(R, M=M) == (2, 0)


def test_smith_invariance(rng):
    R = ore.ore_ring(gf.field(2, 1), 3)
    for _ in range(200):
        M = ore.random_matrix(R, rng, 2)
        t = ore.ore_smith(R, M=M)
        A = ore.random_invertible(R, rng, 2)
        assert ore.ore_smith(R, M=ore.mat_mul(R, M, A)) == t
        assert ore.ore_smith(R, M=ore.mat_mul(R, A, M)) == t


def test_smith_matches_dimension_count(rng):
    R = ore.ore_ring(F4, 3)
    for _ in range(100):
        M = ore.random_matrix(R, rng, 2)
        basis = ore.span_of_rows(R, M)
        assert ore.is_left_submodule(R, basis, 2)
        assert ore.ore_type_by_dimensions(R, basis, 2) == ore.ore_smith(R, M=M)


def test_right_action_preserves_submodules(rng):
    R = ore.ore_ring(F4, 3)
    for _ in range(50):
        M = ore.random_matrix(R, rng, 2)
        A = ore.random_invertible(R, rng, 2)
        moved = ore.span_of_rows(R, ore.mat_mul(R, M, A))
        assert ore.is_left_submodule(R, moved, 2)


def test_dimension_formulas():
    assert ore.stabilizer_dimension((2, 0), 1) == 6
    assert ore.stabilizer_dimension((1, 1), 1) == 8
    assert ore.orbit_dimension((2, 0)) == 2
    assert ore.orbit_dimension((1, 1)) == 0
    assert ore.orbit_dimension((2, 1, 0)) == 4
    with pytest.raises(TypeInvalid):
        ore.orbit_dimension((3, 1, 0), 1)


@pytest.mark.parametrize("n,r", [(2, 1), (2, 2), (3, 1), (3, 2)])
def test_stabilizer_plus_orbit(n, r):
    from wittkit.lattice import partitions
    for t in partitions(n * r, n):
        assert ore.stabilizer_dimension(t, r) + ore.orbit_dimension(t, r) == n ** 3 * r


def test_stabilizer_brute_force():
    R = ore.ore_ring(gf.field(2, 1), 2)
    assert ore.stabilizer_count(R, (2, 0)) == 2 ** 6
