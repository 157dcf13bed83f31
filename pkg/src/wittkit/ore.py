"""The truncated Ore ring O_s = F_q[theta]/(theta^s) with theta*b = b^p*theta.

Elements are tuples (b_0, ..., b_{s-1}) of field codes meaning
sum_i b_i theta^i.  Matrices act on row vectors from the right and
submodules are left submodules, so theta acts on a row by shifting every
entry one step and raising coefficients to the p-th power.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
from itertools import product

from . import gf
from .chain import elementary_divisors, hermite, smith
from .errors import ParamsMismatch, TypeInvalid


class OreRing:
    def __init__(self, F, s):
        if s < 1:
            raise ValueError("truncation length must be >= 1")
        self.F, self.s, self.p = F, s, F.p
        self.zero = (0,) * s
        self.one = (1,) + (0,) * (s - 1)

    def __eq__(self, other):
        return isinstance(other, OreRing) and (other.F, other.s) == (self.F, self.s)

    def __hash__(self):
        return hash((self.F, self.s))

    def __repr__(self):
        return f"O_{self.s}(F_{self.F.q})"

    def elem(self, coeffs):
        coeffs = tuple(coeffs)
        if len(coeffs) != self.s:
            raise ValueError(f"expected {self.s} coefficients")
        return coeffs

    def add(self, a, b):
        F = self.F
        return tuple(F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        F = self.F
        return tuple(F.sub(x, y) for x, y in zip(a, b))

    def neg(self, a):
        return tuple(self.F.neg(x) for x in a)

    def mul(self, a, b):
        F, s = self.F, self.s
        out = [0] * s
        for i, ai in enumerate(a):
            if ai:
                for j in range(s - i):
                    bj = b[j]
                    if bj:
                        out[i + j] = F.add(out[i + j], F.mul(ai, F.frob(bj, i)))
        return tuple(out)

    def scalar(self, c):
        return (c,) + (0,) * (self.s - 1)

    def theta(self, k=1):
        return self.pi(k)

    def pi(self, k):
        out = [0] * self.s
        if k < self.s:
            out[k] = 1
        return tuple(out)

    def ord(self, a):
        for i, x in enumerate(a):
            if x:
                return i
        return self.s

    def is_unit(self, a):
        return a[0] != 0

    def inv(self, u):
        F, s = self.F, self.s
        if not u[0]:
            from .errors import NotAUnit
            raise NotAUnit("constant term is zero")
        u0i = F.inv(u[0])
        v = [u0i] + [0] * (s - 1)
        # u * v = 1 order by order: u_0 v_k = -sum_{i>=1} u_i v_{k-i}^(p^i)
        for k in range(1, s):
            acc = 0
            for i in range(1, k + 1):
                if u[i] and v[k - i]:
                    acc = F.add(acc, F.mul(u[i], F.frob(v[k - i], i)))
            v[k] = F.mul(u0i, F.neg(acc))
        return tuple(v)

    def rfactor(self, a, d):
        """c with c * theta^d == a (needs ord(a) >= d)."""
        return tuple(a[d:]) + (0,) * d

    def lfactor(self, a, d):
        """c with theta^d * c == a (needs ord(a) >= d)."""
        F = self.F
        return tuple(F.frob(x, -d) for x in a[d:]) + (0,) * d

    def split(self, a, d):
        if d >= self.s:
            return self.zero, a
        return self.rfactor(a, d), tuple(a[:d]) + (0,) * (self.s - d)

    def random(self, rng):
        return tuple(self.F.random(rng) for _ in range(self.s))

    def elements(self):
        return product(range(self.F.q), repeat=self.s)


@lru_cache(maxsize=None)
def ore_ring(F, s):
    return OreRing(F, s)


@dataclass(frozen=True)
class OreElement:
    ring: OreRing
    coeffs: tuple

    def _check(self, other):
        if not isinstance(other, OreElement) or other.ring != self.ring:
            raise ParamsMismatch("Ore elements over different rings")

    def __add__(self, other):
        self._check(other)
        return OreElement(self.ring, self.ring.add(self.coeffs, other.coeffs))

    def __sub__(self, other):
        self._check(other)
        return OreElement(self.ring, self.ring.sub(self.coeffs, other.coeffs))

    def __mul__(self, other):
        self._check(other)
        return OreElement(self.ring, self.ring.mul(self.coeffs, other.coeffs))

    def __neg__(self):
        return OreElement(self.ring, self.ring.neg(self.coeffs))

    def ord(self):
        return self.ring.ord(self.coeffs)

    def to_json(self):
        return {"s": self.ring.s, "coeffs": list(self.coeffs)}


def ore_op(a, b, op):
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


# ---------------------------------------------------------------------------
# matrices: lists of rows of raw coefficient tuples

def mat_mul(R, A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = R.zero
            for t in range(k):
                if A[i][t] != R.zero and B[t][j] != R.zero:
                    acc = R.add(acc, R.mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def identity(R, n):
    return tuple(tuple(R.one if i == j else R.zero for j in range(n)) for i in range(n))


def vec_mat(R, v, A):
    """Row vector times matrix: the right action of A."""
    return mat_mul(R, (tuple(v),), A)[0]


def constant_part(A):
    return [[x[0] for x in row] for row in A]


def ore_matrix_invertible(R, A):
    """(True, A^-1) if A_0 is invertible over F_q, else (False, None).

    The inverse is lifted one theta-degree at a time: if B inverts A modulo
    theta^k then B + B (I - A B) inverts it modulo theta^2k.
    """
    F = R.F
    A0inv = gf.mat_inv(F, constant_part(A))
    if A0inv is None:
        return False, None
    n = len(A)
    I = identity(R, n)
    B = tuple(tuple(R.scalar(x) for x in row) for row in A0inv)
    prec = 1
    while prec < R.s:
        E = mat_mul(R, A, B)
        D = tuple(tuple(R.sub(I[i][j], E[i][j]) for j in range(n)) for i in range(n))
        BD = mat_mul(R, B, D)
        B = tuple(tuple(R.add(B[i][j], BD[i][j]) for j in range(n)) for i in range(n))
        prec *= 2
    return True, B


def random_matrix(R, rng, n):
    return tuple(tuple(R.random(rng) for _ in range(n)) for _ in range(n))


def random_invertible(R, rng, n):
    while True:
        A = random_matrix(R, rng, n)
        if gf.det(R.F, constant_part(A)):
            return A


def theta_shift(R, v):
    """Left multiplication of a row vector by theta."""
    return tuple(R.mul(R.theta(), x) for x in v)


# ---------------------------------------------------------------------------
# submodules

def flatten(R, v):
    """Row vector over O_s -> coordinates in F_q^(n s), index i*s + l."""
    return [c for x in v for c in x]


def unflatten(R, coords, n):
    s = R.s
    return tuple(tuple(coords[i * s:(i + 1) * s]) for i in range(n))


def ore_smith(R, M=None, basis=None, n=None):
    """Divisor type (nonincreasing) of O_s^n / N.

    N is the left row span of the matrix M, or the F_q-span `basis` of
    coordinate vectors (which must already be a left submodule).
    """
    if M is not None:
        return elementary_divisors(R, [list(r) for r in M])
    gens = [unflatten(R, b, n) for b in basis]
    _, vecs = hermite(R, gens, n)
    return elementary_divisors(R, [list(v) for v in vecs])


def ore_type_by_dimensions(R, basis, n):
    """Type of O_s^n/N read off from dim (theta^k F + N)/N, an independent check."""
    F, s = R.F, R.s
    N = gf.span_basis(F, [list(b) for b in basis], n * s)
    dimN = len(N)
    dims = []
    for k in range(s + 1):
        tk = []
        for i in range(n):
            for l in range(k, s):
                e = [0] * (n * s)
                e[i * s + l] = 1
                tk.append(e)
        dims.append(gf.rank(F, N + tk, n * s) - dimN)
    # dims[k] = sum_j max(0, s_j - k); its differences count parts > k
    parts = [dims[k] - dims[k + 1] for k in range(s)]
    out = []
    for k in range(s, 0, -1):
        cnt = parts[k - 1] - (parts[k] if k < s else 0)
        out.extend([k] * cnt)
    out.extend([0] * (n - len(out)))
    return tuple(out)


def is_left_submodule(R, basis, n):
    F, s = R.F, R.s
    B = gf.span_basis(F, [list(b) for b in basis], n * s)
    for b in B:
        tb = flatten(R, theta_shift(R, unflatten(R, b, n)))
        if gf.rank(F, B + [tb], n * s) != len(B):
            return False
    return True


@dataclass(frozen=True)
class OreLattice:
    ring: OreRing
    n: int
    basis: tuple      # reduced echelon F_q-basis, coordinates i*s + l
    generators: tuple  # Hermite generator rows
    type: tuple

    @classmethod
    def from_basis(cls, R, basis, n):
        F = R.F
        B = tuple(tuple(r) for r in gf.span_basis(F, [list(b) for b in basis], n * R.s))
        gens = [unflatten(R, b, n) for b in B]
        _, vecs = hermite(R, gens, n)
        return cls(R, n, B, vecs, elementary_divisors(R, [list(v) for v in vecs]))

    @property
    def codim(self):
        return self.n * self.ring.s - len(self.basis)


def span_of_rows(R, rows):
    """F_q-basis of the left O_s-span of the given rows."""
    n = len(rows[0])
    F, s = R.F, R.s
    vecs = []
    for r in rows:
        cur = tuple(r)
        for _ in range(s):
            vecs.append(flatten(R, cur))
            cur = theta_shift(R, cur)
    return gf.span_basis(F, vecs, n * s)


# ---------------------------------------------------------------------------
# orbit bookkeeping

def _check_type(t, r):
    t = tuple(int(x) for x in t)
    n = len(t)
    if n < 1 or any(x < 0 for x in t) or sum(t) != n * r or any(x > n * r for x in t):
        raise TypeInvalid(f"type {t} is not admissible for n={n}, r={r}")
    return t


def stabilizer_dimension(t, r):
    """Free coefficients of A in M_n(O/theta^(nr)) with ord(a_ij) >= s_j - s_i."""
    t = _check_type(t, r)
    n = len(t)
    depth = n * r
    count = 0
    for i in range(n):
        for j in range(n):
            need = max(0, t[j] - t[i])
            count += sum(1 for l in range(depth) if l >= need)
    return count


def orbit_dimension(t, r=None):
    t = tuple(int(x) for x in t)
    if r is None:
        n = len(t)
        if n == 0 or sum(t) % n:
            raise TypeInvalid(f"type {t} has no integral r")
        r = sum(t) // n
    t = _check_type(t, r)
    ts = sorted(t, reverse=True)
    return sum(ts[i] - ts[j] for i in range(len(ts)) for j in range(i + 1, len(ts)))


def diag_lattice_rows(R, t):
    n = len(t)
    return tuple(tuple(R.pi(t[i]) if i == j else R.zero for j in range(n)) for i in range(n))


def stabilizer_count(R, t):
    """Brute-force count of A in M_n(O_s) with L(t) A contained in L(t)."""
    n = len(t)
    F, s = R.F, R.s
    L = span_of_rows(R, diag_lattice_rows(R, t))
    rk = len(L)
    gens = diag_lattice_rows(R, t)
    count = 0
    elems = list(R.elements())
    for entries in product(elems, repeat=n * n):
        A = tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))
        ok = True
        for g in gens:
            img = flatten(R, vec_mat(R, g, A))
            if gf.rank(F, L + [img], n * s) != rk:
                ok = False
                break
        if ok:
            count += 1
    return count


def enumerate_ore_lattices(R, n, codim):
    """All left submodules of O_s^n of F_q-codimension `codim`, as OreLattice."""
    F, s = R.F, R.s
    out = []
    for d in _compositions(codim, n, s):
        for cand in _ore_candidates(R, n, d):
            dd, vecs = hermite(R, cand, n)
            if dd == d and tuple(vecs) == tuple(cand):
                basis = span_of_rows(R, cand)
                out.append(OreLattice(R, n, tuple(tuple(b) for b in basis), tuple(cand),
                                      elementary_divisors(R, [list(v) for v in cand])))
    return out


def _compositions(total, n, cap):
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(min(total, cap) + 1):
        for rest in _compositions(total - a, n - 1, cap):
            yield (a,) + rest


def _reduced_elements(R, d):
    """Canonical remainders modulo theta^d: coefficients below d only."""
    s = R.s
    for head in product(range(R.F.q), repeat=min(d, s)):
        yield tuple(head) + (0,) * (s - min(d, s))


def _ore_candidates(R, n, d):
    s = R.s
    # vector i: zeros after position i, pi^d[i] at i, entry j < i reduced mod pi^d[j]
    choices = []
    for i in range(n):
        if d[i] >= s:
            choices.append([(R.zero,) * n])
            continue
        per = []
        pos = list(range(i))
        for vals in product(*[list(_reduced_elements(R, d[j])) for j in pos]):
            v = [R.zero] * n
            for j, x in zip(pos, vals):
                v[j] = x
            v[i] = R.pi(d[i])
            per.append(tuple(v))
        choices.append(per)
    for combo in product(*choices):
        yield tuple(combo)
