"""Finite fields F_{p^m} with integer element codes, plus the linear algebra
the rest of the package leans on.

An element is an int in [0, p^m): its base-p digits are the coefficients of
its polynomial representative, lowest degree first.  All operations take a
FieldParams explicitly and are table driven (every supported field has at
most 81 elements).
"""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from functools import lru_cache
import itertools

from .errors import DivisionByZero, Inconsistent, ParamsMismatch, UnsupportedField

# Conway polynomials, coefficients c_0..c_m (monic).
CONWAY = {
    (2, 1): (1, 1),
    (2, 2): (1, 1, 1),
    (2, 3): (1, 1, 0, 1),
    (2, 4): (1, 1, 0, 0, 1),
    (2, 5): (1, 0, 1, 0, 0, 1),
    (2, 6): (1, 1, 0, 1, 1, 0, 1),
    (3, 1): (1, 1),
    (3, 2): (2, 2, 1),
    (3, 3): (1, 2, 0, 1),
    (3, 4): (2, 0, 0, 2, 1),
    (5, 1): (3, 1),
    (5, 2): (2, 4, 1),
    (7, 1): (4, 1),
    (7, 2): (3, 6, 1),
    (11, 1): (9, 1),
    (13, 1): (11, 1),
}

MAX_ORDER = 81
PRIMES = (2, 3, 5, 7, 11, 13)


def _polymod(a, mod, p):
    # a, mod: coefficient lists (low first) over F_p; mod monic
    a = list(a)
    dm = len(mod) - 1
    for i in range(len(a) - 1, dm - 1, -1):
        c = a[i] % p
        if c:
            for j in range(dm + 1):
                a[i - dm + j] = (a[i - dm + j] - c * mod[j]) % p
    r = [x % p for x in a[:dm]]
    return r


def is_irreducible(p, coeffs):
    """Brute-force irreducibility test for a monic polynomial over F_p."""
    m = len(coeffs) - 1
    if m < 1 or coeffs[-1] % p != 1:
        return False
    if m == 1:
        return True
    for d in range(1, m // 2 + 1):
        for tail in itertools.product(range(p), repeat=d):
            divisor = list(tail) + [1]
            if not any(_polymod(coeffs, divisor, p)):
                return False
    return True


def _code_to_coeffs(code, p, m):
    out = []
    for _ in range(m):
        code, r = divmod(code, p)
        out.append(r)
    return out


def _coeffs_to_code(coeffs, p):
    code = 0
    for c in reversed(coeffs):
        code = code * p + (c % p)
    return code


@dataclass(frozen=True)
class FieldParams:
    """Parameters of F_{p^m}; also carries precomputed operation tables."""

    p: int
    m: int
    modulus: tuple
    q: int = dc_field(init=False, compare=False, repr=False)
    _add: tuple = dc_field(init=False, compare=False, repr=False)
    _mul: tuple = dc_field(init=False, compare=False, repr=False)
    _neg: tuple = dc_field(init=False, compare=False, repr=False)
    _inv: tuple = dc_field(init=False, compare=False, repr=False)
    _frob: tuple = dc_field(init=False, compare=False, repr=False)

    def __post_init__(self):
        p, m = self.p, self.m
        if p not in PRIMES:
            raise UnsupportedField(f"p={p} is not a supported prime (2..13)")
        if m < 1 or p ** m > MAX_ORDER:
            raise UnsupportedField(f"p^m = {p}^{m} exceeds the supported size {MAX_ORDER}")
        mod = tuple(int(c) % p for c in self.modulus)
        object.__setattr__(self, "modulus", mod)
        if len(mod) != m + 1 or not is_irreducible(p, mod):
            raise UnsupportedField(f"modulus {mod} is not monic irreducible of degree {m} over F_{p}")
        q = p ** m
        object.__setattr__(self, "q", q)
        coeffs = [_code_to_coeffs(a, p, m) for a in range(q)]
        add = [0] * (q * q)
        mul = [0] * (q * q)
        for a in range(q):
            ca = coeffs[a]
            for b in range(q):
                cb = coeffs[b]
                add[a * q + b] = _coeffs_to_code([(x + y) % p for x, y in zip(ca, cb)], p)
                prod = [0] * (2 * m - 1)
                for i, x in enumerate(ca):
                    if x:
                        for j, y in enumerate(cb):
                            prod[i + j] += x * y
                mul[a * q + b] = _coeffs_to_code(_polymod(prod, mod, p), p)
        neg = [_coeffs_to_code([(-x) % p for x in coeffs[a]], p) for a in range(q)]
        inv = [0] * q
        for a in range(1, q):
            for b in range(1, q):
                if mul[a * q + b] == 1:
                    inv[a] = b
                    break
        frob = [0] * q
        for a in range(q):
            r = 1
            for _ in range(p):
                r = mul[r * q + a]
            frob[a] = r
        object.__setattr__(self, "_add", tuple(add))
        object.__setattr__(self, "_mul", tuple(mul))
        object.__setattr__(self, "_neg", tuple(neg))
        object.__setattr__(self, "_inv", tuple(inv))
        object.__setattr__(self, "_frob", tuple(frob))

    # element operations on integer codes
    def add(self, a, b):
        return self._add[a * self.q + b]

    def sub(self, a, b):
        return self._add[a * self.q + self._neg[b]]

    def neg(self, a):
        return self._neg[a]

    def mul(self, a, b):
        return self._mul[a * self.q + b]

    def inv(self, a):
        if a == 0:
            raise DivisionByZero("inverse of 0")
        return self._inv[a]

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def frob(self, a, e=1):
        """a^(p^e); negative e gives inverse Frobenius."""
        for _ in range(e % self.m):
            a = self._frob[a]
        return a

    def from_int(self, n):
        return n % self.p

    def elements(self):
        return range(self.q)

    def random(self, rng):
        return rng.randrange(self.q)

    def random_nonzero(self, rng):
        return rng.randrange(1, self.q)

    def to_json(self):
        return {"p": self.p, "m": self.m, "modulus": list(self.modulus)}

    def __str__(self):
        return f"F_{self.q}"


@lru_cache(maxsize=None)
def field(p, m=1):
    """The field F_{p^m} with its Conway-style modulus."""
    try:
        modulus = CONWAY[(p, m)]
    except KeyError:
        raise UnsupportedField(f"no modulus for p={p}, m={m} (need p <= 13, p^m <= 81)") from None
    return FieldParams(p, m, modulus)


def field_from_json(obj):
    F = FieldParams(int(obj["p"]), int(obj["m"]), tuple(obj["modulus"]))
    return field(F.p, F.m) if F.modulus == field(F.p, F.m).modulus else F


@dataclass(frozen=True)
class FieldElement:
    F: FieldParams
    code: int

    def __post_init__(self):
        if not 0 <= self.code < self.F.q:
            raise ValueError(f"code {self.code} out of range for {self.F}")

    def _check(self, other):
        if not isinstance(other, FieldElement) or other.F != self.F:
            raise ParamsMismatch("elements from different fields")

    def __add__(self, other):
        self._check(other)
        return FieldElement(self.F, self.F.add(self.code, other.code))

    def __sub__(self, other):
        self._check(other)
        return FieldElement(self.F, self.F.sub(self.code, other.code))

    def __mul__(self, other):
        self._check(other)
        return FieldElement(self.F, self.F.mul(self.code, other.code))

    def __neg__(self):
        return FieldElement(self.F, self.F.neg(self.code))

    def __pow__(self, e):
        return FieldElement(self.F, self.F.pow(self.code, e))

    def inverse(self):
        return FieldElement(self.F, self.F.inv(self.code))

    def __int__(self):
        return self.code


def ff_ops(a, b, op):
    """Field operation on FieldElements: op in {'add', 'mul', 'neg', 'inv'}."""
    if op == "neg":
        return -a
    if op == "inv":
        return a.inverse()
    if b is None:
        raise ValueError(f"{op} needs two operands")
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def frobenius(a, e):
    """a^(p^e) for a FieldElement (negative e is inverse Frobenius)."""
    return FieldElement(a.F, a.F.frob(a.code, e))


# ---------------------------------------------------------------------------
# linear algebra over F_q on lists of integer codes

def rref(F, rows, ncols=None):
    """Reduced row echelon form.  Returns (nonzero rows, pivot columns)."""
    M = [list(r) for r in rows]
    if ncols is None:
        ncols = len(M[0]) if M else 0
    piv = []
    r = 0
    for c in range(ncols):
        k = next((i for i in range(r, len(M)) if M[i][c]), None)
        if k is None:
            continue
        M[r], M[k] = M[k], M[r]
        inv = F.inv(M[r][c])
        if inv != 1:
            M[r] = [F.mul(inv, x) for x in M[r]]
        row = M[r]
        for i in range(len(M)):
            if i != r and M[i][c]:
                f = F.neg(M[i][c])
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], row)]
        piv.append(c)
        r += 1
        if r == len(M):
            break
    return [tuple(x) for x in M[:r]], piv


def rank(F, rows, ncols=None):
    return len(rref(F, rows, ncols)[1])


def nullspace(F, rows, ncols):
    """Basis of {x : A x = 0} where A has the given rows."""
    R, piv = rref(F, rows, ncols)
    free = [c for c in range(ncols) if c not in set(piv)]
    basis = []
    for f in free:
        v = [0] * ncols
        v[f] = 1
        for row, pc in zip(R, piv):
            if row[f]:
                v[pc] = F.neg(row[f])
        basis.append(tuple(v))
    return basis


def solve(F, rows, rhs, ncols):
    """One solution of A x = b, or None if inconsistent."""
    aug = [list(r) + [b] for r, b in zip(rows, rhs)]
    R, piv = rref(F, aug, ncols + 1)
    if ncols in piv:
        return None
    x = [0] * ncols
    for row, pc in zip(R, piv):
        x[pc] = row[ncols]
    return tuple(x)


def span_basis(F, vectors, ncols):
    """Canonical (reduced echelon) basis of the span of vectors."""
    return rref(F, vectors, ncols)[0]


def mat_mul(F, A, B):
    n, k, m = len(A), len(B), len(B[0]) if B else 0
    out = []
    for i in range(n):
        Ai = A[i]
        row = []
        for j in range(m):
            acc = 0
            for t in range(k):
                if Ai[t] and B[t][j]:
                    acc = F.add(acc, F.mul(Ai[t], B[t][j]))
            row.append(acc)
        out.append(tuple(row))
    return tuple(out)


def vec_mat(F, v, B):
    """Row vector times matrix."""
    m = len(B[0]) if B else 0
    out = [0] * m
    for a, row in zip(v, B):
        if a:
            for j, b in enumerate(row):
                if b:
                    out[j] = F.add(out[j], F.mul(a, b))
    return tuple(out)


def mat_add(F, A, B):
    return tuple(tuple(F.add(a, b) for a, b in zip(ra, rb)) for ra, rb in zip(A, B))


def mat_frob(F, A, e=1):
    """Entrywise Frobenius A^{[p^e]}."""
    return tuple(tuple(F.frob(a, e) for a in row) for row in A)


def identity(n):
    return tuple(tuple(1 if i == j else 0 for j in range(n)) for i in range(n))


def zeros(n, m=None):
    return tuple((0,) * (n if m is None else m) for _ in range(n))


def mat_inv(F, A):
    """Inverse of a square matrix, or None if singular."""
    n = len(A)
    aug = [list(A[i]) + list(identity(n)[i]) for i in range(n)]
    R, piv = rref(F, aug, n)
    if piv != list(range(n)):
        return None
    return tuple(tuple(R[i][n:]) for i in range(n))


def det(F, A):
    n = len(A)
    M = [list(r) for r in A]
    d = 1
    for c in range(n):
        k = next((i for i in range(c, n) if M[i][c]), None)
        if k is None:
            return 0
        if k != c:
            M[c], M[k] = M[k], M[c]
            d = F.neg(d)
        d = F.mul(d, M[c][c])
        inv = F.inv(M[c][c])
        for i in range(c + 1, n):
            if M[i][c]:
                f = F.neg(F.mul(M[i][c], inv))
                M[i] = [F.add(x, F.mul(f, y)) for x, y in zip(M[i], M[c])]
    return d


def random_matrix(F, rng, n, m=None):
    m = n if m is None else m
    return tuple(tuple(F.random(rng) for _ in range(m)) for _ in range(n))


def random_invertible(F, rng, n):
    while True:
        A = random_matrix(F, rng, n)
        if det(F, A):
            return A


# ---------------------------------------------------------------------------
# semilinear systems

@dataclass(frozen=True)
class SemilinearSolution:
    """Affine solution set: particular + prime-field span of kernel."""

    F: FieldParams
    n_unknowns: int
    particular: tuple
    kernel: tuple  # prime-field basis, each a tuple of field codes

    @property
    def prime_dimension(self):
        return len(self.kernel)

    def elements(self):
        """Enumerate every solution (small cases only)."""
        F, p = self.F, self.F.p
        for coeffs in itertools.product(range(p), repeat=len(self.kernel)):
            v = list(self.particular)
            for c, b in zip(coeffs, self.kernel):
                if c:
                    v = [F.add(x, F.mul(c, y)) for x, y in zip(v, b)]
            yield tuple(v)


def _prime_matrix(F, c, e):
    """m x m prime-field matrix (column k = image of x^k) of u -> c*u^(p^e)."""
    p, m = F.p, F.m
    cols = []
    for k in range(m):
        img = F.mul(c, F.frob(p ** k, e))
        cols.append(_code_to_coeffs(img, p, m))
    return [[cols[k][i] for k in range(m)] for i in range(m)]


def solve_semilinear(F, equations, n_unknowns):
    """Solve sum_j c_ij * u_j^(p^e_ij) = d_i over F_{p^m}.

    equations: iterable of (terms, rhs) with terms a list of
    (coefficient, unknown index, frobenius exponent).  The system is
    rewritten over F_p (each unknown becomes m prime-field coordinates) and
    solved there.  Raises Inconsistent when there is no solution.
    """
    p, m = F.p, F.m
    Fp = field(p, 1)
    ncols = n_unknowns * m
    rows, rhs = [], []
    for terms, d in equations:
        block = [[0] * ncols for _ in range(m)]
        for c, j, e in terms:
            if not c:
                continue
            P = _prime_matrix(F, c, e)
            for i in range(m):
                for k in range(m):
                    block[i][j * m + k] = (block[i][j * m + k] + P[i][k]) % p
        rows.extend(block)
        rhs.extend(_code_to_coeffs(d, p, m))
    if rows:
        x = solve(Fp, rows, rhs, ncols)
        if x is None:
            raise Inconsistent("semilinear system has no solution")
        ker = nullspace(Fp, rows, ncols)
    else:
        x = (0,) * ncols
        ker = [tuple(1 if t == i else 0 for t in range(ncols)) for i in range(ncols)]

    def pack(vec):
        return tuple(_coeffs_to_code(vec[j * m:(j + 1) * m], p) for j in range(n_unknowns))

    return SemilinearSolution(F, n_unknowns, pack(x), tuple(pack(v) for v in ker))
