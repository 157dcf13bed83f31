"""Restricted Lie algebra tools: Jacobson polynomials, a structure-constant
model of Lie(SL(n, W_J)), the beta map, weights, and the p-adic modular
action on the big cell of the lattice variety."""

from __future__ import annotations

from dataclasses import dataclass, field as dc_field
from itertools import product

from . import gf
from .errors import BlockSingular, NotInParabolic, UnsupportedP

SUPPORTED_P = (2, 3, 5, 7)


# ---------------------------------------------------------------------------
# Jacobson polynomials
#
# A word (z_1, ..., z_{p-1}) with letters "x"/"y" stands for the left-nested
# bracket [z_1, [z_2, ..., [z_{p-1}, x]...]].

@dataclass(frozen=True)
class JacobsonTable:
    p: int
    s: tuple  # s[i-1] is a dict word -> coefficient mod p

    def to_json(self):
        return {"p": self.p,
                "s": [[["".join(w), c] for w, c in sorted(si.items())] for si in self.s]}

    @staticmethod
    def word_str(word):
        out = "x"
        for z in reversed(word):
            out = f"[{z},{out}]"
        return out

    def evaluate(self, i, x, y, bracket, add, scale, zero):
        """s_i(x, y) with the given bracket and module operations."""
        acc = zero
        for word, c in self.s[i - 1].items():
            v = x
            for z in reversed(word):
                v = bracket(x if z == "x" else y, v)
            acc = add(acc, scale(c, v))
        return acc


def jacobson_polynomials(p):
    """Extract s_i from (ad(Tx + y))^(p-1)(x) = sum_i i s_i(x, y) T^(i-1)."""
    if p not in SUPPORTED_P:
        raise UnsupportedP(f"p={p} not in {SUPPORTED_P}")
    s = [dict() for _ in range(p - 1)]
    for word in product("xy", repeat=p - 1):
        if word[-1] == "x":  # innermost [x, x] = 0
            continue
        deg = word.count("x")  # power of T
        i = deg + 1
        inv_i = pow(i, -1, p)
        s[i - 1][word] = (s[i - 1].get(word, 0) + inv_i) % p
    return JacobsonTable(p, tuple({w: c for w, c in si.items() if c} for si in s))


def _mat_ops(F):
    def bracket(a, b):
        return gf.mat_add(F, gf.mat_mul(F, a, b), _mat_neg(F, gf.mat_mul(F, b, a)))

    def add(a, b):
        return gf.mat_add(F, a, b)

    def scale(c, a):
        c = F.from_int(c)
        return [[F.mul(c, x) for x in row] for row in a]
    return bracket, add, scale


def _mat_neg(F, A):
    return [[F.neg(x) for x in row] for row in A]


def _mat_pow(F, A, e):
    n = len(A)
    R = gf.identity(n)
    for _ in range(e):
        R = gf.mat_mul(F, R, A)
    return R


def restricted_check(p, trials, rng, m=1, n=None, pairs=None):
    """Jacobson's formula on random matrix pairs over F_{p^m}."""
    F = gf.field(p, m)
    n = n or (3 if p == 2 else 2)
    table = jacobson_polynomials(p)
    bracket, add, scale = _mat_ops(F)
    zero = gf.zeros(n)
    if pairs is None:
        pairs = ((gf.random_matrix(F, rng, n), gf.random_matrix(F, rng, n)) for _ in range(trials))
    for X, Y in pairs:
        lhs = _mat_pow(F, gf.mat_add(F, X, Y), p)
        rhs = gf.mat_add(F, _mat_pow(F, X, p), _mat_pow(F, Y, p))
        for i in range(1, p):
            rhs = add(rhs, table.evaluate(i, X, Y, bracket, add, scale, zero))
        if [list(r) for r in lhs] != [list(r) for r in rhs]:
            return False
    return True


# ---------------------------------------------------------------------------
# structure-constant model

def _roots(n):
    return [(i, j) for i in range(n) for j in range(n) if i != j]


@dataclass
class StructureConstantAlgebra:
    F: gf.FieldParams
    n: int
    J: int
    basis: list
    bracket_table: dict  # (a, b) -> {k: coeff}, a < b
    pmap_table: dict  # a -> {k: coeff}
    weights: list  # tuple in Z^n (multiple of e_i - e_j) per basis index
    sl_matrix: dict = dc_field(default_factory=dict)  # depth-0 index -> matrix
    jac: JacobsonTable = None

    @property
    def dim(self):
        return len(self.basis)

    @property
    def p(self):
        return self.F.p

    def index(self, sym):
        return self.basis.index(sym)

    # elements are tuples of field codes of length dim
    def zero(self):
        return (0,) * self.dim

    def unit(self, k, c=1):
        v = [0] * self.dim
        v[k] = c
        return tuple(v)

    def add(self, a, b):
        return tuple(self.F.add(x, y) for x, y in zip(a, b))

    def sub(self, a, b):
        return tuple(self.F.sub(x, y) for x, y in zip(a, b))

    def scale(self, c, a):
        c = self.F.from_int(c) if isinstance(c, int) and c < 0 else c
        return tuple(self.F.mul(c, x) for x in a)

    def bracket(self, a, b):
        F = self.F
        out = [0] * self.dim
        for i, x in enumerate(a):
            if not x:
                continue
            for j, y in enumerate(b):
                if not y or i == j:
                    continue
                if i < j:
                    entry, sign = self.bracket_table.get((i, j)), 1
                else:
                    entry, sign = self.bracket_table.get((j, i)), -1
                if not entry:
                    continue
                xy = F.mul(x, y)
                if sign < 0:
                    xy = F.neg(xy)
                for k, c in entry.items():
                    out[k] = F.add(out[k], F.mul(xy, c))
        return tuple(out)

    def pmap(self, a):
        """x^[p], folding Jacobson's formula over the basis expansion."""
        F = self.F
        acc = None
        acc_p = None
        for k, c in enumerate(a):
            if not c:
                continue
            term = self.unit(k, c)
            term_p = self.scale(F.frob(c, 1), self._pmap_basis(k))
            if acc is None:
                acc, acc_p = term, term_p
                continue
            corr = self.zero()
            for i in range(1, self.p):
                corr = self.add(corr, self.jac.evaluate(
                    i, acc, term, self.bracket, self.add, self._scale_int, self.zero()))
            acc_p = self.add(self.add(acc_p, term_p), corr)
            acc = self.add(acc, term)
        return acc_p if acc_p is not None else self.zero()

    def _scale_int(self, c, a):
        return self.scale(self.F.from_int(c), a)

    def _pmap_basis(self, k):
        v = [0] * self.dim
        for j, c in self.pmap_table.get(k, {}).items():
            v[j] = c
        return tuple(v)

    def ad_matrix(self, a):
        return [list(self.bracket(a, self.unit(k))) for k in range(self.dim)]

    def to_json(self):
        return {
            "basis": list(self.basis),
            "bracket": {f"{a},{b}": [[c, k] for k, c in sorted(v.items())]
                        for (a, b), v in sorted(self.bracket_table.items())},
            "pmap": {str(a): [[c, k] for k, c in sorted(v.items())]
                     for a, v in sorted(self.pmap_table.items())},
            "weights": {str(i): list(w) for i, w in enumerate(self.weights)},
        }

    # audits ---------------------------------------------------------------

    def audit_antisymmetry(self):
        for i in range(self.dim):
            ei = self.unit(i)
            if any(self.bracket(ei, ei)):
                return False
            for j in range(i + 1, self.dim):
                ej = self.unit(j)
                if self.add(self.bracket(ei, ej), self.bracket(ej, ei)) != self.zero():
                    return False
        return True

    def audit_jacobi(self):
        E = [self.unit(k) for k in range(self.dim)]
        for a, b, c in product(range(self.dim), repeat=3):
            x, y, z = E[a], E[b], E[c]
            t = self.add(self.add(self.bracket(x, self.bracket(y, z)),
                                  self.bracket(y, self.bracket(z, x))),
                         self.bracket(z, self.bracket(x, y)))
            if any(t):
                return False
        return True

    def audit_weights(self):
        E = [self.unit(k) for k in range(self.dim)]
        for a in range(self.dim):
            for b in range(self.dim):
                w = tuple(x + y for x, y in zip(self.weights[a], self.weights[b]))
                v = self.bracket(E[a], E[b])
                if any(c and self.weights[k] != w for k, c in enumerate(v)):
                    return False
            v = self._pmap_basis(a)
            w = tuple(self.p * x for x in self.weights[a])
            if any(c and self.weights[k] != w for k, c in enumerate(v)):
                return False
        return True

    def audit_pmap_semilinear(self, rng, trials=50):
        F = self.F
        for _ in range(trials):
            k = rng.randrange(self.dim)
            c = F.random(rng)
            if self.pmap(self.unit(k, c)) != self.scale(F.frob(c, 1), self._pmap_basis(k)):
                return False
        return True

    def audit_restricted(self):
        """ad(b^[p]) == ad(b)^p on the basis."""
        F = self.F
        for k in range(self.dim):
            A = self.ad_matrix(self.unit(k))
            lhs = self.ad_matrix(self._pmap_basis(k))
            if [list(r) for r in _mat_pow(F, A, self.p)] != lhs:
                return False
        return True

    def g0_indices(self):
        return sorted(self.sl_matrix)

    def g0_pclosed(self):
        """Is the depth-0 span closed under the [p]-table?  Reported, not asserted."""
        g0 = set(self.g0_indices())
        return all(set(self.pmap_table.get(k, {})) <= g0 for k in g0)


def build_ws_model(n, J, p, m=1):
    if p == 2:
        raise UnsupportedP("the model needs p > 2")
    if p not in SUPPORTED_P:
        raise UnsupportedP(f"p={p} not in {SUPPORTED_P}")
    F = gf.field(p, m)
    basis, weights, mats = [], [], {}

    def blank():
        return [[0] * n for _ in range(n)]

    def E(i, j):
        M = blank()
        M[i][j] = 1
        return M

    zero_w = (0,) * n
    for i in range(n - 1):
        basis.append(f"h{i + 1}")
        weights.append(zero_w)
        H = blank()
        H[i][i] = 1
        H[i + 1][i + 1] = F.neg(1)
        mats[len(basis) - 1] = H
    roots = _roots(n)
    for j in range(J):
        for (a, b) in roots:
            basis.append(f"X{a + 1}{b + 1}^{j}")
            w = [0] * n
            w[a] += p ** j
            w[b] -= p ** j
            weights.append(tuple(w))
            if j == 0:
                mats[len(basis) - 1] = E(a, b)
    for j in range(1, J):
        for i in range(n - 1):
            basis.append(f"Y{i + 1},{j}")
            weights.append(zero_w)
    idx = {sym: k for k, sym in enumerate(basis)}

    # express a traceless matrix in the depth-0 basis
    def decompose(M):
        v = {}
        for (a, b) in roots:
            if M[a][b]:
                v[idx[f"X{a + 1}{b + 1}^0"]] = M[a][b]
        # diagonal d = sum c_i h_i: c_1 = d_1, c_i = d_i + c_{i-1}
        c = 0
        for i in range(n - 1):
            c = F.add(M[i][i], c)
            if c:
                v[idx[f"h{i + 1}"]] = c
        if F.add(M[n - 1][n - 1], c) != 0:
            raise AssertionError("matrix is not traceless")
        return v

    bracket_table = {}
    g0 = sorted(mats)
    for x in g0:
        for y in g0:
            if x < y:
                A, B = mats[x], mats[y]
                C = gf.mat_add(F, gf.mat_mul(F, A, B), _mat_neg(F, gf.mat_mul(F, B, A)))
                v = decompose(C)
                if v:
                    bracket_table[(x, y)] = v
    pmap_table = {}
    for k, sym in enumerate(basis):
        if sym.startswith("h"):
            pmap_table[k] = {k: 1}
        elif sym.startswith("X"):
            root, j = sym[1:].split("^")
            j = int(j)
            if j + 1 < J:
                pmap_table[k] = {idx[f"X{root}^{j + 1}"]: 1}
        else:
            i, j = sym[1:].split(",")
            j = int(j)
            if j + 1 < J:
                pmap_table[k] = {idx[f"Y{i},{j + 1}"]: 1}
    model = StructureConstantAlgebra(F, n, J, basis, bracket_table, pmap_table, weights,
                                     mats, jacobson_polynomials(p))
    model.decompose = decompose
    return model


def beta_map(model, x):
    """x^[p] - sigma(classical p-th power of the depth-0 part of x)."""
    F = model.F
    M = gf.zeros(model.n)
    for k, c in enumerate(x):
        if c and k in model.sl_matrix:
            M = gf.mat_add(F, M, [[F.mul(c, e) for e in row] for row in model.sl_matrix[k]])
    classical = model.decompose(_mat_pow(F, M, model.p))
    out = list(model.pmap(x))
    for k, c in classical.items():
        out[k] = F.sub(out[k], c)
    return tuple(out)


def random_g0_element(model, rng):
    v = [0] * model.dim
    for k in model.g0_indices():
        v[k] = model.F.random(rng)
    return tuple(v)


# ---------------------------------------------------------------------------
# weights

@dataclass(frozen=True)
class Character:
    c: int  # multiple of the first fundamental weight

    def __str__(self):
        return f"{self.c}*lambda_1"


def canonical_weight(n, r, p, variant="mixed"):
    """Returns (Character, filtration terms).  Both variants are computed so
    the non-isomorphism witness can be asserted."""
    if n < 2 or r < 1:
        raise ValueError("need n >= 2 and r >= 1")
    terms = [-n * p ** j for j in range(n * r)]
    mixed = -n * (p ** (n * r) - 1) // (p - 1)
    if sum(terms) != mixed:
        raise AssertionError("filtration sum disagrees with closed form")
    equal_char = -n
    if n * r > 1 and mixed == equal_char:
        raise AssertionError("variants should differ")
    if variant == "mixed":
        return Character(mixed), tuple(terms)
    if variant == "equal_char":
        return Character(equal_char), (equal_char,)
    raise ValueError(f"unknown variant {variant!r}")


# ---------------------------------------------------------------------------
# parabolic factorization and the modular action over W_N(F_q), matrices as
# lists of rows of Galois-ring elements

def _gr_mat_mul(R, A, B):
    return [[_gr_dot(R, row, [B[k][j] for k in range(len(B))]) for j in range(len(B[0]))] for row in A]


def _gr_dot(R, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = R.add(acc, R.mul(x, y))
    return acc


def _gr_mat_inv(R, A):
    """Inverse over the local ring, or None if A is singular mod p."""
    n = len(A)
    M = [list(A[i]) + [1 if i == j else 0 for j in range(n)] for i in range(n)]
    for c in range(n):
        piv = next((r for r in range(c, n) if R.is_unit(M[r][c])), None)
        if piv is None:
            return None
        M[c], M[piv] = M[piv], M[c]
        u = R.inv(M[c][c])
        M[c] = [R.mul(u, x) for x in M[c]]
        for r in range(n):
            if r != c and M[r][c]:
                f = M[r][c]
                M[r] = [R.sub(x, R.mul(f, y)) for x, y in zip(M[r], M[c])]
    return [row[n:] for row in M]


def _blocks(X):
    n = len(X)
    return X[0][0], [X[0][1:]], [[X[i][0]] for i in range(1, n)], [row[1:] for row in X[1:]]


def in_parabolic(R, X):
    return all(R.valuation(x) >= 1 for x in X[0][1:])


def parabolic_factor(R, X):
    """X = U P with U unipotent of first row (1, X12 X22^-1) and P in P_r."""
    n = len(X)
    if not in_parabolic(R, X):
        raise NotInParabolic("first row is not (a, p*...)")
    x11, X12, X21, X22 = _blocks(X)
    X22i = _gr_mat_inv(R, X22)
    if X22i is None:
        raise BlockSingular("lower-right block is not invertible")
    w = _gr_mat_mul(R, X12, X22i)[0]
    U = [[1] + list(w)] + [[0] + [1 if i == j else 0 for j in range(n - 1)] for i in range(n - 1)]
    corr = _gr_mat_mul(R, [w], X21)[0][0]
    P = [[R.sub(x11, corr)] + [0] * (n - 1)] + [list(r) for r in X[1:]]
    return U, P


def modular_action(R, X, u):
    """X . u = (x11 u + X12)(X21 u + X22)^-1 for a row u over pW."""
    if not in_parabolic(R, X):
        raise NotInParabolic("first row is not (a, p*...)")
    if any(R.valuation(x) < 1 for x in u):
        raise NotInParabolic("u must lie in pW")
    x11, X12, X21, X22 = _blocks(X)
    top = [R.add(R.mul(x11, a), b) for a, b in zip(u, X12[0])]
    bottom = [[R.add(R.mul(X21[i][0], u[j]), X22[i][j]) for j in range(len(u))]
              for i in range(len(u))]
    bi = _gr_mat_inv(R, bottom)
    if bi is None:
        raise BlockSingular("X21 u + X22 is not invertible")
    return tuple(_gr_mat_mul(R, [top], bi)[0])


def random_parabolic(R, rng, n):
    """Random invertible matrix in P (first row (a, p*...))."""
    while True:
        X = [[R.random(rng) for _ in range(n)] for _ in range(n)]
        for j in range(1, n):
            X[0][j] = R.mul_p(X[0][j])
        if _gr_mat_inv(R, X) is not None:
            return X
