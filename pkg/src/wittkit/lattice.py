"""Lattices in W_s(F_q)^n: determinants, bases of given discriminant,
Smith and Hermite forms, enumeration, tangent spaces and deformations.

Matrices are stored column-major as in the basis picture: column j is the
basis vector u_j.  Internally finite-field computations run on Galois-ring
ints (see witt.GaloisRing) in row-major lists.
"""

from __future__ import annotations

from collections import Counter
from dataclasses import dataclass, field as dc_field
from itertools import permutations, product
from typing import Callable

from . import gf
from .chain import elementary_divisors, hermite, smith
from .errors import (HypothesisViolated, NotABasis, ParamsMismatch, RankDeficit,
                     SizeGuard, TruncationTooShort, WittkitError)
from .gf import FieldParams
from .witt import (WittRing, WittVector, dual_numbers, generate_structure_polynomials,
                   polynomial_ring, poly_eval)

ENUM_LIMIT = 2 ** 20


# ---------------------------------------------------------------------------
# matrices

@dataclass(frozen=True)
class WittMatrix:
    ring: WittRing
    cols: tuple  # cols[j][i] is the entry in row i, column j

    @property
    def n(self):
        return len(self.cols)

    @property
    def s(self):
        return self.ring.s

    def entry(self, i, j):
        return self.cols[j][i]

    def rows(self):
        return tuple(tuple(self.cols[j][i] for j in range(self.n)) for i in range(self.n))

    def column(self, j):
        return self.cols[j]

    @classmethod
    def from_rows(cls, W, rows):
        n = len(rows)
        return cls(W, tuple(tuple(rows[i][j] for i in range(n)) for j in range(n)))

    @classmethod
    def from_gr_rows(cls, W, rows):
        n = len(rows)
        gr = W.gr
        return cls(W, tuple(tuple(W.from_gr(rows[i][j]) for i in range(n)) for j in range(n)))

    @classmethod
    def from_gr_cols(cls, W, cols):
        return cls(W, tuple(tuple(W.from_gr(x) for x in c) for c in cols))

    def gr_rows(self):
        return [[x.to_gr() for x in row] for row in self.rows()]

    def gr_cols(self):
        return tuple(tuple(x.to_gr() for x in c) for c in self.cols)

    def __matmul__(self, other):
        if other.ring != self.ring:
            raise ParamsMismatch("matrices over different rings")
        W = self.ring
        gr = W.gr
        A, B = self.gr_rows(), other.gr_rows()
        return WittMatrix.from_gr_rows(W, _gr_matmul(gr, A, B))

    def apply(self, v):
        """U x for a column x of WittVectors."""
        W = self.ring
        gr = W.gr
        out = _gr_matvec(gr, self.gr_rows(), [x.to_gr() for x in v])
        return tuple(W.from_gr(x) for x in out)

    def to_json(self):
        return {"n": self.n, "s": self.s,
                "entries": [[list(x.digits) for x in c] for c in self.cols]}

    @classmethod
    def from_json(cls, obj, F):
        W = WittRing(F, int(obj["s"]))
        return cls(W, tuple(tuple(W.vector(d) for d in c) for c in obj["entries"]))


def diagonal(W, exps):
    n = len(exps)
    rows = [[W.gr.pi(exps[i]) if i == j else 0 for j in range(n)] for i in range(n)]
    return WittMatrix.from_gr_rows(W, rows)


def _gr_matmul(gr, A, B):
    n, k, m = len(A), len(B), len(B[0])
    out = []
    for i in range(n):
        row = []
        for j in range(m):
            acc = 0
            for t in range(k):
                if A[i][t] and B[t][j]:
                    acc = gr.add(acc, gr.mul(A[i][t], B[t][j]))
            row.append(acc)
        out.append(row)
    return out


def _gr_matvec(gr, A, v):
    out = []
    for row in A:
        acc = 0
        for a, x in zip(row, v):
            if a and x:
                acc = gr.add(acc, gr.mul(a, x))
        out.append(acc)
    return out


def _perm_sign(perm):
    sign, seen = 1, [False] * len(perm)
    for i in range(len(perm)):
        if not seen[i]:
            j, ln = i, 0
            while not seen[j]:
                seen[j] = True
                j = perm[j]
                ln += 1
            if ln % 2 == 0:
                sign = -sign
    return sign


def _det(M, add, sub, mul, zero, one):
    """Leibniz expansion; n is small everywhere this is used."""
    n = len(M)
    acc = zero
    for perm in permutations(range(n)):
        term = one
        for i in range(n):
            term = mul(term, M[i][perm[i]])
        acc = add(acc, term) if _perm_sign(perm) > 0 else sub(acc, term)
    return acc


def gr_det(gr, M):
    return _det(M, gr.add, gr.sub, gr.mul, 0, 1)


def witt_det(rows):
    """Determinant of a grid of WittVectors over any coefficient ring."""
    W = rows[0][0].ring
    return _det(rows, lambda a, b: a + b, lambda a, b: a - b, lambda a, b: a * b,
                W.zero(), W.one())


# ---------------------------------------------------------------------------
# determinant digits and bases of given discriminant

@dataclass(frozen=True)
class DeterminantDigits:
    delta: tuple
    eta: tuple | None = None  # eta[j] = digits of det with column j replaced by v

    def valuation(self):
        return _first_nonzero(self.delta)

    def eta_valuations(self):
        return tuple(_first_nonzero(row) for row in self.eta)


def _first_nonzero(digits, zero=0):
    for i, d in enumerate(digits):
        if d != zero:
            return i
    return len(digits)


def determinant_digits(U, v=None):
    W = U.ring
    if v is not None:
        if len(v) != U.n or any(x.ring != W for x in v):
            raise ParamsMismatch("extra column does not match the matrix")
    rows = U.rows()
    if W.is_finite:
        gr = W.gr
        R = [[x.to_gr() for x in r] for r in rows]
        delta = gr.to_digits(gr_det(gr, R))
        eta = None
        if v is not None:
            vg = [x.to_gr() for x in v]
            eta = []
            for j in range(U.n):
                Rj = [r[:j] + [vg[i]] + r[j + 1:] for i, r in enumerate(R)]
                eta.append(gr.to_digits(gr_det(gr, Rj)))
            eta = tuple(eta)
        return DeterminantDigits(tuple(delta), eta)
    delta = witt_det(rows).digits
    eta = None
    if v is not None:
        eta = []
        for j in range(U.n):
            Rj = [r[:j] + (v[i],) + r[j + 1:] for i, r in enumerate(rows)]
            eta.append(witt_det(Rj).digits)
        eta = tuple(eta)
    return DeterminantDigits(tuple(delta), eta)


def is_discriminant_basis(U, nr):
    if U.s <= nr:
        raise TruncationTooShort(f"need s >= nr + 1, got s={U.s}, nr={nr}")
    delta = determinant_digits(U).delta
    return all(d == 0 for d in delta[:nr]) and delta[nr] != 0


def membership_solve(U, v, nr):
    """Coefficients x with U x = v, or None if v is not in the span.

    Membership is decided by the replaced-column determinants (all of
    valuation >= nr).  Coefficients are then produced through the Smith form,
    which gives an honest solution in W_s (Cramer's quotient only pins x
    modulo p^(s-nr)).
    """
    if not is_discriminant_basis(U, nr):
        raise NotABasis("matrix is not a base of the requested discriminant")
    W = U.ring
    gr = W.gr
    dd = determinant_digits(U, v)
    if any(val < nr for val in dd.eta_valuations()):
        return None
    ords, A, B, _ = smith(gr, U.gr_rows())
    Av = _gr_matvec(gr, A, [x.to_gr() for x in v])
    y = []
    for a, r in zip(Av, ords):
        if gr.valuation(a) < r:
            raise WittkitError("determinant criterion and Smith solve disagree")
        y.append(gr.div_p(a, r) if r < W.s else 0)
    x = _gr_matvec(gr, B, y)
    if _gr_matvec(gr, U.gr_rows(), x) != [t.to_gr() for t in v]:
        raise WittkitError("membership solution does not reproduce v")
    return tuple(W.from_gr(t) for t in x)


def transition_matrix(U, U2, nr):
    """X with U X = U2 solved column by column, or None."""
    cols = []
    for j in range(U2.n):
        x = membership_solve(U, U2.column(j), nr)
        if x is None:
            return None
        cols.append(x)
    return WittMatrix(U.ring, tuple(cols))


def sample_open_cell(n, nr, rng, F):
    """Random base of discriminant nr on the open set where the lower-right
    (n-1)-minor gamma is a unit; u_11 is solved for so that the determinant
    equals p^nr [t^(p^-nr)] for a random t != 0."""
    s = nr + 1
    W = WittRing(F, s)
    gr = W.gr
    for _ in range(1000):
        t = F.random_nonzero(rng)
        target = gr.from_digits(tuple(t if i == nr else 0 for i in range(s)))
        if n == 1:
            return WittMatrix.from_gr_rows(W, [[target]])
        M = [[gr.random(rng) for _ in range(n)] for _ in range(n)]
        gamma = gr_det(gr, [row[1:] for row in M[1:]])
        if not gr.is_unit(gamma):
            continue
        rest = 0
        for j in range(1, n):
            minor = gr_det(gr, [row[:j] + row[j + 1:] for row in M[1:]])
            term = gr.mul(M[0][j], minor)
            rest = gr.add(rest, term) if j % 2 == 0 else gr.sub(rest, term)
        M[0][0] = gr.mul(gr.inv(gamma), gr.sub(target, rest))
        return WittMatrix.from_gr_rows(W, M)
    raise WittkitError("could not sample a unit minor in 1000 attempts")


# ---------------------------------------------------------------------------
# Smith and Hermite forms

def smith_form(U):
    """(type, A, B) with A U B diagonal; type sorted nonincreasing."""
    W = U.ring
    ords, A, B, _ = smith(W.gr, U.gr_rows())
    t = tuple(sorted(list(ords) + [W.s] * (U.n - len(ords)), reverse=True))
    return t, WittMatrix.from_gr_rows(W, A), WittMatrix.from_gr_rows(W, B)


@dataclass(frozen=True)
class Lattice:
    ring: WittRing
    key: tuple          # Hermite generator columns as Galois-ring ints
    pivots: tuple
    type: tuple
    colength: int

    @property
    def n(self):
        return len(self.key)

    @property
    def span(self):
        return WittMatrix.from_gr_cols(self.ring, self.key)

    def gr_rows(self):
        n = self.n
        return [[self.key[j][i] for j in range(n)] for i in range(n)]

    def to_json(self):
        out = self.span.to_json()
        out["type"] = list(self.type)
        out["colength"] = self.colength
        return out


def lattice_from_vectors(W, vectors, n):
    """Lattice spanned by arbitrary generator columns (Galois-ring ints)."""
    gr = W.gr
    d, vecs = hermite(gr, [tuple(v) for v in vectors], n)
    rows = [[vecs[j][i] for j in range(n)] for i in range(n)]
    return Lattice(W, tuple(vecs), d, elementary_divisors(gr, rows), sum(d))


def diagonal_lattice(t, F, s):
    """The lattice spanned by p^t_j e_j in W_s(F)^n."""
    W = WittRing(F, s)
    gr = W.gr
    n = len(t)
    cols = [tuple(gr.pi(t[j]) if i == j else 0 for i in range(n)) for j in range(n)]
    return lattice_from_vectors(W, cols, n)


def canonical_form(U, allow_degenerate=False):
    """Hermite form of the column span of U.

    With allow_degenerate the span is treated as a submodule of W_s^n even
    when det U has valuation >= s; the form is still canonical for that
    submodule.
    """
    W = U.ring
    if not allow_degenerate and W.gr.valuation(gr_det(W.gr, U.gr_rows())) >= W.s:
        raise TruncationTooShort("determinant vanishes in W_s; the truncation does not "
                                 "determine the lattice")
    return lattice_from_vectors(W, U.gr_cols(), U.n)


def span_set(W, vectors, n):
    """Every element of the W_s-span of the vectors (small cases only)."""
    gr = W.gr
    scalars = range(gr.size)
    elems = {(0,) * n}
    for v in vectors:
        multiples = {tuple(gr.mul(c, x) for x in v) for c in scalars}
        elems = {tuple(gr.add(a, b) for a, b in zip(e, m)) for e in elems for m in multiples}
    return frozenset(elems)


def _reduced_gr(gr, d):
    """Galois-ring ints whose coefficients all lie in [0, p^d)."""
    top = gr.p ** min(d, gr.s)
    for coeffs in product(range(top), repeat=gr.m):
        yield gr.encode(coeffs)


def _hermite_candidates(gr, n, d):
    s = gr.s
    choices = []
    for i in range(n):
        if d[i] >= s:
            choices.append([(0,) * n])
            continue
        per = []
        for vals in product(*[list(_reduced_gr(gr, d[j])) for j in range(i)]):
            per.append(tuple(vals) + (gr.pi(d[i]),) + (0,) * (n - i - 1))
        choices.append(per)
    return product(*choices)


def _compositions(total, n, cap):
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(min(total, cap) + 1):
        for rest in _compositions(total - a, n - 1, cap):
            yield (a,) + rest


def enumerate_lattices(n, colength, F, s, method="hermite"):
    """All W_s(F_q)-submodules of W_s(F_q)^n of the given colength.

    method="hermite" walks every Hermite-shaped candidate and keeps the ones
    that are their own canonical form; method="closure" grows submodules by
    adding one vector at a time and closing under the ring action (a slow
    independent oracle).
    """
    if F.q ** (n * s) > ENUM_LIMIT:
        raise SizeGuard(f"q^(n s) = {F.q}^{n * s} exceeds {ENUM_LIMIT}")
    W = WittRing(F, s)
    gr = W.gr
    if method == "closure":
        return _enumerate_by_closure(W, n, colength)
    out = []
    for d in _compositions(colength, n, s):
        for cand in _hermite_candidates(gr, n, d):
            dd, vecs = hermite(gr, cand, n)
            if dd == d and vecs == cand:
                rows = [[cand[j][i] for j in range(n)] for i in range(n)]
                out.append(Lattice(W, cand, d, elementary_divisors(gr, rows), colength))
    return out


def _enumerate_by_closure(W, n, colength):
    gr = W.gr
    total = gr.size ** n
    target = total // (W.base.q ** colength)
    everything = list(product(range(gr.size), repeat=n))
    seen = {}
    frontier = [(frozenset([(0,) * n]), ())]
    seen[frontier[0][0]] = ()
    while frontier:
        nxt = []
        for S, gens in frontier:
            for v in everything:
                if v in S:
                    continue
                multiples = {tuple(gr.mul(c, x) for x in v) for c in range(gr.size)}
                T = frozenset(tuple(gr.add(a, b) for a, b in zip(e, m)) for e in S for m in multiples)
                if T not in seen and len(T) <= target:
                    seen[T] = gens + (v,)
                    nxt.append((T, gens + (v,)))
        frontier = nxt
    out = []
    for S, gens in seen.items():
        if len(S) == target:
            L = lattice_from_vectors(W, gens, n) if gens else lattice_from_vectors(W, [], n)
            out.append((S, L))
    return out


def count_lattices_by_type(n, colength, F):
    """Counter of lattice types among lattices of the given colength.

    Runs at s = colength + 1 where every Hermite-shaped candidate is already
    canonical, so the count needs no closure test.  Returns (counter, states)
    with states = q^(n * colength), the size of F / p^colength F.
    """
    states = F.q ** (n * colength)
    if states > ENUM_LIMIT:
        raise SizeGuard(f"{states} states exceed {ENUM_LIMIT}")
    W = WittRing(F, colength + 1)
    gr = W.gr
    counts = Counter()
    for d in _compositions(colength, n, colength):
        for cand in _hermite_candidates(gr, n, d):
            rows = [[cand[j][i] for j in range(n)] for i in range(n)]
            counts[elementary_divisors(gr, rows)] += 1
    return counts, states


# ---------------------------------------------------------------------------
# tangent spaces

@dataclass(frozen=True)
class TangentReport:
    basis: tuple
    theta_closed: bool
    n: int
    s: int

    @property
    def dim(self):
        return len(self.basis)


def theta_coords(F, v, n, s):
    """Frobenius shift on each block of s digit coordinates."""
    out = [0] * (n * s)
    for i in range(n):
        for l in range(s - 1):
            out[i * s + l + 1] = F.frob(v[i * s + l], 1)
    return tuple(out)


def _theta_closed(F, basis, n, s):
    B = [list(b) for b in basis]
    r = len(B)
    for b in basis:
        if gf.rank(F, B + [list(theta_coords(F, b, n, s))], n * s) != r:
            return False
    return True


def lie_algebra(L):
    """Tangent space at the origin of L as a closed subgroup of W_s^n.

    With A U B = diag(p^r_i) the quotient map F -> F/L is x -> (A x)_i mod
    p^r_i, and its differential on a tangent vector with digit coordinates
    v_(j,l) is sum_j res(A_ij)^(p^l) v_(j,l) in digit l < r_i.  The tangent
    space of L is the kernel.
    """
    W = L.ring
    F, gr, n, s = W.base, W.gr, L.n, W.s
    ords, A, _, _ = smith(gr, L.gr_rows())
    eqs = []
    for i, r in enumerate(ords):
        res = [gr.residue(a) for a in A[i]]
        for l in range(min(r, s)):
            row = [0] * (n * s)
            for j in range(n):
                row[j * s + l] = F.frob(res[j], l)
            eqs.append(row)
    basis = tuple(gf.span_basis(F, gf.nullspace(F, eqs, n * s), n * s)) if eqs else \
        tuple(tuple(1 if k == c else 0 for k in range(n * s)) for c in range(n * s))
    return TangentReport(basis, _theta_closed(F, basis, n, s), n, s)


def lie_algebra_eta(U, colength):
    """Kernel of the linear parts of eta_(j,i)(U, x), i < colength.

    This is the tangent space of the scheme cut out by the replaced-column
    determinant equations, computed over W_s(F_q[eps]/eps^2).  Kept as a
    diagnostic: the equations are not reduced, so this space can be larger
    than the tangent space of the lattice.
    """
    W = U.ring
    F, n, s = W.base, U.n, W.s
    if colength > s:
        raise TruncationTooShort(f"colength {colength} needs s >= {colength}, got s={s}")
    D = dual_numbers(F)
    We = WittRing(D, s)
    rows = [[We.vector(tuple((d, 0) for d in x.digits)) for x in r] for r in U.rows()]
    cols = []
    for j in range(n):
        for l in range(s):
            v = [We.zero()] * n
            v[j] = We.vector(tuple((0, 1 if k == l else 0) for k in range(s)))
            col = []
            for jj in range(n):
                Rj = [r[:jj] + [v[i]] + r[jj + 1:] for i, r in enumerate(rows)]
                dig = witt_det(Rj).digits
                col.extend(dig[i][1] for i in range(colength))
            cols.append(col)
    J = [[cols[c][k] for c in range(n * s)] for k in range(len(cols[0]))]
    basis = tuple(gf.span_basis(F, gf.nullspace(F, J, n * s), n * s))
    return TangentReport(basis, _theta_closed(F, basis, n, s), n, s)


# ---------------------------------------------------------------------------
# Hom dimension

@dataclass(frozen=True)
class HomConstraintSystem:
    sources: tuple      # (component, weight exponent)
    targets: tuple      # (component, theta degree)
    unknowns: tuple     # (source index, target index, frobenius exponent w)
    equations: tuple    # semilinear equations as accepted by gf.solve_semilinear
    window: int


def hom_constraint_system(L):
    """Maps from the invariant parameters of L/pL into Lie(F/L).

    A source coordinate of weight p^a may go to a target coordinate of
    weight p^j through c * x^(p^w) with |w| <= nr; matching the diagonal
    torus weights forces a + w = j.  Multiplication by p acts as zero on
    both sides, so compatibility with it adds no rows, and a p-polynomial
    in one variable is additive, so additivity adds none either.
    """
    W = L.ring
    nr = L.colength
    if W.s != nr:
        raise TruncationTooShort(f"hom_dimension runs at s = nr (got s={W.s}, nr={nr})")
    t = L.type
    sources = tuple((i, a) for i, a in enumerate(t) if a < nr)
    targets = tuple((i, j) for i, a in enumerate(t) for j in range(a))
    unknowns = tuple((si, ti, w) for si in range(len(sources)) for ti in range(len(targets))
                     for w in range(-nr, nr + 1))
    eqs = []
    for k, (si, ti, w) in enumerate(unknowns):
        if sources[si][1] + w != targets[ti][1]:
            eqs.append(([(1, k, 0)], 0))
    return HomConstraintSystem(sources, targets, unknowns, tuple(eqs), nr)


def hom_dimension(L):
    sysm = hom_constraint_system(L)
    F = L.ring.base
    sol = gf.solve_semilinear(F, sysm.equations, len(sysm.unknowns))
    assert sol.prime_dimension % F.m == 0
    return sol.prime_dimension // F.m


def hom_map_count(L):
    """Brute-force count of additive maps (L/pL)(F_q) -> Lie(F/L)(F_q).

    L/pL is built from the actual elements of L; the target has q^colength
    points.  p kills both groups, so every additive map commutes with the
    W-action.  Only for tiny cases: |target|^|source| functions are tried.
    """
    W = L.ring
    gr, n = W.gr, L.n
    elems = span_set(W, L.key, n)
    pL = frozenset(tuple(gr.mul_p(x) for x in e) for e in elems)
    # coset representatives of L/pL
    reps, covered = [], set()
    for e in sorted(elems):
        if e in covered:
            continue
        reps.append(e)
        covered.update(tuple(gr.add(a, b) for a, b in zip(e, z)) for z in pL)
    idx = {}
    for k, e in enumerate(reps):
        for z in pL:
            idx[tuple(gr.add(a, b) for a, b in zip(e, z))] = k
    size_t = W.base.q ** L.colength
    Fq = W.base
    # target group: F_q^colength with coordinatewise addition
    tgt = list(product(range(Fq.q), repeat=L.colength))
    add_t = {(a, b): tuple(Fq.add(x, y) for x, y in zip(tgt[a], tgt[b]))
             for a in range(size_t) for b in range(size_t)}
    tidx = {v: k for k, v in enumerate(tgt)}
    add_s = [[idx[tuple(gr.add(a, b) for a, b in zip(reps[i], reps[j]))]
              for j in range(len(reps))] for i in range(len(reps))]
    count = 0
    for f in product(range(size_t), repeat=len(reps)):
        if all(tidx[add_t[f[i], f[j]]] == f[add_s[i][j]]
               for i in range(len(reps)) for j in range(i, len(reps))):
            count += 1
    return count, len(reps)


# ---------------------------------------------------------------------------
# additive characters

@dataclass(frozen=True)
class AdditiveCharacterBasis:
    """Each character is a list of (component, digit, frobenius exponent, coefficient)."""
    field: FieldParams
    s: int
    alpha: tuple
    characters: tuple

    def evaluate(self, char, x):
        """x: tuple of digit tuples, one per component."""
        F = self.field
        acc = 0
        for i, l, e, c in char:
            acc = F.add(acc, F.mul(c, F.frob(x[i][l], e)))
        return acc


def _frob_poly_terms(poly, e, p):
    """Terms of poly^(p^e) for poly with F_p coefficients."""
    k = p ** e
    return [(c, tuple(x * k for x in ex)) for c, ex in poly]


def _character_equations(p, t):
    """Semilinear equations on c_0..c_{t-1} for x -> sum c_l x_l^(p^-l) on W_t."""
    tab = generate_structure_polynomials(p, t)
    top = t - 1
    rows = {}

    def put(key, l, coef):
        rows.setdefault(key, {})
        rows[key][l] = (rows[key].get(l, 0) + coef) % p

    for l in range(t):
        e = top - l
        for c, ex in _frob_poly_terms(tab.add_polys[l], e, p):
            put(("a", ex), l, c)
        for var in (l, t + l):
            ex = [0] * (2 * t)
            ex[var] = p ** e
            put(("a", tuple(ex)), l, -1)
        for c, ex in _frob_poly_terms(tab.mul_polys[l], e, p):
            put(("m", ex), l, c)
        ex = [0] * (2 * t)
        ex[0] = p ** top
        ex[t + l] = p ** e
        put(("m", tuple(ex)), l, -1)
    eqs = []
    for key, coeffs in rows.items():
        terms = [(c % p, l, top) for l, c in coeffs.items() if c % p]
        if terms:
            eqs.append((terms, 0))
    return eqs


def additive_characters(alpha, s, F):
    """Additive W-linear maps L -> G_a for L = sum_i p^alpha_i W_s e_i.

    Ansatz per component (W_t with t = s - alpha_i, coordinates y_l of
    y = x / p^alpha_i): sum_l c_l y_l^(p^-l).  The additivity identity and
    linearity over W (acting on G_a through W -> k) are imposed through the
    structure polynomials after a Frobenius twist clears the roots.
    """
    chars = []
    for i, a in enumerate(alpha):
        t = s - a
        if t <= 0:
            continue
        eqs = _character_equations(F.p, t)
        sol = gf.solve_semilinear(F, eqs, t)
        basis = gf.span_basis(F, [list(v) for v in sol.kernel], t)
        for v in basis:
            chars.append(tuple((i, a + l, -(a + l), c) for l, c in enumerate(v) if c))
    return AdditiveCharacterBasis(F, s, tuple(alpha), tuple(chars))


# ---------------------------------------------------------------------------
# deformation families

@dataclass(frozen=True)
class ParametricFamily:
    field: FieldParams
    s: int
    build: Callable     # t (field code) -> WittMatrix
    generic_type: tuple
    special_type: tuple
    params: dict = dc_field(default_factory=dict)

    def fiber(self, t):
        return self.build(t)

    def fiber_type(self, t):
        return smith_form(self.build(t))[0]

    def verify(self):
        F = self.field
        ok = self.fiber_type(0) == self.special_type
        return ok and all(self.fiber_type(t) == self.generic_type for t in range(1, F.q))


def _sorted_type(t):
    return tuple(sorted(t, reverse=True))


def specialization_path(generic, i, j, F, s=None):
    """Family whose fibre at t != 0 has type `generic` and at t = 0 the type
    with one box moved from part i to part j.

    The special base is diag(p^r) with r_i = g_i - 1, r_j = g_j + 1, and
    its j-th column is deformed to p^r_j e_j + [t] p^(r_j - 1) e_i.
    """
    g = tuple(generic)
    n = len(g)
    if not (0 <= i < n and 0 <= j < n and i != j) or g[i] < g[j] + 2:
        raise HypothesisViolated("moving a box needs g_i >= g_j + 2")
    nr = sum(g)
    s = nr + 1 if s is None else s
    r = list(g)
    r[i] -= 1
    r[j] += 1
    W = WittRing(F, s)
    gr = W.gr

    def build(t):
        rows = [[gr.pi(r[a]) if a == b else 0 for b in range(n)] for a in range(n)]
        rows[i][j] = gr.mul(gr.teich(t), gr.pi(r[j] - 1))
        return WittMatrix.from_gr_rows(W, rows)

    return ParametricFamily(F, s, build, _sorted_type(g), _sorted_type(r),
                            {"kind": "path", "i": i, "j": j, "generic": g})


def specialization_chain(n, nr):
    """Edges (generic, special, i, j) reaching every type from (nr, 0, ..., 0)."""
    start = (nr,) + (0,) * (n - 1)
    seen = {start}
    edges = []
    todo = [start]
    while todo:
        g = todo.pop(0)
        for i in range(n):
            for j in range(n):
                if i != j and g[i] >= g[j] + 2:
                    r = list(g)
                    r[i] -= 1
                    r[j] += 1
                    sp = _sorted_type(r)
                    if any(e[0] == g and e[1] == sp for e in edges):
                        continue
                    edges.append((g, sp, i, j))
                    if sp not in seen:
                        seen.add(sp)
                        todo.append(sp)
    return edges, seen


def partitions(total, n, cap=None):
    cap = total if cap is None else cap
    if n == 0:
        if total == 0:
            yield ()
        return
    for a in range(min(total, cap), -1, -1):
        for rest in partitions(total - a, n - 1, a):
            yield (a,) + rest


def mt_family(alpha, q_index, s_index, F, r, s=None):
    """The appendix deformation: M_j = p^a_j e_j, M_q = p^(a_q+1) e_q and
    M_s = V^(a_q)[t] e_q + p^(a_s - 1) e_s."""
    alpha = tuple(alpha)
    n = len(alpha)
    a_q, a_s = alpha[q_index], alpha[s_index]
    if sum(alpha) != n * r or not (a_q < r < a_s):
        raise HypothesisViolated("need alpha_q < r < alpha_s and sum alpha = nr")
    s = n * r + 1 if s is None else s
    W = WittRing(F, s)
    gr = W.gr

    def build(t):
        rows = [[gr.pi(alpha[a]) if a == b else 0 for b in range(n)] for a in range(n)]
        rows[q_index][q_index] = gr.pi(a_q + 1)
        rows[s_index][s_index] = gr.pi(a_s - 1)
        rows[q_index][s_index] = gr.from_digits(tuple(t if k == a_q else 0 for k in range(s)))
        return WittMatrix.from_gr_rows(W, rows)

    special = list(alpha)
    special[q_index] += 1
    special[s_index] -= 1
    return ParametricFamily(F, s, build, _sorted_type(alpha), _sorted_type(special),
                            {"kind": "mt", "alpha": alpha, "q": q_index, "s": s_index, "r": r})


def mt_image(family, t, x):
    """Digits of M(t) x computed over W_s(F_q[t]) and evaluated at t.

    x: list of digit tuples (one Witt vector per coordinate, constants).
    """
    F = family.field
    s = family.s
    P = polynomial_ring(F)
    Wt = WittRing(P, s)
    a = family.params["alpha"]
    q, si = family.params["q"], family.params["s"]
    n = len(a)

    def const(d):
        return Wt.vector(tuple((c,) if c else () for c in d))

    def pk(k):
        return Wt.vector(tuple((1,) if i == k else () for i in range(s)))

    xs = [const(d) for d in x]
    cols = []
    for j in range(n):
        if j == q:
            cols.append({j: pk(a[q] + 1)})
        elif j == si:
            tq = Wt.vector(tuple((0, 1) if i == a[q] else () for i in range(s)))
            cols.append({q: tq, si: pk(a[si] - 1)})
        else:
            cols.append({j: pk(a[j])})
    ys = []
    for i in range(n):
        acc = Wt.zero()
        for j in range(n):
            if i in cols[j]:
                acc = acc + cols[j][i] * xs[j]
        ys.append(tuple(poly_eval(F, d, t) for d in acc.digits))
    return ys


def mt_relation_value(family, t, x, variant="literal"):
    F = family.field
    p = F.p
    a = family.params["alpha"]
    q, si = family.params["q"], family.params["s"]
    y = mt_image(family, t, x)
    yq = y[q][a[q]]
    ys = y[si][a[si] - 1]
    if variant == "literal":
        return F.sub(yq, F.mul(t, F.frob(ys, 1)))
    if variant == "no_frobenius":
        return F.sub(yq, F.mul(t, ys))
    if variant == "corrected":
        e = a[si] - 1 - a[q]
        return F.sub(F.frob(yq, e), F.mul(F.frob(t, e), ys))
    raise ValueError(f"unknown variant {variant!r}")


def verify_mt_relation(family, samples, rng, variant="literal"):
    F = family.field
    n = len(family.params["alpha"])
    s = family.s
    for _ in range(samples):
        t = F.random(rng)
        x = [tuple(F.random(rng) for _ in range(s)) for _ in range(n)]
        if mt_relation_value(family, t, x, variant) != 0:
            return False
    return True


def verify_complete_intersection(n, nr, trials, F, rng):
    """Rank of the Jacobian of delta_0..delta_(nr-1) at sampled bases."""
    s = nr + 1
    report = {"n": n, "nr": nr, "s": s, "ambient_dim": n * n * s,
              "variety_dim": n * n * s - nr, "ranks": []}
    if nr == 0:
        report["ranks"] = [0] * trials
        return report
    D = dual_numbers(F)
    We = WittRing(D, s)
    for _ in range(trials):
        U = sample_open_cell(n, nr, rng, F)
        base = [[We.vector(tuple((d, 0) for d in x.digits)) for x in row] for row in U.rows()]
        jac = []
        for a in range(n):
            for b in range(n):
                for l in range(s):
                    rows = [list(r) for r in base]
                    dig = list(rows[a][b].digits)
                    dig[l] = (dig[l][0], 1)
                    rows[a][b] = We.vector(tuple(dig))
                    det = witt_det(rows).digits
                    jac.append([det[i][1] for i in range(nr)])
        J = [[jac[c][i] for c in range(len(jac))] for i in range(nr)]
        rk = gf.rank(F, J, len(jac))
        report["ranks"].append(rk)
        if rk != nr:
            raise RankDeficit(f"Jacobian rank {rk} != {nr}", point=U.to_json())
    return report
