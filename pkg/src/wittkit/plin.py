"""p-linear maps on V = F_q^n and theta-stable subspaces of O/theta^n (x) V.

Conventions (row vectors throughout):

* a p-linear map phi is a matrix B acting by phi(v) = v^[p] B;
* an element of O/theta^n (x) V is stored by its left coordinates
  a[s][i], meaning sum a[s][i] theta^s (x) e_i.  Writing the same element as
  sum theta^s (x) v_s gives a_s = v_s^[p^s];
* theta acts by a_{s+1} <- a_s^[p] (the top grade falls off);
* lambda_phi(theta^s (x) v) = phi^s(v), and L(phi) = ker lambda_phi.

Flattened coordinates use index s*n + i.
"""

from __future__ import annotations

from dataclasses import dataclass
from itertools import product

from . import gf
from .errors import NotNilpotent, NotTransversal, Singular


@dataclass(frozen=True)
class PLinearMap:
    F: gf.FieldParams
    B: tuple

    @property
    def n(self):
        return len(self.B)

    def __call__(self, v):
        return twisted_apply(self.F, v, self.B, 1)

    def to_json(self):
        return {"n": self.n, "rows": [list(r) for r in self.B]}

    @classmethod
    def from_json(cls, obj, F):
        return cls(F, tuple(tuple(r) for r in obj["rows"]))


def twisted_power_matrix(F, B, r):
    """B_r = B^[p^(r-1)] ... B^[p] B, so that phi^r(v) = v^[p^r] B_r."""
    n = len(B)
    M = gf.identity(n)
    for k in range(r):
        M = gf.mat_mul(F, gf.mat_frob(F, M, 1), B)
    return M


def twisted_apply(F, v, B, r=1):
    out = tuple(v)
    for _ in range(r):
        out = gf.vec_mat(F, tuple(F.frob(x, 1) for x in out), B)
    return out


def is_p_nilpotent(F, B):
    n = len(B)
    return all(x == 0 for row in twisted_power_matrix(F, B, n) for x in row)


def conjugate(F, B, A):
    """Matrix of v -> phi(v A) A^-1, i.e. A^[p] B A^-1."""
    Ai = gf.mat_inv(F, A)
    if Ai is None:
        raise Singular("conjugating matrix is singular")
    return gf.mat_mul(F, gf.mat_mul(F, gf.mat_frob(F, A, 1), B), Ai)


# ---------------------------------------------------------------------------
# the module O/theta^n (x) V

def theta_bar(F, x, n):
    out = [0] * (n * n)
    for s in range(n - 1):
        for i in range(n):
            out[(s + 1) * n + i] = F.frob(x[s * n + i], 1)
    return tuple(out)


def right_act(F, x, A, n):
    """x . A on left coordinates: grade s is multiplied by A^[p^s]."""
    out = []
    for s in range(n):
        out.extend(gf.vec_mat(F, x[s * n:(s + 1) * n], gf.mat_frob(F, A, s)))
    return tuple(out)


@dataclass(frozen=True)
class PLattice:
    F: gf.FieldParams
    n: int
    basis: tuple  # reduced echelon F_q-basis in left coordinates

    @property
    def codim(self):
        return self.n * self.n - len(self.basis)

    @property
    def theta_closed(self):
        F, n = self.F, self.n
        B = [list(b) for b in self.basis]
        return all(gf.rank(F, B + [list(theta_bar(F, b, n))], n * n) == len(B) for b in self.basis)

    @property
    def transversal_to_V(self):
        F, n = self.F, self.n
        V = [[1 if k == i else 0 for k in range(n * n)] for i in range(n)]
        return gf.rank(F, [list(b) for b in self.basis] + V, n * n) == len(self.basis) + n

    def to_json(self):
        return {"n": self.n, "basis": [list(b) for b in self.basis]}


def _plattice(F, n, vectors):
    return PLattice(F, n, tuple(tuple(r) for r in gf.span_basis(F, [list(v) for v in vectors], n * n)))


def act_lattice(L, A):
    """L . A for A in GL(n, k) acting on the right."""
    return _plattice(L.F, L.n, [right_act(L.F, b, A, L.n) for b in L.basis])


def lattice_of_nilpotent(F, B):
    """L(phi) as the kernel of lambda_phi, cross-checked against span R(phi)."""
    n = len(B)
    if not is_p_nilpotent(F, B):
        raise NotNilpotent("matrix is not p-nilpotent")
    # unknowns v_(s,i) with theta^s (x) v_s; sum_s v_s^[p^s] B_s = 0 is
    # p^s-semilinear in grade s
    Bs = [twisted_power_matrix(F, B, s) for s in range(n)]
    eqs = []
    for k in range(n):
        terms = [(Bs[s][i][k], s * n + i, s) for s in range(n) for i in range(n) if Bs[s][i][k]]
        eqs.append((terms, 0))
    sol = gf.solve_semilinear(F, eqs, n * n)
    kernel = [tuple(F.frob(v[s * n + i], s) for s in range(n) for i in range(n)) for v in sol.kernel]
    L = _plattice(F, n, kernel)
    R = _plattice(F, n, generators_R(F, B))
    if L.basis != R.basis:
        raise AssertionError("kernel of lambda_phi differs from span of R(phi)")
    if L.codim != n or not L.theta_closed or not L.transversal_to_V:
        raise AssertionError("L(phi) fails codimension, theta-closure or transversality")
    return L


def generators_R(F, B):
    """theta^(s+1) (x) e_i - theta^s (x) phi(e_i), the top theta^n term dropped."""
    n = len(B)
    out = []
    for s in range(n):
        for i in range(n):
            x = [0] * (n * n)
            if s + 1 < n:
                x[(s + 1) * n + i] = 1
            img = B[i]  # phi(e_i) is row i of B
            for k in range(n):
                x[s * n + k] = F.neg(F.frob(img[k], s))
            out.append(tuple(x))
    return out


def nilpotent_of_lattice(L):
    """phi_L(m) = (pi|V)^-1 (theta pi(m)) with pi the projection mod L."""
    F, n = L.F, L.n
    if L.codim != n or not L.transversal_to_V:
        raise NotTransversal("lattice is not a codimension-n complement of V")
    if not L.theta_closed:
        raise NotTransversal("lattice is not theta-stable")
    rows = []
    basis = [list(b) for b in L.basis]
    ncols = n * n
    for i in range(n):
        # find w in V with theta (x) e_i - 1 (x) w in L
        target = [0] * ncols
        target[n + i] = 1 if n > 1 else 0
        # solve  sum c_b b + (w, 0...) = target  for c and w
        cols = basis + [[1 if k == j else 0 for k in range(ncols)] for j in range(n)]
        A = [[cols[c][k] for c in range(len(cols))] for k in range(ncols)]
        sol = gf.solve(F, A, target, len(cols))
        if sol is None:
            raise NotTransversal("theta (x) e_i is not reachable")
        w = sol[len(basis):]
        rows.append(tuple(w))
    return tuple(rows)


# ---------------------------------------------------------------------------
# duality

def dual_tau(F, B):
    """tau(u) = (B u^T)^[p^-1], the inverse-p-linear map with
    <u, phi(v)> = <tau(u), v>^p."""
    if not is_p_nilpotent(F, B):
        raise NotNilpotent("matrix is not p-nilpotent")
    n = len(B)

    def tau(u):
        return tuple(F.frob(sum_mul(F, B[i], u), -1) for i in range(n))
    return tau


def sum_mul(F, a, b):
    acc = 0
    for x, y in zip(a, b):
        if x and y:
            acc = F.add(acc, F.mul(x, y))
    return acc


def pairing(F, m, x, n):
    """<sum u_r (x) theta^r, sum theta^s (x) v_s> = sum_{r+s=n-1} <u_r, v_s>^(p^s).

    m is given by its U-components u_r (index r*n + i), x by left
    coordinates a_s = v_s^[p^s], so each term is <u_r^[p^s], a_s>.
    """
    acc = 0
    for r in range(n):
        s = n - 1 - r
        u = [F.frob(c, s) for c in m[r * n:(r + 1) * n]]
        acc = F.add(acc, sum_mul(F, u, x[s * n:(s + 1) * n]))
    return acc


def complement_from_tau(F, B):
    """Additive generators of {u (x) theta^(n-1) + sum_{i>=1} tau^i(u) (x) theta^(n-1-i)}."""
    n = len(B)
    tau = dual_tau(F, B)
    gens = []
    for j in range(n):
        for c in _fp_basis(F):
            u = tuple(c if k == j else 0 for k in range(n))
            m = [0] * (n * n)
            cur = u
            for i in range(n):
                r = n - 1 - i
                m[r * n:(r + 1) * n] = cur
                cur = tau(cur)
            gens.append(tuple(m))
    return gens


def _fp_basis(F):
    return [F.p ** k for k in range(F.m)] if F.m > 1 else [1]


def _fp_coords(F, x):
    out = []
    for c in x:
        for _ in range(F.m):
            c, r = divmod(c, F.p)
            out.append(r)
    return out


def orthogonality_report(F, B):
    """Checks that the tau-complement pairs to zero with L(phi), and that it
    has the dimension of the full orthogonal complement (over F_p)."""
    n = len(B)
    L = lattice_of_nilpotent(F, B)
    Lgens = [tuple(F.mul(c, x) for x in b) for b in L.basis for c in _fp_basis(F)]
    M = complement_from_tau(F, B)
    zero = all(pairing(F, m, x, n) == 0 for m in M for x in Lgens)
    # F_p-dimension of the full complement: the pairing is F_p-linear in m
    Fp = gf.field(F.p, 1)
    N = n * n * F.m
    eqs = []
    for x in Lgens:
        cols = []
        for k in range(n * n):
            for c in _fp_basis(F):
                e = [0] * (n * n)
                e[k] = c
                cols.append(_fp_coords(F, [pairing(F, e, x, n)]))
        for row in range(F.m):
            eqs.append([cols[c][row] for c in range(N)])
    comp_dim = N - gf.rank(Fp, eqs, N)
    mdim = gf.rank(Fp, [_fp_coords(F, m) for m in M], N)
    return {"orthogonal": zero, "complement_fp_dim": comp_dim, "tau_span_fp_dim": mdim,
            "expected_fp_dim": n * F.m}


# ---------------------------------------------------------------------------
# enumeration

def all_matrices(F, n):
    for entries in product(range(F.q), repeat=n * n):
        yield tuple(tuple(entries[i * n:(i + 1) * n]) for i in range(n))


def all_nilpotents(F, n):
    return [B for B in all_matrices(F, n) if is_p_nilpotent(F, B)]


def enumerate_transversal_lattices(F, n):
    """All theta-stable subspaces of codimension n complementary to V.

    Such a subspace is the graph {(f(y), y)} of a linear map f from the
    grades >= 1 to V; the graph is theta-stable iff f(theta(f(y), y)) = 0
    on a basis.
    """
    d = n * n - n
    out = []
    basis_y = [tuple(1 if k == j else 0 for k in range(d)) for j in range(d)]
    for entries in product(range(F.q), repeat=d * n):
        f = [entries[j * n:(j + 1) * n] for j in range(d)]  # f(e_j) for basis y

        def apply(y):
            out_ = [0] * n
            for j, c in enumerate(y):
                if c:
                    for k in range(n):
                        if f[j][k]:
                            out_[k] = F.add(out_[k], F.mul(c, f[j][k]))
            return out_

        ok = True
        vecs = []
        for y in basis_y:
            x = tuple(apply(y)) + y
            tx = theta_bar(F, x, n)
            if tx[:n] != (0,) * n or tuple(apply(tx[n:])) != (0,) * n:
                ok = False
                break
            vecs.append(x)
        if ok:
            out.append(_plattice(F, n, vecs))
    return out
