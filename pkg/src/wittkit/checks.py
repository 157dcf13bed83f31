"""The acceptance criteria as runnable checks.

Each check returns a CheckResult; the test suite and `wittkit verify` both
call these.  Details are plain JSON data and never contain timings, so a
report is byte-stable for a fixed seed.
"""

from __future__ import annotations

import random
import time
from collections import Counter
from dataclasses import dataclass, field

from . import gf, lattice, ore, plin, rla, witt
from .errors import RankDeficit


@dataclass
class CheckResult:
    key: str
    title: str
    ok: bool
    details: dict = field(default_factory=dict)
    elapsed: float = 0.0
    limit: float = 0.0

    @property
    def passed(self):
        return self.ok and self.elapsed < self.limit

    def line(self):
        status = "PASS" if self.passed else "FAIL"
        extra = "" if self.elapsed < self.limit else f" (over {self.limit:g}s)"
        return f"[{status}] {self.key} {self.title}: {self.elapsed:.2f}s{extra}"

    def to_json(self):
        return {"check": self.key, "title": self.title, "ok": self.ok, "details": self.details}


def _timed(key, title, limit):
    def deco(fn):
        def run(seed=0, **kw):
            t0 = time.perf_counter()
            ok, details = fn(random.Random(seed), **kw)
            return CheckResult(key, title, bool(ok), details, time.perf_counter() - t0, limit)
        run.key = key
        run.__name__ = fn.__name__
        run.__qualname__ = fn.__qualname__
        run.__doc__ = fn.__doc__
        return run
    return deco


# 1 -------------------------------------------------------------------------

@_timed("c1", "Witt cross-representation", 10)
def witt_cross(rng, pairs=1000, grid=((2, 3, 2), (3, 2, 1), (5, 2, 1))):
    details = {}
    ok = True
    for p, s, m in grid:
        W = witt.WittRing(gf.field(p, m), s)
        bad = 0
        for _ in range(pairs):
            a, b = W.random(rng), W.random(rng)
            if W.add_digits(a.digits, b.digits) != (a + b).digits:
                bad += 1
            if W.mul_digits(a.digits, b.digits) != (a * b).digits:
                bad += 1
        details[f"p{p}s{s}m{m}"] = bad
        ok &= bad == 0
    ghost_bad = 0
    for p in (2, 3, 5):
        for s in range(1, 5):
            tab = witt.generate_structure_polynomials(p, s)
            for _ in range(20):
                x = [rng.randrange(-4, 5) for _ in range(s)]
                y = [rng.randrange(-4, 5) for _ in range(s)]
                vals = x + y
                gs = witt.ghost_components(p, [witt.eval_int_poly(P, vals) for P in tab.add_int])
                gm = witt.ghost_components(p, [witt.eval_int_poly(P, vals) for P in tab.mul_int])
                gx, gy = witt.ghost_components(p, x), witt.ghost_components(p, y)
                if gs != tuple(a + b for a, b in zip(gx, gy)):
                    ghost_bad += 1
                if gm != tuple(a * b for a, b in zip(gx, gy)):
                    ghost_bad += 1
    details["ghost_failures"] = ghost_bad
    return ok and ghost_bad == 0, details


# 2 -------------------------------------------------------------------------

@_timed("c2", "Hom dimensions", 120)
def hom_dimensions(rng, grid_n=(2, 3), grid_p=(2, 3), r=1):
    details = {}
    ok = True
    for n in grid_n:
        nr = n * r
        for p in grid_p:
            F = gf.field(p, 1)
            for t in lattice.partitions(nr, n):
                L = lattice.diagonal_lattice(t, F, nr)
                d = lattice.hom_dimension(L)
                want = (n - 1) * nr if t[0] == nr else n * n * r
                details[f"n{n}p{p}{''.join(map(str, t))}"] = d
                ok &= d == want
    # brute-force map counts over F_2
    F2 = gf.field(2, 1)
    for t in [(2, 0), (1, 1), (3, 0, 0)]:
        L = lattice.diagonal_lattice(t, F2, sum(t))
        count, _ = lattice.hom_map_count(L)
        d = lattice.hom_dimension(L)
        details[f"count{''.join(map(str, t))}"] = count
        ok &= count == 2 ** d
    return ok, details


# 3 -------------------------------------------------------------------------

def _decode_poly(value, q):
    coeffs = []
    while value:
        value, c = divmod(value, q)
        coeffs.append(c)
    return coeffs


def _poly_at(coeffs, q):
    return sum(c * q ** k for k, c in enumerate(coeffs))


@_timed("c3", "Orbit dimensions", 300)
def orbit_dimensions(rng, grid_n=(2, 3), r=1, limit_states=2 ** 20):
    details = {}
    ok = True
    for n in grid_n:
        nr = n * r
        qs = []
        for p in (2, 3):
            for e in (1, 2, 3):
                if (p ** e) ** (n * nr) <= limit_states:
                    qs.append((p, e))
        counts = {}
        for p, e in qs:
            c, _ = lattice.count_lattices_by_type(n, nr, gf.field(p, e))
            counts[p ** e] = c
        qmax = max(counts)
        for t in lattice.partitions(nr, n):
            poly = _decode_poly(counts[qmax][t], qmax)
            consistent = all(_poly_at(poly, q) == counts[q][t] for q in counts)
            deg = len(poly) - 1
            want = ore.orbit_dimension(t, r)
            stab = ore.stabilizer_dimension(t, r)
            details[f"n{n}:{''.join(map(str, t))}"] = {
                "poly": poly, "degree": deg, "orbit_dimension": want, "qs": sorted(counts)}
            ok &= consistent and deg == want and stab + want == n ** 3 * r
    return ok, details


# 4 -------------------------------------------------------------------------

@_timed("c4", "Lie functor transport", 120)
def lie_transport(rng, cases=((2, 2, 2), (2, 2, 4))):
    details = {}
    ok = True
    for q, n, s in cases:
        F = gf.field(q, 1)
        R = ore.ore_ring(F, s)
        images = Counter()
        bad_closed = bad_dim = bad_type = total = 0
        for c in range(n * s + 1):
            for L in lattice.enumerate_lattices(n, c, F, s):
                T = lattice.lie_algebra(L)
                total += 1
                images[T.basis] += 1
                bad_closed += not T.theta_closed
                bad_dim += T.dim != n * s - c
                if T.theta_closed:
                    bad_type += ore.OreLattice.from_basis(R, T.basis, n).type != L.type
                else:
                    bad_type += 1
        collisions = sum(v - 1 for v in images.values() if v > 1)
        details[f"q{q}n{n}s{s}"] = {"lattices": total, "distinct_images": len(images),
                                    "collisions": collisions, "not_closed": bad_closed,
                                    "bad_dim": bad_dim, "type_mismatch": bad_type}
        ok &= collisions == 0 and bad_closed == 0 and bad_dim == 0 and bad_type == 0
    return ok, details


# 5 -------------------------------------------------------------------------

def _random_nilpotent(F, n, rng):
    while True:
        B = gf.random_matrix(F, rng, n)
        if plin.is_p_nilpotent(F, B):
            return tuple(tuple(r) for r in B)


def _lattice_moved(F, L, A, n):
    return plin.act_lattice(L, gf.mat_inv(F, A)).basis


@_timed("c5", "p-linear bijection and equivariance", 120)
def plin_bijection(rng, random_samples=500):
    details = {}
    ok = True
    for q, n in ((2, 2), (2, 3), (4, 2)):
        F = gf.field(2, 1 if q == 2 else 2)
        nil = plin.all_nilpotents(F, n)
        lats = {}
        bad = 0
        for B in nil:
            L = plin.lattice_of_nilpotent(F, B)
            bad += plin.nilpotent_of_lattice(L) != B
            lats[L.basis] = L
        side = plin.enumerate_transversal_lattices(F, n)
        bad_side = sum(plin.lattice_of_nilpotent(F, plin.nilpotent_of_lattice(L)).basis != L.basis
                       for L in side)
        same_sets = {L.basis for L in side} == set(lats)
        dual_bad = 0
        for B in nil:
            rep = plin.orthogonality_report(F, B)
            dual_bad += not (rep["orthogonal"] and rep["complement_fp_dim"]
                             == rep["tau_span_fp_dim"] == rep["expected_fp_dim"])
        details[f"q{q}n{n}"] = {"nilpotents": len(nil), "lattices": len(side),
                                "roundtrip_failures": bad, "lattice_side_failures": bad_side,
                                "same_sets": same_sets, "duality_failures": dual_bad}
        ok &= bad == 0 and bad_side == 0 and same_sets and dual_bad == 0
    # exhaustive equivariance over F_2, n = 2
    F = gf.field(2, 1)
    inv = [A for A in plin.all_matrices(F, 2) if gf.mat_inv(F, A) is not None]
    eq_bad = 0
    for B in plin.all_nilpotents(F, 2):
        L = plin.lattice_of_nilpotent(F, B)
        for A in inv:
            C = plin.conjugate(F, B, A)
            eq_bad += not plin.is_p_nilpotent(F, C)
            eq_bad += plin.lattice_of_nilpotent(F, C).basis != _lattice_moved(F, L, A, 2)
    F4 = gf.field(2, 2)
    for k in range(random_samples):
        n = 2 + k % 2
        B = _random_nilpotent(F4, n, rng)
        A = gf.random_invertible(F4, rng, n)
        L = plin.lattice_of_nilpotent(F4, B)
        eq_bad += plin.lattice_of_nilpotent(F4, plin.conjugate(F4, B, A)).basis != \
            _lattice_moved(F4, L, A, n)
    details["equivariance_failures"] = eq_bad
    return ok and eq_bad == 0, details


# 6 -------------------------------------------------------------------------

@_timed("c6", "Jacobson identity", 30)
def jacobson(rng, trials=((2, 1000), (3, 1000), (5, 100))):
    details = {}
    for p, t in trials:
        details[f"p{p}"] = rla.restricted_check(p, t, rng)
    return all(details.values()), details


# 7 -------------------------------------------------------------------------

@_timed("c7", "ws model audit", 30)
def ws_model(rng, n=2, J=2, p=3, samples=1000):
    M = rla.build_ws_model(n, J, p, m=2)
    F = M.F
    details = {
        "dim": M.dim,
        "antisymmetry": M.audit_antisymmetry(),
        "jacobi": M.audit_jacobi(),
        "weights": M.audit_weights(),
        "restricted": M.audit_restricted(),
        "pmap_semilinear": M.audit_pmap_semilinear(rng),
        "g0_pclosed": M.g0_pclosed(),
    }
    beta_ok = True
    images = []
    for a, b in rla._roots(n):
        x = M.unit(M.index(f"X{a + 1}{b + 1}^0"))
        y = rla.beta_map(M, x)
        images.append(list(y))
        beta_ok &= y == M.unit(M.index(f"X{a + 1}{b + 1}^1"))
    details["beta_on_roots"] = beta_ok
    details["beta_injective_on_roots"] = gf.rank(F, images, M.dim) == len(images)
    add_bad = 0
    for _ in range(samples):
        x, y = rla.random_g0_element(M, rng), rla.random_g0_element(M, rng)
        c = F.random(rng)
        add_bad += rla.beta_map(M, M.add(x, y)) != M.add(rla.beta_map(M, x), rla.beta_map(M, y))
        add_bad += rla.beta_map(M, M.scale(c, x)) != M.scale(F.frob(c, 1), rla.beta_map(M, x))
    details["beta_failures"] = add_bad
    keys = ("antisymmetry", "jacobi", "weights", "restricted", "pmap_semilinear",
            "beta_on_roots", "beta_injective_on_roots")
    ok = all(details[k] for k in keys) and add_bad == 0 and details["dim"] == (n * n - 1) * J
    return ok, details


# 8 -------------------------------------------------------------------------

@_timed("c8", "Canonical weight", 1)
def canonical_weights(rng):
    mixed, _ = rla.canonical_weight(2, 1, 2)
    eq, _ = rla.canonical_weight(2, 1, 2, "equal_char")
    ok = mixed.c == -6 and eq.c == -2
    grid = {}
    for n in (2, 3):
        for r in (1, 2):
            for p in (2, 3, 5):
                c, terms = rla.canonical_weight(n, r, p)
                e, _ = rla.canonical_weight(n, r, p, "equal_char")
                good = sum(terms) == c.c == -n * (p ** (n * r) - 1) // (p - 1) and c.c != e.c
                grid[f"n{n}r{r}p{p}"] = [c.c, e.c]
                ok &= good
    return ok, {"n2r1p2": [mixed.c, eq.c], "grid": grid}


# 9 -------------------------------------------------------------------------

@_timed("c9", "Complete intersection", 60)
def complete_intersection(rng, n=2, r=1, primes=(2, 3), trials=100):
    details = {}
    ok = True
    nr = n * r
    for p in primes:
        try:
            rep = lattice.verify_complete_intersection(n, nr, trials, gf.field(p, 1), rng)
        except RankDeficit as exc:
            details[f"p{p}"] = {"error": str(exc)}
            ok = False
            continue
        good = (set(rep["ranks"]) == {nr} and rep["ambient_dim"] == n * n * (nr + 1)
                and rep["variety_dim"] == n * n * (nr + 1) - nr)
        details[f"p{p}"] = {"ambient": rep["ambient_dim"], "variety": rep["variety_dim"],
                            "ranks": sorted(set(rep["ranks"]))}
        ok &= good
    return ok, details


# 10 ------------------------------------------------------------------------

@_timed("c10", "Deformation families", 60)
def deformations(rng, samples=200):
    F = gf.field(2, 2)
    fam = lattice.mt_family((1, 3), 0, 1, F, 2)
    types = {t: fam.fiber_type(t) for t in range(F.q)}
    fibers_ok = types[0] == (2, 2) and all(types[t] == (3, 1) for t in range(1, F.q))
    relation = lattice.verify_mt_relation(fam, samples, rng)
    chains = {}
    chain_ok = True
    for n, nr in ((2, 2), (2, 4), (3, 3), (3, 6)):
        edges, reached = lattice.specialization_chain(n, nr)
        good = reached == set(lattice.partitions(nr, n))
        for g, sp, i, j in edges:
            fam2 = lattice.specialization_path(g, i, j, gf.field(2, 1))
            good &= fam2.verify() and fam2.special_type == sp
        chains[f"n{n}nr{nr}"] = {"edges": len(edges), "types": len(reached), "ok": good}
        chain_ok &= good
    details = {"fiber_types": {str(k): list(v) for k, v in types.items()},
               "mt_relation": relation, "chains": chains}
    return fibers_ok and relation and chain_ok, details


# 11 ------------------------------------------------------------------------

def _random_gl(W, rng, n):
    gr = W.gr
    while True:
        M = [[gr.random(rng) for _ in range(n)] for _ in range(n)]
        if gr.is_unit(lattice.gr_det(gr, M)):
            return lattice.WittMatrix.from_gr_rows(W, M)


@_timed("c11", "Generating-map fibers", 60)
def generating_fibers(rng, pairs=200, cases=((2, 2, 2), (2, 2, 3), (3, 3, 2))):
    good = bad = skipped = 0
    for k in range(pairs):
        n, nr, p = cases[k % len(cases)]
        F = gf.field(p, 1)
        U = lattice.sample_open_cell(n, nr, rng, F)
        X = _random_gl(U.ring, rng, n)
        U2 = U @ X
        T = lattice.transition_matrix(U, U2, nr)
        if T is not None and (U @ T).gr_rows() == U2.gr_rows():
            good += 1
        else:
            bad += 1
        V = lattice.sample_open_cell(n, nr, rng, F)
        if lattice.canonical_form(V).key == lattice.canonical_form(U).key:
            skipped += 1
            continue
        if lattice.transition_matrix(U, V, nr) is not None:
            bad += 1
    return bad == 0, {"recovered": good, "failures": bad, "equal_random_pairs": skipped}


ALL = (witt_cross, hom_dimensions, orbit_dimensions, lie_transport, plin_bijection, jacobson,
       ws_model, canonical_weights, complete_intersection, deformations, generating_fibers)
BY_NAME = {
    "witt": witt_cross, "homdim": hom_dimensions, "orbits": orbit_dimensions,
    "lie": lie_transport, "plin": plin_bijection, "jacobson": jacobson, "model": ws_model,
    "weight": canonical_weights, "ci": complete_intersection, "deform": deformations,
    "fibers": generating_fibers,
}


def run_all(seed=0):
    return [check(seed=seed) for check in ALL]
