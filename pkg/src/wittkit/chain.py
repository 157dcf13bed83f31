"""Hermite and Smith forms over truncated chain rings.

A chain ring here is W_s(F_q) (uniformizer p) or the truncated Ore ring
O_s (uniformizer theta).  Both expose the same small interface:

    zero, one, s, add, sub, mul, ord, inv,
    rfactor(a, d)  -> c with c * pi^d == a
    lfactor(a, d)  -> c with pi^d * c == a
    split(a, d)    -> (c, r) with a == c * pi^d + r, r canonical
    pi(k)          -> pi^k

Vectors are tuples; scalars act on the left.  For W_s that is just the
usual commutative action, for O_s it is the left module structure.
"""

from __future__ import annotations


def _nonzero(R, v):
    return any(x != R.zero for x in v)


def _axpy(R, c, x, y):
    """y - c*x, entrywise."""
    return tuple(R.sub(b, R.mul(c, a)) for a, b in zip(x, y))


def hermite(R, gens, n):
    """Canonical generators of the left submodule spanned by `gens` in R^n.

    Returns (d, vecs): vecs[i] is zero past position i, has vecs[i][i] equal
    to pi^d[i] exactly, and its entries at positions j < i are reduced modulo
    pi^d[j].  d[i] == s marks an empty step and vecs[i] is then the zero
    vector.  The output depends only on the submodule.
    """
    s = R.s
    zero_vec = (R.zero,) * n
    gens = [tuple(g) for g in gens if _nonzero(R, g)]
    d = [s] * n
    vecs = [zero_vec] * n
    for i in range(n - 1, -1, -1):
        best = None
        for idx, g in enumerate(gens):
            o = R.ord(g[i])
            if o < s and (best is None or o < best[0]):
                best = (o, idx)
        if best is None:
            continue
        o, idx = best
        unit = R.rfactor(gens[idx][i], o)
        h = tuple(R.mul(R.inv(unit), x) for x in gens[idx])
        rest = []
        for k, g in enumerate(gens):
            if k == idx:
                continue
            if g[i] != R.zero:
                g = _axpy(R, R.rfactor(g[i], o), h, g)
            if _nonzero(R, g):
                rest.append(g)
        # pi^(s-o) h has lost its pivot but may still be nonzero higher up
        tail = tuple(R.mul(R.pi(s - o), x) for x in h)
        if _nonzero(R, tail):
            rest.append(tail)
        gens = rest
        d[i], vecs[i] = o, h
    for i in range(n - 1, -1, -1):
        if d[i] >= s:
            continue
        for j in range(i + 1, n):
            if d[j] >= s:
                continue
            c, _ = R.split(vecs[j][i], d[i])
            if c != R.zero:
                vecs[j] = _axpy(R, c, vecs[i], vecs[j])
    return tuple(d), tuple(vecs)


def smith(R, M, track=True):
    """Diagonalize M (list of rows) by row and column operations.

    Returns (ords, A, B, D) with A*M*B == D diagonal and D[k][k] == pi^ords[k]
    (ords[k] == s for a zero divisor).  Row operations multiply on the left,
    column operations on the right, which is the right bookkeeping for O_s.
    """
    n, m = len(M), len(M[0]) if M else 0
    s = R.s
    M = [list(r) for r in M]
    A = [[R.one if i == j else R.zero for j in range(n)] for i in range(n)] if track else None
    B = [[R.one if i == j else R.zero for j in range(m)] for i in range(m)] if track else None
    ords = []
    for k in range(min(n, m)):
        best = None
        for i in range(k, n):
            for j in range(k, m):
                o = R.ord(M[i][j])
                if best is None or o < best[0]:
                    best = (o, i, j)
        o, i, j = best
        if o >= s:
            ords.extend([s] * (min(n, m) - k))
            break
        M[k], M[i] = M[i], M[k]
        if track:
            A[k], A[i] = A[i], A[k]
        for row in M:
            row[k], row[j] = row[j], row[k]
        if track:
            for row in B:
                row[k], row[j] = row[j], row[k]
        ui = R.inv(R.rfactor(M[k][k], o))
        M[k] = [R.mul(ui, x) for x in M[k]]
        if track:
            A[k] = [R.mul(ui, x) for x in A[k]]
        for i2 in range(n):
            if i2 != k and M[i2][k] != R.zero:
                c = R.rfactor(M[i2][k], o)
                M[i2] = list(_axpy(R, c, M[k], M[i2]))
                if track:
                    A[i2] = list(_axpy(R, c, A[k], A[i2]))
        for j2 in range(m):
            if j2 != k and M[k][j2] != R.zero:
                c = R.lfactor(M[k][j2], o)
                M[k][j2] = R.zero
                if track:
                    for row in B:
                        row[j2] = R.sub(row[j2], R.mul(row[k], c))
        ords.append(o)
    return tuple(ords), A, B, M


def elementary_divisors(R, M):
    """Sorted (nonincreasing) exponents of the cokernel of M."""
    ords, _, _, _ = smith(R, M, track=False)
    n = len(M)
    ords = list(ords) + [R.s] * (n - len(ords))
    return tuple(sorted(ords, reverse=True))
