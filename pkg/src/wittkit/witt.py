"""Truncated Witt vectors W_s(R).

Two representations are kept side by side:

* over a finite field F_q the ring W_s(F_q) is the Galois ring
  Z[x]/(p^s, f(x)); elements are packed into a single int (base p^s digits
  are the polynomial coefficients) and arithmetic is cheap;
* over any other commutative ring of characteristic p (dual numbers,
  polynomial rings) addition and multiplication evaluate the Witt structure
  polynomials Phi_i, Psi_i on the digit vectors.

Digits are the standard Witt components: the vector (a_0, a_1, ...) is
sum_i V^i[a_i], which over a perfect field equals sum_i p^i [a_i^(p^-i)].
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache
import threading

from .errors import DomainError, NotAUnit, OverflowGuard, ParamsMismatch, PrecisionError
from .gf import FieldParams, field


# ---------------------------------------------------------------------------
# Galois ring

class GaloisRing:
    """GR(p^s, m) = W_s(F_{p^m}) with elements packed as ints."""

    TABLE_LIMIT = 256

    def __init__(self, F: FieldParams, s: int):
        if s < 1:
            raise ValueError("truncation length must be >= 1")
        self.F = F
        self.p, self.m, self.s = F.p, F.m, s
        self.P = F.p ** s
        self.size = self.P ** F.m
        self._mod = tuple(F.modulus)
        self._add_t = self._mul_t = None
        if self.m > 1 and self.size <= self.TABLE_LIMIT:
            self._build_tables()
        self._teich = tuple(self._teich_lift(a) for a in range(F.q))
        self._res = None

    # packing
    def decode(self, g):
        if self.m == 1:
            return (g,)
        P = self.P
        out = []
        for _ in range(self.m):
            g, r = divmod(g, P)
            out.append(r)
        return tuple(out)

    def encode(self, coeffs):
        P = self.P
        g = 0
        for c in reversed(coeffs):
            g = g * P + c % P
        return g

    def _build_tables(self):
        n = self.size
        dec = [self.decode(g) for g in range(n)]
        add, mul = [0] * (n * n), [0] * (n * n)
        for a in range(n):
            da = dec[a]
            for b in range(a, n):
                db = dec[b]
                s_ = self.encode([x + y for x, y in zip(da, db)])
                m_ = self._polymul(da, db)
                add[a * n + b] = add[b * n + a] = s_
                mul[a * n + b] = mul[b * n + a] = m_
        self._add_t, self._mul_t = add, mul

    def _polymul(self, a, b):
        m, P, mod = self.m, self.P, self._mod
        prod = [0] * (2 * m - 1)
        for i, x in enumerate(a):
            if x:
                for j, y in enumerate(b):
                    prod[i + j] += x * y
        for k in range(2 * m - 2, m - 1, -1):
            c = prod[k]
            if c:
                for j in range(m):
                    prod[k - m + j] -= c * mod[j]
        return self.encode(prod[:m])

    # ring operations
    def add(self, a, b):
        if self.m == 1:
            return (a + b) % self.P
        if self._add_t is not None:
            return self._add_t[a * self.size + b]
        return self.encode([x + y for x, y in zip(self.decode(a), self.decode(b))])

    def neg(self, a):
        if self.m == 1:
            return (-a) % self.P
        return self.encode([-x for x in self.decode(a)])

    def sub(self, a, b):
        if self.m == 1:
            return (a - b) % self.P
        return self.add(a, self.neg(b))

    def mul(self, a, b):
        if self.m == 1:
            return (a * b) % self.P
        if self._mul_t is not None:
            return self._mul_t[a * self.size + b]
        return self._polymul(self.decode(a), self.decode(b))

    def from_int(self, n):
        return n % self.P

    def mul_int(self, a, n):
        if self.m == 1:
            return (a * n) % self.P
        return self.encode([x * n for x in self.decode(a)])

    def pow(self, a, e):
        r = 1
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def valuation(self, a):
        """p-adic valuation, s for zero."""
        if a == 0:
            return self.s
        p = self.p
        v = self.s
        for c in self.decode(a):
            if c:
                k = 0
                while c % p == 0:
                    c //= p
                    k += 1
                v = min(v, k)
        return v

    def is_unit(self, a):
        return self.valuation(a) == 0

    def residue(self, a):
        """Image in F_q under W_s -> W_1 = F_q."""
        p = self.p
        code = 0
        for c in reversed(self.decode(a)):
            code = code * p + c % p
        return code

    def lift(self, code):
        """Naive lift of an F_q element (coefficients as integers)."""
        p = self.p
        coeffs = []
        for _ in range(self.m):
            code, r = divmod(code, p)
            coeffs.append(r)
        return self.encode(coeffs)

    def _teich_lift(self, code):
        g = self.lift(code)
        return self.pow(g, self.F.q ** (self.s - 1)) if code else 0

    def teich(self, code):
        """Teichmuller representative [a]."""
        return self._teich[code]

    def div_p(self, a, k=1):
        """a / p^k for a of valuation >= k (result defined mod p^(s-k))."""
        if k == 0:
            return a
        d = self.p ** k
        return self.encode([c // d for c in self.decode(a)])

    def mul_p(self, a, k=1):
        return self.mul_int(a, self.p ** k)

    # chain-ring interface shared with the truncated Ore ring (see chain.py)
    zero, one = 0, 1

    def ord(self, a):
        return self.valuation(a)

    def rfactor(self, a, d):
        return self.div_p(a, d)

    lfactor = rfactor

    def split(self, a, d):
        """a = c p^d + r with the coefficients of r in [0, p^d)."""
        if d >= self.s:
            return 0, a
        m = self.p ** d
        qs, rs = zip(*(divmod(c, m) for c in self.decode(a)))
        return self.encode(qs), self.encode(rs)

    def pi(self, k):
        return self.from_int(self.p ** k) if k < self.s else 0

    def inv(self, a):
        if not self.is_unit(a):
            raise NotAUnit("element is not a unit")
        x = self.teich(self.F.inv(self.residue(a)))
        prec = 1
        two = self.from_int(2)
        while prec < self.s:
            x = self.mul(x, self.sub(two, self.mul(a, x)))
            prec *= 2
        return x

    def to_digits(self, g):
        """Standard Witt components of g."""
        F = self.F
        out = []
        for i in range(self.s):
            b = self.residue(g)
            out.append(F.frob(b, i))
            g = self.sub(g, self.teich(b))
            if i + 1 < self.s:
                g = self.div_p(g)
        return tuple(out)

    def from_digits(self, digits):
        F = self.F
        g = 0
        pk = 1
        for i, a in enumerate(digits):
            if a:
                g = self.add(g, self.mul_int(self.teich(F.frob(a, -i)), pk))
            pk *= self.p
        return g

    def reduce_to(self, other, g):
        """Image of g under W_s -> W_t for the GaloisRing `other` with t <= s."""
        return other.encode(self.decode(g))

    def random(self, rng):
        return rng.randrange(self.size)


_GR_CACHE = {}
_GR_LOCK = threading.Lock()


def galois_ring(F, s):
    key = (F, s)
    gr = _GR_CACHE.get(key)
    if gr is None:
        with _GR_LOCK:
            gr = _GR_CACHE.get(key)
            if gr is None:
                gr = GaloisRing(F, s)
                _GR_CACHE[key] = gr
    return gr


# ---------------------------------------------------------------------------
# generic coefficient rings

@dataclass(frozen=True, eq=False)
class GenericRing:
    """A commutative ring of characteristic p given by its operations."""

    name: str
    p: int
    zero: object
    one: object
    add: object
    mul: object
    neg: object
    sample: object = None  # rng -> element, used for the axiom spot check
    base: object = None    # underlying FieldParams when there is one

    def __post_init__(self):
        if self.sample is not None:
            check_ring_axioms(self)

    def sub(self, a, b):
        return self.add(a, self.neg(b))

    def from_int(self, n):
        r = self.zero
        for _ in range(n % self.p):
            r = self.add(r, self.one)
        return r

    def pow(self, a, e):
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r


def check_ring_axioms(R, trials=100, seed=0):
    import random
    rng = random.Random(seed)
    for _ in range(trials):
        a, b, c = R.sample(rng), R.sample(rng), R.sample(rng)
        ok = (R.add(a, b) == R.add(b, a)
              and R.mul(a, b) == R.mul(b, a)
              and R.add(R.add(a, b), c) == R.add(a, R.add(b, c))
              and R.mul(R.mul(a, b), c) == R.mul(a, R.mul(b, c))
              and R.mul(a, R.add(b, c)) == R.add(R.mul(a, b), R.mul(a, c))
              and R.add(a, R.neg(a)) == R.zero
              and R.mul(a, R.one) == a)
        if not ok:
            raise ValueError(f"{R.name}: ring axioms fail on {(a, b, c)}")


@lru_cache(maxsize=None)
def field_ring(F):
    """F_q viewed as a GenericRing (forces the structure-polynomial path)."""
    return GenericRing(f"F_{F.q}", F.p, 0, 1, F.add, F.mul, F.neg,
                       sample=F.random, base=F)


@lru_cache(maxsize=None)
def dual_numbers(F):
    """F_q[eps]/(eps^2); elements are pairs (a, b) meaning a + b*eps."""
    def add(x, y):
        return (F.add(x[0], y[0]), F.add(x[1], y[1]))

    def mul(x, y):
        return (F.mul(x[0], y[0]), F.add(F.mul(x[0], y[1]), F.mul(x[1], y[0])))

    def neg(x):
        return (F.neg(x[0]), F.neg(x[1]))

    return GenericRing(f"F_{F.q}[eps]", F.p, (0, 0), (1, 0), add, mul, neg,
                       sample=lambda rng: (F.random(rng), F.random(rng)), base=F)


def _trim(c):
    c = list(c)
    while c and c[-1] == 0:
        c.pop()
    return tuple(c)


@lru_cache(maxsize=None)
def polynomial_ring(F):
    """F_q[t]; elements are coefficient tuples, lowest degree first."""
    def add(x, y):
        n = max(len(x), len(y))
        x = x + (0,) * (n - len(x))
        y = y + (0,) * (n - len(y))
        return _trim(F.add(a, b) for a, b in zip(x, y))

    def mul(x, y):
        if not x or not y:
            return ()
        out = [0] * (len(x) + len(y) - 1)
        for i, a in enumerate(x):
            if a:
                for j, b in enumerate(y):
                    if b:
                        out[i + j] = F.add(out[i + j], F.mul(a, b))
        return _trim(out)

    def neg(x):
        return tuple(F.neg(a) for a in x)

    def sample(rng):
        return _trim(F.random(rng) for _ in range(rng.randrange(4)))

    return GenericRing(f"F_{F.q}[t]", F.p, (), (1,), add, mul, neg, sample=sample, base=F)


def poly_eval(F, f, t):
    """Evaluate an F_q[t] element at t."""
    r = 0
    for c in reversed(f):
        r = F.add(F.mul(r, t), c)
    return r


# ---------------------------------------------------------------------------
# structure polynomials

MAX_TERMS = 400_000


_EXP_BITS = 16


def _pack(e):
    k = 0
    for x in reversed(e):
        k = (k << _EXP_BITS) | x
    return k


def _unpack(k, nvars):
    mask = (1 << _EXP_BITS) - 1
    out = []
    for _ in range(nvars):
        out.append(k & mask)
        k >>= _EXP_BITS
    return tuple(out)


def _pmul(a, b, limit=MAX_TERMS):
    # exponent vectors are packed into ints so that adding them is one addition
    if not a or not b:
        return {}
    nvars = len(next(iter(a)))
    pb = [(_pack(e), c) for e, c in b.items()]
    out = {}
    get = out.get
    for ea, ca in a.items():
        ka = _pack(ea)
        for kb, cb in pb:
            k = ka + kb
            out[k] = get(k, 0) + ca * cb
        if len(out) > limit:
            raise OverflowGuard("structure polynomial grew beyond the term guard")
    return {_unpack(k, nvars): c for k, c in out.items() if c}


def _ppow(a, n, nvars):
    r = {(0,) * nvars: 1}
    base = a
    while n:
        if n & 1:
            r = _pmul(r, base)
        n >>= 1
        if n:
            base = _pmul(base, base)
    return r


def _padd(a, b, scale=1):
    out = dict(a)
    for e, c in b.items():
        out[e] = out.get(e, 0) + scale * c
    return {e: c for e, c in out.items() if c}


def _var(i, nvars):
    e = [0] * nvars
    e[i] = 1
    return {tuple(e): 1}


@dataclass(frozen=True)
class StructurePolynomialTable:
    """Phi_i (addition) and Psi_i (multiplication) over 2s variables
    x_0..x_{s-1}, y_0..y_{s-1}.  add_polys/mul_polys are reduced mod p and
    stored as tuples of (coefficient, exponent vector); the *_int variants
    keep the exact integer polynomials."""

    p: int
    s: int
    add_polys: tuple
    mul_polys: tuple
    add_int: tuple
    mul_int: tuple


_SP_CACHE = {}
_SP_LOCK = threading.Lock()


def _ghost_poly(p, n, offset, nvars):
    w = {}
    for i in range(n + 1):
        e = [0] * nvars
        e[offset + i] = p ** (n - i)
        w = _padd(w, {tuple(e): p ** i})
    return w


def _solve_ghost(p, s, target):
    """Given ghost components target[n] of the result, recover the integer
    Witt polynomials by w_n = sum_i p^i X_i^(p^(n-i))."""
    nvars = 2 * s
    out = []
    for n in range(s):
        rhs = dict(target[n])
        for i, Xi in enumerate(out):
            rhs = _padd(rhs, _ppow(Xi, p ** (n - i), nvars), -(p ** i))
        pn = p ** n
        poly = {}
        for e, c in rhs.items():
            if c % pn:
                raise ArithmeticError("ghost recursion is not integral")
            poly[e] = c // pn
        out.append(poly)
    return out


def generate_structure_polynomials(p, s):
    """Witt addition and multiplication polynomials for W_s, memoized."""
    if s < 1:
        raise ValueError("s must be >= 1")
    key = (p, s)
    tab = _SP_CACHE.get(key)
    if tab is not None:
        return tab
    with _SP_LOCK:
        tab = _SP_CACHE.get(key)
        if tab is not None:
            return tab
        nvars = 2 * s
        gx = [_ghost_poly(p, n, 0, nvars) for n in range(s)]
        gy = [_ghost_poly(p, n, s, nvars) for n in range(s)]
        phi = _solve_ghost(p, s, [_padd(gx[n], gy[n]) for n in range(s)])
        psi = _solve_ghost(p, s, [_pmul(gx[n], gy[n]) for n in range(s)])

        def reduce(polys):
            return tuple(
                tuple(sorted((c % p, e) for e, c in P.items() if c % p))
                for P in polys
            )

        tab = StructurePolynomialTable(
            p, s, reduce(phi), reduce(psi),
            tuple(tuple(sorted(P.items())) for P in phi),
            tuple(tuple(sorted(P.items())) for P in psi),
        )
        _SP_CACHE[key] = tab
        return tab


def ghost_components(p, digits):
    """Ghost vector (w_0, ..., w_{s-1}) of integer digits."""
    return tuple(sum(p ** i * digits[i] ** (p ** (n - i)) for i in range(n + 1))
                 for n in range(len(digits)))


def eval_int_poly(poly, values):
    total = 0
    for e, c in poly:
        term = c
        for v, k in zip(values, e):
            if k:
                term *= v ** k
        total += term
    return total


def _eval_poly(R, poly, values):
    """Evaluate a mod-p polynomial (tuple of (coeff, exps)) over ring R."""
    cache = {}

    def power(i, k):
        key = (i, k)
        r = cache.get(key)
        if r is None:
            r = R.pow(values[i], k)
            cache[key] = r
        return r

    acc = R.zero
    for c, e in poly:
        term = R.from_int(c)
        for i, k in enumerate(e):
            if k:
                term = R.mul(term, power(i, k))
        acc = R.add(acc, term)
    return acc


# ---------------------------------------------------------------------------
# Witt rings and vectors

class WittRing:
    """W_s(R) for R a FieldParams (Galois ring path) or a GenericRing."""

    def __init__(self, base, s):
        self.base = base
        self.s = s
        self.p = base.p
        if isinstance(base, FieldParams):
            self.gr = galois_ring(base, s)
            self.R = field_ring(base)  # structure-polynomial path, for cross-checks
        else:
            self.gr = None
            self.R = base

    @property
    def is_finite(self):
        return self.gr is not None

    def __eq__(self, other):
        return isinstance(other, WittRing) and other.s == self.s and (
            other.base == self.base if self.is_finite else other.base is self.base)

    def __hash__(self):
        return hash((self.s, self.base if self.is_finite else id(self.base)))

    def __repr__(self):
        name = f"F_{self.base.q}" if self.is_finite else self.base.name
        return f"W_{self.s}({name})"

    @property
    def table(self):
        return generate_structure_polynomials(self.p, self.s)

    # constructors
    def vector(self, digits):
        digits = tuple(digits)
        if len(digits) != self.s:
            raise ValueError(f"expected {self.s} digits, got {len(digits)}")
        return WittVector(self, digits)

    def zero(self):
        z = 0 if self.is_finite else self.R.zero
        return WittVector(self, (z,) * self.s)

    def one(self):
        if self.is_finite:
            return WittVector(self, (1,) + (0,) * (self.s - 1))
        return WittVector(self, (self.R.one,) + (self.R.zero,) * (self.s - 1))

    def from_int(self, n):
        if self.is_finite:
            return self.from_gr(self.gr.from_int(n))
        acc = self.zero()
        one = self.one()
        for _ in range(n % self.p ** self.s):
            acc = acc + one
        return acc

    def teichmuller(self, a):
        z = 0 if self.is_finite else self.R.zero
        return WittVector(self, (a,) + (z,) * (self.s - 1))

    def single(self, a, i):
        """The one-digit vector V^i[a] = p^i [a^(p^-i)]."""
        z = 0 if self.is_finite else self.R.zero
        d = [z] * self.s
        if i < self.s:
            d[i] = a
        return WittVector(self, tuple(d))

    def from_gr(self, g):
        return WittVector(self, self.gr.to_digits(g))

    def random(self, rng):
        if self.is_finite:
            return WittVector(self, tuple(self.base.random(rng) for _ in range(self.s)))
        return WittVector(self, tuple(self.R.sample(rng) for _ in range(self.s)))

    # structure-polynomial arithmetic on digit tuples
    def _generic(self, polys, a, b):
        R = self.R
        vals = tuple(a) + tuple(b)
        return tuple(_eval_poly(R, polys[i], vals) for i in range(self.s))

    def add_digits(self, a, b):
        return self._generic(self.table.add_polys, a, b)

    def mul_digits(self, a, b):
        return self._generic(self.table.mul_polys, a, b)

    def neg_digits(self, a):
        R = self.R
        if self.p != 2:
            return tuple(R.neg(x) for x in a)
        # p = 2: -1 = (1, 1, 1, ...)
        minus_one = (R.one,) * self.s
        return self.mul_digits(minus_one, a)


@dataclass(frozen=True)
class WittVector:
    ring: WittRing
    digits: tuple

    def _check(self, other):
        if not isinstance(other, WittVector) or other.ring != self.ring:
            raise ParamsMismatch("Witt vectors over different rings")

    def to_gr(self):
        return self.ring.gr.from_digits(self.digits)

    def __add__(self, other):
        self._check(other)
        W = self.ring
        if W.is_finite:
            return W.from_gr(W.gr.add(self.to_gr(), other.to_gr()))
        return WittVector(W, W.add_digits(self.digits, other.digits))

    def __mul__(self, other):
        self._check(other)
        W = self.ring
        if W.is_finite:
            return W.from_gr(W.gr.mul(self.to_gr(), other.to_gr()))
        return WittVector(W, W.mul_digits(self.digits, other.digits))

    def __neg__(self):
        W = self.ring
        if W.is_finite:
            return W.from_gr(W.gr.neg(self.to_gr()))
        return WittVector(W, W.neg_digits(self.digits))

    def __sub__(self, other):
        return self + (-other)

    def is_zero(self):
        z = 0 if self.ring.is_finite else self.ring.R.zero
        return all(d == z for d in self.digits)

    def valuation(self):
        return valuation(self)

    def to_json(self):
        return {"s": self.ring.s, "digits": list(self.digits)}


def witt_ring_op(a, b, op):
    """Ring operation on WittVectors: op in {'add', 'mul', 'neg'}."""
    if op == "neg":
        return -a
    if op == "add":
        return a + b
    if op == "mul":
        return a * b
    raise ValueError(f"unknown op {op!r}")


def teichmuller_digits(g, W):
    """Galois-ring element (packed int) -> WittVector of W."""
    return W.from_gr(g)


def from_digits(w):
    """WittVector -> Galois-ring element (packed int)."""
    return w.ring.gr.from_digits(w.digits)


def valuation(a):
    """Index of the first nonzero digit; s for the zero vector."""
    W = a.ring
    z = 0 if W.is_finite else W.R.zero
    for i, d in enumerate(a.digits):
        if d != z:
            return i
    return W.s


def invert_unit(a):
    W = a.ring
    if valuation(a) != 0:
        raise NotAUnit("Witt vector has positive valuation")
    if W.is_finite:
        return W.from_gr(W.gr.inv(a.to_gr()))
    # generic path: Newton iteration x <- x(2 - a x), starting from a lift of
    # the inverse of the leading digit is not available in general rings, so
    # only rings that expose `inv` on the base are supported here
    inv = getattr(W.R, "inv", None)
    if inv is None:
        raise NotAUnit("cannot invert over this coefficient ring")
    x = W.teichmuller(inv(a.digits[0]))
    two = W.from_int(2)
    for _ in range(W.s.bit_length() + 1):
        x = x * (two - a * x)
    return x


def _vp(n, p):
    k = 0
    while n % p == 0:
        n //= p
        k += 1
    return k


def witt_log(u):
    """p-adic logarithm of u = 1 + z, z in pW_s, as an element of W_s.

    Each term (-1)^(j-1) z^j / j is computed as p^(j-v) (z/p)^j / (j/p^v)
    with v = v_p(j): the division by p^v is absorbed exactly before
    reducing mod p^s, so no precision is lost.
    """
    W = u.ring
    if not W.is_finite:
        raise DomainError("witt_log needs a finite residue field")
    gr = W.gr
    p, s = W.p, W.s
    z = gr.sub(u.to_gr(), 1)
    if gr.valuation(z) < 1:
        raise DomainError("u is not congruent to 1 mod p")
    # terms with j - v_p(j) >= s vanish mod p^s
    js = []
    j = 1
    while True:
        if j - _vp(j, p) < s:
            js.append(j)
        elif j > s + 2 * s:
            break
        j += 1
    K = max(_vp(j, p) for j in js)
    big = galois_ring(W.base, s + K)
    zp = big.encode(gr.decode(gr.div_p(z, 1)))  # any lift of z/p
    acc = 0
    for j in js:
        v = _vp(j, p)
        if j - v < 1:
            raise PrecisionError(f"term j={j} needs more p-divisibility than available")
        unit = big.inv(big.from_int(j // p ** v))
        term = big.mul(big.mul_p(big.pow(zp, j), j - v), unit)
        if j % 2 == 0:
            term = big.neg(term)
        acc = big.add(acc, term)
    return W.from_gr(gr.encode(big.decode(acc)))


def mul_by_p(a):
    """p * a computed on digits: (0, a_0^p, ..., a_{s-2}^p)."""
    W = a.ring
    if W.is_finite:
        F = W.base
        return WittVector(W, (0,) + tuple(F.frob(x, 1) for x in a.digits[:-1]))
    R = W.R
    return WittVector(W, (R.zero,) + tuple(R.pow(x, W.p) for x in a.digits[:-1]))


def witt_from_json(obj, F):
    return WittRing(F, int(obj["s"])).vector(obj["digits"])
