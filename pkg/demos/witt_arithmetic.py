"""Witt vectors over F_4: digits, the Galois-ring model and the logarithm.

    python3 demos/witt_arithmetic.py
"""
import random

from wittkit import gf, witt

F4 = gf.field(2, 2)
W = witt.WittRing(F4, 3)

print(W, "has", W.gr.size, "elements")
print("1 + 1 =", (W.one() + W.one()).digits, " (carry into digit 1)")
print("2 as digits:", W.from_int(2).digits)

# every sum and product is computed twice: once in the packed Galois ring,
# once by the Witt structure polynomials
rng = random.Random(0)
a, b = W.random(rng), W.random(rng)
print("a =", a.digits, " b =", b.digits)
print("a*b (Galois ring)          :", (a * b).digits)
print("a*b (structure polynomials):", W.mul_digits(a.digits, b.digits))

# p*a shifts the digits and applies Frobenius
print("2*a =", witt.mul_by_p(a).digits)

# log turns 1 + pW into an additive group
W3 = witt.WittRing(gf.field(3, 1), 3)
u, v = W3.vector((1, 1, 0)), W3.vector((1, 0, 1))
print("log(uv) =", witt.witt_log(u * v).digits,
      " log u + log v =", (witt.witt_log(u) + witt.witt_log(v)).digits)
