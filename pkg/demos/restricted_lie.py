"""Jacobson's formula and the truncated model for p = 3.

    python3 demos/restricted_lie.py
"""
import random

from wittkit import rla

for p in (2, 3, 5):
    t = rla.jacobson_polynomials(p)
    print(f"p={p}:")
    for i, si in enumerate(t.s, 1):
        terms = " + ".join(f"{c}*{rla.JacobsonTable.word_str(w)}" for w, c in sorted(si.items()))
        print(f"   s_{i} = {terms}")
    print("   matrix check:", rla.restricted_check(p, 50, random.Random(p)))

m = rla.build_ws_model(2, 2, 3)
print("\nmodel basis:", m.basis)
for a in ("X12", "X21"):
    x = m.unit(m.index(f"{a}^0"))
    image = rla.beta_map(m, x)
    print(f"beta({a}^0) =", [m.basis[k] for k, c in enumerate(image) if c])
print("g0 closed under [p]?", m.g0_pclosed())
print("canonical weight n=2 r=1 p=2:", rla.canonical_weight(2, 1, 2)[0],
      "vs equal characteristic", rla.canonical_weight(2, 1, 2, "equal_char")[0])
