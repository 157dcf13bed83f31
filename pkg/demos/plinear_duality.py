"""p-nilpotent maps and theta-stable complements over F_4.

    python3 demos/plinear_duality.py
"""
import random

from wittkit import gf, plin

F4 = gf.field(2, 2)
rng = random.Random(3)

nil = plin.all_nilpotents(F4, 2)
lats = plin.enumerate_transversal_lattices(F4, 2)
print(f"{len(nil)} p-nilpotent 2x2 matrices, {len(lats)} theta-stable complements")

B = ((0, 2), (0, 0))
L = plin.lattice_of_nilpotent(F4, B)
print("phi =", B)
print("L(phi) basis:", L.basis)
print("recovered phi:", plin.nilpotent_of_lattice(L))

A = gf.random_invertible(F4, rng, 2)
moved = plin.lattice_of_nilpotent(F4, plin.conjugate(F4, B, A))
print("equivariant:", moved == plin.act_lattice(L, gf.mat_inv(F4, A)))
print("duality:", plin.orthogonality_report(F4, B))
