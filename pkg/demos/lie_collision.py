"""Why the tangent-space functor on lattices is not injective.

W.e1 and W.(e1 + p e2) are different lattices in W_2(F_2)^2, but their
tangent spaces at the origin agree: in digits, x -> p x is
(x0, x1) -> (0, x0^p), whose differential vanishes.

    python3 demos/lie_collision.py
"""
from wittkit import gf, lattice

F2 = gf.field(2, 1)
W = lattice.WittRing(F2, 2)
p = W.gr.pi(1)

L1 = lattice.lattice_from_vectors(W, [(1, 0)], 2)
L2 = lattice.lattice_from_vectors(W, [(1, p)], 2)
print("L1 columns", L1.key, "type", L1.type)
print("L2 columns", L2.key, "type", L2.type)
print("same lattice?", L1 == L2)
print("same tangent space?", lattice.lie_algebra(L1).basis == lattice.lie_algebra(L2).basis)
print("tangent basis (digit coordinates):", lattice.lie_algebra(L1).basis)
