"""Lattices of colength nr: types, orbit dimensions, point counts and the
degeneration order between orbits.

    python3 demos/lattice_orbits.py
"""
from wittkit import gf, lattice, ore

F2 = gf.field(2, 1)

print("lattices in W_2(F_2)^2 of colength 2:")
for L in lattice.enumerate_lattices(2, 2, F2, 2):
    print("   columns", L.key, "type", L.type)

print("\npoint counts of each orbit, n=2, nr=2, q = 2, 4, 8:")
for m in (1, 2, 3):
    counts, states = lattice.count_lattices_by_type(2, 2, gf.field(2, m))
    print(f"   q={2 ** m}:", dict(counts))
for t in [(2, 0), (1, 1)]:
    print(f"   type {t}: orbit dimension {ore.orbit_dimension(t)}, "
          f"stabilizer dimension {ore.stabilizer_dimension(t, 1)}")

print("\ndegenerations from (3,0,0):")
edges, _ = lattice.specialization_chain(3, 3)
for g, sp, i, j in edges:
    fam = lattice.specialization_path(g, i, j, F2)
    print(f"   {g} -> {sp}  fibres ok: {fam.verify()}")

print("\ntangent spaces at the base point (hom dimension):")
for t in [(2, 0), (1, 1)]:
    L = lattice.diagonal_lattice(t, F2, 2)
    print(f"   {t}: {lattice.hom_dimension(L)}")
