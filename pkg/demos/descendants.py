"""Central extensions of a 5-dimensional algebra, worked by hand.

The 6-dimensional algebras with a 1-dimensional center inside the derived
algebra, whose quotient by the center is L5_8, correspond to orbits of
Aut(L5_8) on allowable lines of H^2(L5_8).  We enumerate those orbits,
build one extension per orbit and identify it.
"""
from nilalg import GF, instantiate, cohomology, automorphism_group, identify
from nilalg.autorbits import orbits_on_allowable
from nilalg.extensions import central_extension
from nilalg.catalog import cross_validate

F = GF(3)
P = instantiate("L5_8", F)
ctx = cohomology(P)
G = automorphism_group(P)
print(f"L5_8 over {F.name}: dim H^2 = {ctx.dim}, |Aut| = {G.order}")

for U, size in orbits_on_allowable(P, 1):
    K = central_extension(P, [ctx.lift(b) for b in U.basis])
    print(f"  orbit of size {size:3d}, representative {U.basis[0]} -> {identify(K)}")

# the catalog lists the same three algebras; cross_validate matches the
# listed defining subspaces with the computed orbits
r = cross_validate("L5_8", F, 1)
print("catalog agrees:", r.ok, [str(a) for a, _, _ in r.matches])
