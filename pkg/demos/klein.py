"""Orbits of GL(4) on planes in the exterior square of F^4.

The quadratic form Q(theta) = af - be + cd vanishes exactly on decomposable
wedges, and GL(4) scales it by the determinant.  Gram determinants (odd q)
or Arf invariants (even q) of planes are therefore invariant up to squares,
and separate the four orbits.
"""
from nilalg import GF
from nilalg.forms import (klein_quadratic, associated_bilinear, gram_det, arf,
                          klein_representatives, verify_klein)

for q in (2, 3, 4, 5):
    F = GF(q)
    r = verify_klein(F)
    print(f"{F.name}: {r['subspaces']} planes, {r['orbits']} orbits, all matched: {r['ok']}")

F = GF(3)
Q = klein_quadratic(F)
f = associated_bilinear(Q)
print()
print("representatives over GF(3) and their Gram determinants:")
for rep in klein_representatives(F):
    W = rep.subspace.basis
    print(f"  {rep.label:24s} {gram_det(f, W)}")

F = GF(2)
Q = klein_quadratic(F)
f = associated_bilinear(Q)
print()
print("over GF(2) the Arf invariant replaces the determinant:")
for rep in klein_representatives(F):
    W = rep.subspace.basis
    if gram_det(f, W) == F.zero:
        print(f"  {rep.label:24s} polar form degenerate on the plane")
    else:
        print(f"  {rep.label:24s} arf = {arf(Q, W)}")
