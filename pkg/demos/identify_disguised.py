"""Recognise an algebra after a random change of basis.

We hide L6_19(2) over GF(5) behind a random basis, hand it to identify,
and check that the returned matrix is an isomorphism back to the catalog
table.  The parameter is recovered up to squares: 2 and 3 are the
non-squares mod 5, so L6_19(3) comes back as L6_19(2).
"""
import random

from nilalg import GF, instantiate, change_basis, identify, is_isomorphism, isomorphic
from nilalg.linalg import random_invertible

F = GF(5)
rng = random.Random(2024)
for name in ("L6_19(2)", "L6_19(3)", "L6_19(4)"):
    L = instantiate(name, F)
    K = change_basis(L, random_invertible(F, 6, rng))
    aid, X = identify(K, witness=True)
    print(f"{name:10s} disguised -> {aid}   witness ok: {is_isomorphism(K, instantiate(aid, F), X)}")

# isomorphic() gives the same verdicts without the catalog
a, b = instantiate("L6_19(1)", F), instantiate("L6_19(4)", F)
print("L6_19(1) ~ L6_19(4):", isomorphic(a, b)[0])
print("L6_19(1) ~ L6_19(2):", isomorphic(a, instantiate("L6_19(2)", F))[0])
