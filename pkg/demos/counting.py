"""How many 6-dimensional nilpotent Lie algebras are there over a small field?

Over GF(q) the answer depends only on the characteristic: 36 when q is even
and 34 when q is odd.  Over Q the families with a square-class parameter
are infinite, so only the symbolic count is available.
"""
from nilalg import GF, QQ, list_catalog, count_formula
from nilalg.catalog import symbolic_families

for q in (2, 3, 4, 5, 7, 8, 9):
    F = GF(q)
    print(f"{F.name:6s} listed {len(list_catalog(6, F)):3d}   formula {count_formula(F)}")

print()
print("over Q:", count_formula(QQ))
print("families carrying a parameter:")
for fam in symbolic_families():
    if "(" in fam:
        print("  ", fam)

# each parameterised family contributes one entry per class of parameters
F = GF(3)
print()
print("parameterised entries over GF(3):")
for aid, L in list_catalog(6, F):
    if aid.param is not None:
        print("  ", aid)
