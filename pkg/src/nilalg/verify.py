"""Self-checks run by ``nilalg verify``.

Each check returns (name, ok, detail).  ``quick`` runs the counting,
cohomology, Klein and descendant checks; ``full`` adds the exhaustive
automorphism-shape comparison and identification round trips under
random basis changes.
"""
import random
import time

from .field import make_field
from .linalg import random_invertible
from .liealg import change_basis
from .cohomology import cohomology
from .autorbits import (automorphism_group, NumpyOps, batch_matches_shape,
                        batch_is_homomorphism, shape_matrices, SHAPES)
from .forms import verify_klein
from . import catalog

H2_DIMS = {
    "L3_2+F^2": 7, "L4_3+F": 4, "L5_4": 5, "L5_5": 4, "L5_6": 3, "L5_7": 3, "L5_8": 6,
    "L5_9": 3, "L1_1+F^3": 6, "L3_2+F": 4, "L4_3": 2, "L1_1+F^2": 3, "L3_2": 2,
}

# (parent, step) pairs whose descendants have dimension 6
PARENT_STEPS = [
    ("L1_1+F^4", 1), ("L3_2+F^2", 1), ("L4_3+F", 1), ("L5_4", 1), ("L5_5", 1), ("L5_6", 1),
    ("L5_7", 1), ("L5_8", 1), ("L5_9", 1), ("L1_1+F^3", 2), ("L3_2+F", 2), ("L4_3", 2),
    ("L1_1+F^2", 3), ("L3_2", 3),
]


def check_counts(F):
    n = len(catalog.list_catalog(6, F))
    c = catalog.count_formula(F)
    return "count", n == c, f"list={n} formula={c}"


def check_cohomology(F):
    bad = [k for k, d in H2_DIMS.items() if cohomology(catalog.instantiate(k, F)).dim != d]
    return "cohomology", not bad, "mismatch: " + ", ".join(bad) if bad else "13 dimensions"


def check_descendants(F):
    total = 9
    bad = []
    for p, s in PARENT_STEPS:
        r = catalog.cross_validate(p, F, s)
        total += r.claimed
        if not r.ok:
            bad.append(p)
    ok = not bad and total == catalog.count_formula(F)
    return "descendants", ok, f"total={total}" + (f" failing: {bad}" if bad else "")


def check_klein(F):
    r = verify_klein(F)
    return "klein", r["ok"] and r["orbits"] == 4, f"{r['orbits']} orbits on {r['subspaces']}"


def check_aut_shapes(F):
    ops = NumpyOps(F)
    bad = []
    for key in SHAPES:
        L = catalog.instantiate(key, F)
        G = automorphism_group(L)
        inside = sum(int(batch_matches_shape(key, F, b).sum()) for b in G.element_batches())
        good = 0
        for A in shape_matrices(key, F):
            m = ops.invertible(A)
            h = batch_is_homomorphism(L, A[m])
            if not h.all():
                bad.append(key)
                break
            good += int(m.sum())
        if inside != G.order or good != G.order:
            bad.append(key)
    return "aut-shapes", not bad, "failing: " + ", ".join(bad) if bad else f"{len(SHAPES)} shapes"


def check_round_trip(F, trials=3, seed=0):
    rng = random.Random(seed)
    bad = []
    for d in range(1, 7):
        for aid, L in catalog.list_catalog(d, F):
            for t in range(trials + 1):
                K = L if t == 0 else change_basis(L, random_invertible(F, L.dim, rng))
                if catalog.identify(K) != aid:
                    bad.append(str(aid))
                    break
    return "round-trip", not bad, "failing: " + ", ".join(bad) if bad else "all ids"


def run(field, level="quick", seed=0):
    F = make_field(field)
    checks = [check_counts, check_cohomology, check_descendants]
    if F.q is not None and F.q <= 5:
        checks.append(check_klein)
    if level == "full":
        if F.q is not None and F.q <= 3:
            checks.append(check_aut_shapes)
        checks.append(lambda F: check_round_trip(F, seed=seed))
    out = []
    for c in checks:
        t = time.time()
        name, ok, detail = c(F)
        out.append((name, ok, detail, time.time() - t))
    return out
