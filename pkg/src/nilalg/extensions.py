"""Central extensions L_theta and the inverse construction.

A cocycle theta = (theta_1, ..., theta_s) with values in F^s gives the
algebra on L + F^s with [x + v, y + w] = [x, y] + theta(x, y).  The new
basis vectors are appended after the basis of L, so they are always the
last s coordinates.
"""
from collections import namedtuple

from .linalg import Matrix, span, intersect, complement_units
from .liealg import LieAlgebra, LieError, center, derived, change_basis
from .cohomology import pair_index, cohomology, is_cocycle, common_radical


class NotADescendant(LieError):
    pass


def central_extension(L, thetas, check=True):
    """thetas: list of s cocycles of L in Delta coordinates."""
    F, n = L.F, L.dim
    s = len(thetas)
    _, pairs = pair_index(n)
    if check:
        for t in thetas:
            if len(t) != len(pairs):
                raise ValueError("cocycle has wrong length")
            if not is_cocycle(L, t):
                raise ValueError("not a cocycle: %r" % (tuple(t),))
    table = {}
    for p, (i, j) in enumerate(pairs):
        v = tuple(L.basis_bracket(i, j)) + tuple(t[p] for t in thetas)
        if any(c != F.zero for c in v):
            table[(i, j)] = v
    return LieAlgebra(F, n + s, table, check=check)


def is_step_s_descendant(L, thetas):
    """Both conditions: common radical meets C(L) trivially, and the
    classes of the thetas are independent in H^2."""
    if not thetas:
        return False
    ctx = cohomology(L)
    rad = common_radical(L, thetas)
    if intersect(rad, center(L)).dim != 0:
        return False
    if not all(is_cocycle(L, t) for t in thetas):
        return False
    U = span(L.F, [ctx.reduce(t) for t in thetas], ctx.dim)
    return U.dim == len(thetas)


Extraction = namedtuple("Extraction", "parent U thetas basis")


def extract_cocycle(K):
    """Write K as a central extension of K/C(K).

    The basis used is: standard basis vectors of K at the non-pivot
    positions of C(K) (these map to the basis of the quotient), followed by
    the canonical basis of C(K).  In that basis K is literally
    ``central_extension(parent, thetas)``.  ``basis`` is that basis as
    matrix columns; ``U`` is the span of the classes in H^2(parent) in the
    default cohomology coordinates of ``parent``.
    """
    F, n = K.F, K.dim
    C = center(K)
    D = derived(K)
    if intersect(C, D) != C:
        raise NotADescendant("the center is not contained in the derived algebra")
    if C.dim == n:
        raise NotADescendant("abelian algebra")
    comp = complement_units(F, C)
    B = Matrix.from_columns(F, comp + list(C.basis), n)
    K2 = change_basis(K, B)
    m = n - C.dim
    _, pairs = pair_index(m)
    ptable = {}
    for (i, j), v in K2.table.items():
        if j < m:
            head = v[:m]
            if any(c != F.zero for c in head):
                ptable[(i, j)] = head
    parent = LieAlgebra(F, m, ptable, check=False)
    thetas = []
    for k in range(C.dim):
        thetas.append(tuple(K2.basis_bracket(i, j)[m + k] for i, j in pairs))
    ctx = cohomology(parent)
    U = span(F, [ctx.reduce(t) for t in thetas], ctx.dim)
    return Extraction(parent, U, thetas, B)
