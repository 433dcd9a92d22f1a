"""Bilinear and quadratic forms: canonical alternating forms, symplectic
bases, Gram determinants and Arf invariants, plus the two quadratic forms
used to separate orbits (the Klein form on the exterior square of F^4
and the determinant form on H^2 of L3_2+F).

Quadratic forms are stored by an upper-triangular coefficient matrix
U with Q(x) = sum_{i<=j} U_ij x_i x_j, which is what makes the char 2
case work: the associated bilinear form U + U^T is then alternating.
"""
from collections import namedtuple

from .linalg import (Matrix, Subspace, span, unit_vec,
                     gl_generators, gaussian_binomial, BudgetExceeded)
from .field import (FieldError, omega, psi_image, square_class_transversal,
                    star_plus_transversal)


class FormError(ValueError):
    pass


def _dot(F, u, v):
    r = F.zero
    for a, b in zip(u, v):
        if a != F.zero and b != F.zero:
            r = F.add(r, F.mul(a, b))
    return r


class BilinearForm:
    def __init__(self, F, gram, tag=None):
        G = gram if isinstance(gram, Matrix) else Matrix(F, gram)
        if G.nrows != G.ncols:
            raise FormError("Gram matrix must be square")
        self.F = F
        self.G = G
        self.n = G.nrows
        detected = _detect_tag(F, G)
        if tag is None:
            tag = detected
        elif tag == "alternating" and detected != "alternating":
            raise FormError("Gram matrix is not alternating")
        elif tag == "symmetric" and G != G.transpose():
            raise FormError("Gram matrix is not symmetric")
        self.tag = tag

    def __call__(self, u, v):
        return _dot(self.F, u, self.G.apply(v))

    def restrict(self, basis):
        """The form on span(basis), w.r.t. the given vectors."""
        b = [tuple(v) for v in basis]
        return BilinearForm(self.F, [[self(u, v) for v in b] for u in b])

    def is_nonsingular(self):
        return self.G.is_invertible()

    def __repr__(self):
        return f"<BilinearForm {self.tag} n={self.n}>"


def _detect_tag(F, G):
    n = G.nrows
    alt = all(G[i, i] == F.zero for i in range(n)) and all(
        G[i, j] == F.neg(G[j, i]) for i in range(n) for j in range(n))
    if alt:
        return "alternating"
    if G == G.transpose():
        return "symmetric"
    return "general"


class QuadraticForm:
    def __init__(self, F, coeffs):
        U = coeffs if isinstance(coeffs, Matrix) else Matrix(F, coeffs)
        n = U.nrows
        for i in range(n):
            for j in range(i):
                if U[i, j] != F.zero:
                    raise FormError("coefficient matrix must be upper triangular")
        self.F, self.U, self.n = F, U, n

    def __call__(self, x):
        F = self.F
        r = F.zero
        for i in range(self.n):
            if x[i] == F.zero:
                continue
            row = self.U.data[i]
            for j in range(i, self.n):
                if row[j] != F.zero and x[j] != F.zero:
                    r = F.add(r, F.mul(row[j], F.mul(x[i], x[j])))
        return r

    def polar(self, u, v):
        F = self.F
        w = tuple(F.add(a, b) for a, b in zip(u, v))
        return F.sub(F.sub(self(w), self(u)), self(v))


def associated_bilinear(Q):
    """f_Q(u, v) = Q(u + v) - Q(u) - Q(v); Gram matrix U + U^T."""
    F, U, n = Q.F, Q.U, Q.n
    G = [[F.add(U[i, j], U[j, i]) for j in range(n)] for i in range(n)]
    return BilinearForm(F, G)


def _as_bilinear(f):
    return associated_bilinear(f) if isinstance(f, QuadraticForm) else f


def _reduce_pairs(f, vectors):
    """Greedy symplectic reduction of an alternating form on span(vectors).

    Take the first remaining vector with a non-orthogonal partner, the
    first such partner (scaled so f(e, f) = 1), then project the rest onto
    the orthogonal complement of the pair.  Returns (pairs, radical)."""
    F = f.F
    rest = [tuple(v) for v in vectors]
    pairs = []
    while True:
        found = None
        for a, e in enumerate(rest):
            for b in range(a + 1, len(rest)):
                c = f(e, rest[b])
                if c != F.zero:
                    found = (a, b, c)
                    break
            if found:
                break
        if found is None:
            return pairs, rest
        a, b, c = found
        e = rest[a]
        g = tuple(F.div(x, c) for x in rest[b])
        pairs.append((e, g))
        new = []
        for k, w in enumerate(rest):
            if k in (a, b):
                continue
            we, wg = f(w, e), f(w, g)
            # w - f(w, g) e + f(w, e) g is orthogonal to both e and g
            w2 = tuple(F.add(F.sub(x, F.mul(wg, y)), F.mul(we, z))
                       for x, y, z in zip(w, e, g))
            new.append(w2)
        rest = new


def alternating_canonical(f):
    """(r, P) with P invertible and P^T G P the Gram matrix of
    Delta_12 + Delta_34 + ... + Delta_{r-1,r}."""
    if f.tag != "alternating":
        raise FormError("form is not alternating")
    F, n = f.F, f.n
    pairs, rad = _reduce_pairs(f, [unit_vec(F, n, i) for i in range(n)])
    cols = [v for p in pairs for v in p]
    # the radical vectors are what is left; pick a basis of their span
    R = span(F, rad, n)
    cols += list(R.basis)
    P = Matrix.from_columns(F, cols, n)
    return 2 * len(pairs), P


def symplectic_basis(f, W):
    """e_1..e_k, f_1..f_k for span W (a list of vectors or a Subspace) on
    which f is non-singular."""
    f = _as_bilinear(f)
    vecs = list(W.basis) if isinstance(W, Subspace) else [tuple(v) for v in W]
    pairs, rad = _reduce_pairs(f, vecs)
    if any(any(x != f.F.zero for x in v) for v in rad):
        raise FormError("form is singular on the subspace")
    return [p[0] for p in pairs], [p[1] for p in pairs]


def gram_det(f, basis):
    basis = list(basis.basis) if isinstance(basis, Subspace) else list(basis)
    if not basis:
        raise FormError("empty basis")
    return _as_bilinear(f).restrict(basis).G.det()


def arf_value(Q, es, fs):
    """sum Q(e_i) Q(f_i) for a given symplectic basis."""
    F = Q.F
    r = F.zero
    for e, g in zip(es, fs):
        r = F.add(r, F.mul(Q(e), Q(g)))
    return r


def arf(Q, W):
    """Arf invariant of Q on W, reduced into {0, omega} (char 2 only)."""
    F = Q.F
    if F.p != 2:
        raise FieldError("the Arf invariant is used in characteristic 2")
    es, fs = symplectic_basis(Q, W)
    q = arf_value(Q, es, fs)
    return F.zero if q in psi_image(F) else omega(F)


# -- the two special forms ----------------------------------------------------

def klein_form(F, theta):
    """Q = af - be + cd on coordinates (D12, D13, D14, D23, D24, D34);
    this is the Pfaffian of the Gram matrix of theta."""
    if len(theta) != 6:
        raise FormError("the Klein form takes 6 coordinates")
    a, b, c, d, e, f = theta
    return F.add(F.sub(F.mul(a, f), F.mul(b, e)), F.mul(c, d))


def klein_quadratic(F):
    U = [[F.zero] * 6 for _ in range(6)]
    U[0][5] = F.one
    U[1][4] = F.neg(F.one)
    U[2][3] = F.one
    return QuadraticForm(F, U)


def l42_form(F, v):
    """Q = a1 a4 - a2 a3 on H^2(L3_2+F) coordinates (D13, D14, D23, D24)."""
    if len(v) != 4:
        raise FormError("the L3_2+F form takes 4 coordinates")
    a1, a2, a3, a4 = v
    return F.sub(F.mul(a1, a4), F.mul(a2, a3))


def l42_quadratic(F):
    U = [[F.zero] * 4 for _ in range(4)]
    U[0][3] = F.one
    U[1][2] = F.neg(F.one)
    return QuadraticForm(F, U)


def l42_tensor_factor(A):
    """det(g1) det(g2) for an automorphism A of L3_2+F, where g1 is the
    block on x1, x2 and g2 the block on x3, x4.  The coefficient matrix
    [[a1, a2], [a3, a4]] of a class transforms as g1^T M g2, so Q scales
    by this factor."""
    F = A.F
    g1 = F.sub(F.mul(A[0, 0], A[1, 1]), F.mul(A[0, 1], A[1, 0]))
    g2 = F.sub(F.mul(A[2, 2], A[3, 3]), F.mul(A[2, 3], A[3, 2]))
    return F.mul(g1, g2)


# -- orbits of GL(4) on 2-subspaces of the exterior square ------------------

KleinRep = namedtuple("KleinRep", "label subspace")


def klein_representatives(F):
    """The listed orbit representatives on 2-subspaces of F^4 ^ F^4."""
    if not F.is_finite:
        raise FieldError("representatives are listed for finite fields only")
    z, o = F.zero, F.one
    e12_13 = span(F, [(o, z, z, z, z, z), (z, o, z, z, z, z)], 6)
    reps = [KleinRep("<v1^v2, v1^v3>", e12_13)]
    w = (o, z, z, z, z, o)
    if F.p == 2:
        om = omega(F)
        reps.append(KleinRep("nu=0", span(F, [w, (z, o, z, z, z, o)], 6)))
        reps.append(KleinRep(f"nu={F.fmt(om)}", span(F, [w, (z, o, z, z, om, o)], 6)))
        eps = star_plus_transversal(F)
    else:
        eps = square_class_transversal(F)
    for e in eps:
        reps.append(KleinRep(f"eps={F.fmt(e)}", span(F, [w, (z, o, z, z, e, z)], 6)))
    return reps


def verify_klein(F, budget=10 ** 6):
    """Brute-force GL(4, F) orbits on all 2-subspaces and match them with
    :func:`klein_representatives`.  Returns a dict report."""
    from .liealg import abelian
    from .autorbits import OrbitPartition, AutGroup
    from .linalg import gl_order
    if not F.is_finite:
        raise FieldError("verification needs a finite field")
    total = gaussian_binomial(6, 2, F.q)
    if total > budget:
        raise BudgetExceeded(f"{total} subspaces exceed the budget {budget}")
    L = abelian(F, 4)
    G = AutGroup(L, "full-GL", gl_generators(F, 4), gl_order(F, 4))
    part = OrbitPartition(L, 2, group=G)
    reps = klein_representatives(F)
    hit = [part.orbit_index(r.subspace) for r in reps]
    bijective = sorted(hit) == list(range(len(part)))
    return {
        "field": F.name,
        "subspaces": sum(part.sizes),
        "expected_subspaces": total,
        "orbits": len(part),
        "representatives": len(reps),
        "orbit_of_rep": dict(zip((r.label for r in reps), hit)),
        "sizes": list(part.sizes),
        "ok": bijective and sum(part.sizes) == total,
    }
