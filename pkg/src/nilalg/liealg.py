"""Lie algebras given by structure constants.

Only the products [x_i, x_j] with i < j are stored (0-based internally);
[x_j, x_i] = -[x_i, x_j] and [x_i, x_i] = 0 are implied, which is the
alternating convention and stays correct in characteristic 2.
"""
from collections import namedtuple

from .linalg import (Matrix, span, kernel, contains,
                     is_subspace, zero_space, full_space, unit_vec, zero_vec,
                     lin_comb, vec_add, DimensionMismatch)


class LieError(ValueError):
    pass


class JacobiViolation(LieError):
    def __init__(self, triple, residual):
        self.triple = triple
        self.residual = residual
        super().__init__(f"Jacobi identity fails on x{triple[0]}, x{triple[1]}, "
                         f"x{triple[2]}")


class NotNilpotent(LieError):
    pass


Violation = namedtuple("Violation", "i j k residual")


class LieAlgebra:
    """``table`` maps (i, j) with 0 <= i < j < dim to the coefficient
    vector of [x_i, x_j].  Zero products may be omitted."""

    __slots__ = ("F", "dim", "table", "_terms", "name", "h2_hint", "_cache")

    def __init__(self, F, dim, table=None, check=True, name=None, h2_hint=None):
        self.F = F
        self.dim = dim
        clean = {}
        for (i, j), vec in (table or {}).items():
            vec = tuple(vec)
            if len(vec) != dim:
                raise DimensionMismatch("bracket vector has wrong length")
            if not (0 <= i < dim and 0 <= j < dim) or i == j:
                raise LieError(f"bad index pair {(i, j)}")
            if i > j:
                i, j, vec = j, i, tuple(F.neg(a) for a in vec)
            if any(a != F.zero for a in vec):
                clean[(i, j)] = vec
        self.table = dict(sorted(clean.items()))
        self._terms = [(i, j, tuple((k, c) for k, c in enumerate(v) if c != F.zero))
                       for (i, j), v in self.table.items()]
        self.name = name
        self.h2_hint = h2_hint
        self._cache = {}
        if check:
            bad = jacobi_check(self)
            if bad is not None:
                raise JacobiViolation((bad.i, bad.j, bad.k), bad.residual)

    def basis_bracket(self, i, j):
        F = self.F
        if i == j:
            return zero_vec(F, self.dim)
        if i < j:
            return self.table.get((i, j), zero_vec(F, self.dim))
        v = self.table.get((j, i))
        if v is None:
            return zero_vec(F, self.dim)
        return tuple(F.neg(a) for a in v)

    def bracket(self, u, v):
        F = self.F
        n = self.dim
        if len(u) != n or len(v) != n:
            raise DimensionMismatch("vector length differs from dimension")
        zero = F.zero
        out = [zero] * n
        mul, sub, add = F.mul, F.sub, F.add
        for i, j, terms in self._terms:
            ui, uj, vi, vj = u[i], u[j], v[i], v[j]
            if (ui == zero or vj == zero) and (uj == zero or vi == zero):
                continue
            c = sub(mul(ui, vj), mul(uj, vi))
            if c != zero:
                for k, a in terms:
                    out[k] = add(out[k], mul(c, a))
        return tuple(out)

    def ad(self, u):
        """Matrix of y -> [u, y]."""
        n = self.dim
        cols = [self.bracket(u, unit_vec(self.F, n, j)) for j in range(n)]
        return Matrix.from_columns(self.F, cols)

    def is_abelian(self):
        return not self.table

    def key(self):
        return (self.F, self.dim, tuple(self.table.items()))

    def __eq__(self, other):
        return isinstance(other, LieAlgebra) and self.key() == other.key()

    def __hash__(self):
        return hash(self.key())

    def __repr__(self):
        label = f" {self.name}" if self.name else ""
        return f"<LieAlgebra{label} dim={self.dim} over {self.F}: {format_table(self)}>"


def format_table(L):
    F = L.F
    parts = []
    for (i, j), v in L.table.items():
        terms = []
        for k, c in enumerate(v):
            if c == F.zero:
                continue
            terms.append(f"x{k + 1}" if c == F.one else f"{F.fmt(c)}*x{k + 1}")
        parts.append(f"[x{i + 1},x{j + 1}]=" + "+".join(terms))
    return ", ".join(parts) if parts else "abelian"


def jacobi_check(L):
    """None if the Jacobi identity holds, else the first failing triple
    (1-based, lexicographic) with its residual."""
    F, n = L.F, L.dim
    e = [unit_vec(F, n, i) for i in range(n)]
    br = L.bracket
    for i in range(n):
        for j in range(i + 1, n):
            xij = L.basis_bracket(i, j)
            for k in range(j + 1, n):
                r = br(xij, e[k])
                r = vec_add(F, r, br(L.basis_bracket(k, i), e[j]))
                r = vec_add(F, r, br(L.basis_bracket(j, k), e[i]))
                if any(a != F.zero for a in r):
                    return Violation(i + 1, j + 1, k + 1, r)
    return None


def _bracket_space(L, U, V):
    vecs = [L.bracket(u, v) for u in U.basis for v in V.basis]
    return span(L.F, vecs, L.dim)


def lower_central_series(L):
    """[L^1, L^2, ...] ending at the first repeated term."""
    if "lcs" in L._cache:
        return L._cache["lcs"]
    terms = [full_space(L.F, L.dim)]
    while True:
        nxt = _bracket_space(L, terms[0], terms[-1])
        if nxt == terms[-1]:
            break
        terms.append(nxt)
        if nxt.dim == 0:
            break
    L._cache["lcs"] = terms
    return terms


def is_nilpotent(L):
    return lower_central_series(L)[-1].dim == 0


def nilpotency_class(L):
    lcs = lower_central_series(L)
    if lcs[-1].dim != 0:
        return "not nilpotent"
    return len(lcs) - 1


def derived(L):
    lcs = lower_central_series(L)
    return lcs[1] if len(lcs) > 1 else lcs[0]


def centralizer(L, U):
    """{x : [x, U] = 0}"""
    F, n = L.F, L.dim
    if U.dim == 0:
        return full_space(F, n)
    rows = []
    for u in U.basis:
        rows.extend(L.ad(u).data)   # [u, x] = ad(u) x
    return kernel(Matrix(F, rows, n))


def center(L):
    if "center" not in L._cache:
        L._cache["center"] = centralizer(L, full_space(L.F, L.dim))
    return L._cache["center"]


def upper_central_series(L):
    """[0, Z_1 = C(L), Z_2, ...] up to the first repeated term."""
    F, n = L.F, L.dim
    terms = [zero_space(F, n)]
    while True:
        nxt = span(F, _kernel_mod(L, terms[-1]), n)
        if nxt == terms[-1]:
            break
        terms.append(nxt)
        if nxt.dim == n:
            break
    return terms


def _kernel_mod(L, Z):
    """Basis of {x : [x, L] <= Z}."""
    F, n = L.F, L.dim
    rows = []
    normals = _annihilator(F, Z)
    for j in range(n):
        ad = L.ad(unit_vec(F, n, j))  # ad(e_j) x = [e_j, x]
        for w in normals:
            rows.append(tuple(_dot(F, w, col) for col in ad.columns()))
    if not rows:
        return list(full_space(F, n).basis)
    return list(kernel(Matrix(F, rows, n)).basis)


def _dot(F, u, v):
    r = F.zero
    for a, b in zip(u, v):
        r = F.add(r, F.mul(a, b))
    return r


def _annihilator(F, Z):
    """Rows w spanning {w : w . z = 0 for z in Z}."""
    if Z.dim == 0:
        return [unit_vec(F, Z.n, i) for i in range(Z.n)]
    return list(kernel(Matrix(F, Z.basis, Z.n)).basis)


def quotient(L, I):
    """L / I for a central ideal I.

    The quotient basis is the images of the standard basis vectors at the
    non-pivot positions of I (in increasing order).  Returns the quotient
    algebra and the projection matrix (dim L / I by dim L)."""
    F, n = L.F, L.dim
    if not is_subspace(I, center(L)):
        raise LieError("quotient is only implemented for central ideals")
    keep = [j for j in range(n) if j not in I.pivots]

    def project(v):
        r = I.reduce(v)
        return tuple(r[j] for j in keep)

    m = len(keep)
    table = {}
    for a in range(m):
        for b in range(a + 1, m):
            v = project(L.basis_bracket(keep[a], keep[b]))
            if any(c != F.zero for c in v):
                table[(a, b)] = v
    Q = LieAlgebra(F, m, table, check=False)
    proj = Matrix.from_columns(F, [project(unit_vec(F, n, j)) for j in range(n)], m)
    return Q, proj


def restrict(L, basis):
    """The subalgebra spanned by ``basis`` written in that basis."""
    F = L.F
    table = {}
    k = len(basis)
    for a in range(k):
        for b in range(a + 1, k):
            v = L.bracket(basis[a], basis[b])
            c = _coords_in(F, basis, v, L.dim)
            if any(x != F.zero for x in c):
                table[(a, b)] = c
    return LieAlgebra(F, k, table, check=False)


def _coords_in(F, basis, v, n):
    from .linalg import solve
    x = solve(Matrix.from_columns(F, basis), v)
    if x is None:
        raise LieError("subspace is not closed under the bracket")
    return x


Split = namedtuple("Split", "core m basis")


def split_abelian_summand_full(L):
    """Split off 1-dimensional central summands.

    Returns ``Split(core, m, basis)`` where ``basis`` is an invertible
    matrix whose first ``dim core`` columns span the core ideal (in the
    basis used for ``core``) and whose last ``m`` columns are central
    vectors outside the derived algebra; so ``change_basis(L, basis)`` is
    literally ``core`` with ``m`` zero rows and columns appended."""
    F, n = L.F, L.dim
    cur = [unit_vec(F, n, i) for i in range(n)]   # basis of the current core
    stripped = []
    while True:
        K = restrict(L, cur)
        C, D = center(K), derived(K)
        z = next((v for v in C.basis if not contains(D, v)), None)
        if z is None:
            break
        # hyperplane containing D and avoiding z: D plus standard complement
        DZ = span(F, list(D.basis) + [z], K.dim)
        W = list(D.basis) + [unit_vec(F, K.dim, j) for j in range(K.dim)
                             if j not in DZ.pivots]
        H = span(F, W, K.dim)
        # express in L coordinates
        zL = lin_comb(F, z, cur, n)
        cur = [lin_comb(F, h, cur, n) for h in H.basis]
        stripped.insert(0, zL)
    core = restrict(L, cur)
    basis = Matrix.from_columns(F, cur + stripped, n)
    return Split(core, len(stripped), basis)


def split_abelian_summand(L):
    s = split_abelian_summand_full(L)
    return s.core, s.m


def change_basis(L, P):
    """The table of L in the basis y_i = P e_i (columns of P)."""
    if P.nrows != L.dim or P.ncols != L.dim:
        raise DimensionMismatch("basis matrix has wrong size")
    if not P.is_invertible():
        raise LieError("basis change matrix is singular")
    F, n = L.F, L.dim
    Pinv = P.inverse()
    cols = P.columns()
    table = {}
    for a in range(n):
        for b in range(a + 1, n):
            v = Pinv.apply(L.bracket(cols[a], cols[b]))
            if any(c != F.zero for c in v):
                table[(a, b)] = v
    return LieAlgebra(F, n, table, check=False)


def is_homomorphism(L1, L2, P):
    """P [x, y]_1 = [P x, P y]_2 on all basis pairs."""
    if P.ncols != L1.dim or P.nrows != L2.dim:
        return False
    cols = P.columns()
    for a in range(L1.dim):
        for b in range(a + 1, L1.dim):
            if P.apply(L1.basis_bracket(a, b)) != L2.bracket(cols[a], cols[b]):
                return False
    return True


def is_isomorphism(L1, L2, P):
    return (L1.dim == L2.dim and P.nrows == P.ncols == L1.dim
            and P.is_invertible() and is_homomorphism(L1, L2, P))


def fingerprint(L):
    """Isomorphism invariants used to rule out isomorphisms quickly."""
    lcs = lower_central_series(L)
    C = center(L)
    D = derived(L)
    L3 = lcs[2] if len(lcs) > 2 else lcs[-1]
    cent = centralizer(L, D)
    d_abelian = all(a == L.F.zero for u in D.basis for v in D.basis
                    for a in L.bracket(u, v))
    return (tuple(t.dim for t in lcs), C.dim, D.dim, C == L3, cent.dim, d_abelian)


def direct_sum_abelian(L, m):
    """L plus m central basis vectors appended at the end."""
    F = L.F
    n = L.dim + m
    table = {k: tuple(v) + (F.zero,) * m for k, v in L.table.items()}
    return LieAlgebra(F, n, table, check=False)


def abelian(F, n):
    return LieAlgebra(F, n, {}, check=False)


def characteristic_subspaces(L):
    """A list of subspaces fixed by every automorphism."""
    if "char_subs" in L._cache:
        return L._cache["char_subs"]
    subs = list(lower_central_series(L))
    subs.extend(upper_central_series(L))
    extra = []
    for U in subs:
        extra.append(centralizer(L, U))
    subs.extend(extra)
    out = []
    for U in subs:
        if U not in out and 0 < U.dim < L.dim:
            out.append(U)
    L._cache["char_subs"] = out
    return out
