"""Second cohomology with trivial coefficients.

An alternating form on L is stored by its coordinates in the basis
Delta_{i,j} (i < j, lexicographic), so Delta_{1,2}, Delta_{1,3}, ...,
Delta_{n-1,n}.  Z^2 is the solution space of the cocycle identity
    t([x1,x2],x3) + t([x3,x1],x2) + t([x2,x3],x1) = 0,
B^2 is spanned by the forms (x, y) -> nu([x, y]) and H^2 is represented
by an explicit list of cocycles complementing B^2 in Z^2.

Automorphisms act by (A t)(x, y) = t(Ax, Ay), i.e. Gram matrix G ->
A^T G A.  With this (right) action act(AB) = act(B) o act(A): the map
A -> act(A) reverses products.  Orbits are the same either way, but
witnesses built from words in generators have to be multiplied in path
order; see ``autorbits``.
"""
from itertools import combinations

from .linalg import (Matrix, span, kernel, zero_space,
                     unit_vec, lin_comb, rref_rows, contains, DimensionMismatch)
from .liealg import center


def pair_index(n):
    """(i, j) -> coordinate position and the inverse list."""
    pairs = list(combinations(range(n), 2))
    return {p: k for k, p in enumerate(pairs)}, pairs


def gram(F, n, theta):
    """Gram matrix (as list of lists) of the alternating form theta."""
    G = [[F.zero] * n for _ in range(n)]
    _, pairs = pair_index(n)
    for (i, j), c in zip(pairs, theta):
        if c != F.zero:
            G[i][j] = c
            G[j][i] = F.neg(c)
    return G


def from_gram(F, n, G):
    _, pairs = pair_index(n)
    return tuple(G[i][j] for i, j in pairs)


def evaluate(F, n, theta, u, v):
    """theta(u, v)"""
    _, pairs = pair_index(n)
    r = F.zero
    for (i, j), c in zip(pairs, theta):
        if c != F.zero:
            t = F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i]))
            if t != F.zero:
                r = F.add(r, F.mul(c, t))
    return r


def _form_row(F, n, pairs, u, v):
    """Row vector r with r . theta = theta(u, v)."""
    return tuple(F.sub(F.mul(u[i], v[j]), F.mul(u[j], v[i])) for i, j in pairs)


def cocycle_space(L):
    if "Z2" in L._cache:
        return L._cache["Z2"]
    F, n = L.F, L.dim
    _, pairs = pair_index(n)
    N = len(pairs)
    e = [unit_vec(F, n, i) for i in range(n)]
    rows = []
    for a, b, c in combinations(range(n), 3):
        terms = [(L.basis_bracket(a, b), e[c]), (L.basis_bracket(c, a), e[b]),
                 (L.basis_bracket(b, c), e[a])]
        row = [F.zero] * N
        for u, v in terms:
            if any(x != F.zero for x in u):
                r = _form_row(F, n, pairs, u, v)
                row = [F.add(x, y) for x, y in zip(row, r)]
        if any(x != F.zero for x in row):
            rows.append(tuple(row))
    if rows:
        Z = kernel(Matrix(F, rows, N))
    else:
        Z = span(F, [unit_vec(F, N, k) for k in range(N)], N) if N else zero_space(F, 0)
    L._cache["Z2"] = Z
    return Z


def coboundary_vectors(L):
    """eta_k = e_k^* o [,] in Delta coordinates, for k = 0..n-1."""
    n = L.dim
    _, pairs = pair_index(n)
    return [tuple(L.basis_bracket(i, j)[k] for i, j in pairs) for k in range(n)]


def coboundary_space(L):
    if "B2" not in L._cache:
        N = L.dim * (L.dim - 1) // 2
        L._cache["B2"] = span(L.F, coboundary_vectors(L), N)
    return L._cache["B2"]


def is_cocycle(L, theta):
    return contains(cocycle_space(L), tuple(theta))


class CohomologyContext:
    """Z^2, B^2 and a fixed list of cocycles representing a basis of H^2."""

    def __init__(self, L, h_basis=None):
        F, n = L.F, L.dim
        self.L = L
        self.F = F
        self.n = n
        self.N = n * (n - 1) // 2
        self.Z = cocycle_space(L)
        self.B = coboundary_space(L)
        if h_basis is None:
            h_basis = getattr(L, "h2_hint", None)
        if h_basis is None:
            h_basis = []
            cur = self.B
            for z in self.Z.basis:
                if not contains(cur, z):
                    h_basis.append(z)
                    cur = span(F, list(cur.basis) + [z], self.N)
        self.H = [tuple(F.coerce(x) if not isinstance(x, int) or F.q is None else x
                        for x in h) for h in h_basis]
        self.dim = len(self.H)
        # coordinates with respect to B-basis followed by H-basis
        rows = list(self.B.basis) + self.H
        if len(rows) != self.Z.dim or span(F, rows, self.N) != self.Z:
            raise ValueError("H^2 representatives do not complement B^2 in Z^2")
        self._rows = rows
        red, piv, _ = rref_rows(F, rows, self.N) if rows else ((), (), None)
        self._piv = piv
        sub = Matrix(F, [[r[p] for p in piv] for r in rows]) if rows else None
        self._sub_inv = sub.inverse() if rows else None
        self._nb = self.B.dim
        C = center(L)
        self.C = C
        # radial table: value H_h(c_l, e_j)
        e = [unit_vec(F, n, j) for j in range(n)]
        self._rad = [[[evaluate(F, n, h, c, ej) for ej in e] for c in C.basis]
                     for h in self.H]

    # -- coordinates -------------------------------------------------------
    def lift(self, v):
        """H-coordinates -> cocycle in Delta coordinates."""
        if len(v) != self.dim:
            raise DimensionMismatch("H^2 coordinate vector has wrong length")
        return lin_comb(self.F, v, self.H, self.N)

    def decompose(self, theta):
        """(B-coords, H-coords) of a cocycle."""
        F = self.F
        if not self._rows:
            if any(x != F.zero for x in theta):
                raise ValueError("not a cocycle")
            return (), ()
        x = tuple(theta[p] for p in self._piv)
        c = tuple(sum_dot(F, x, self._sub_inv.col(k)) for k in range(len(self._rows)))
        if lin_comb(F, c, self._rows, self.N) != tuple(theta):
            raise ValueError("not a cocycle")
        return c[:self._nb], c[self._nb:]

    def reduce(self, theta):
        return self.decompose(theta)[1]

    # -- action ------------------------------------------------------------
    def transform(self, A, theta):
        """(A theta)(x, y) = theta(Ax, Ay) in Delta coordinates."""
        F, n = self.F, self.n
        G = gram(F, n, theta)
        cols = A.columns()
        Gm = Matrix(F, G)
        GA = [Gm.apply(c) for c in cols]          # G a_j
        _, pairs = pair_index(n)
        return tuple(sum_dot(F, cols[i], GA[j]) for i, j in pairs)

    def action_matrix(self, A):
        """Rows: images of the H-basis vectors, in H-coordinates, so the
        image of a row vector v is v * M."""
        return Matrix(self.F, [self.reduce(self.transform(A, h)) for h in self.H],
                      self.dim)

    def act(self, A, v):
        return self.reduce(self.transform(A, self.lift(v)))

    def act_subspace(self, A, U, M=None):
        if M is None:
            M = self.action_matrix(A)
        F = self.F
        rows = [tuple(sum_dot(F, u, M.col(k)) for k in range(self.dim)) for u in U.basis]
        return span(F, rows, self.dim)

    # -- radicals and allowability ------------------------------------------
    def allowable(self, U):
        """True iff the common radical of U meets C(L) trivially."""
        F = self.F
        r = self.C.dim
        if r == 0:
            return True
        nr = len(self.C.basis)
        rows = []
        for u in U.basis:
            for j in range(self.n):
                row = []
                for l in range(nr):
                    s = F.zero
                    for h, c in enumerate(u):
                        if c != F.zero:
                            s = F.add(s, F.mul(c, self._rad[h][l][j]))
                    row.append(s)
                rows.append(row)
        if not rows:
            return False
        red, piv, _ = rref_rows(F, rows, nr)
        return len(red) == nr


def sum_dot(F, u, v):
    r = F.zero
    for a, b in zip(u, v):
        if a != F.zero and b != F.zero:
            r = F.add(r, F.mul(a, b))
    return r


def cohomology(L, h_basis=None):
    if h_basis is None and "H2ctx" in L._cache:
        return L._cache["H2ctx"]
    ctx = CohomologyContext(L, h_basis)
    if h_basis is None:
        L._cache["H2ctx"] = ctx
    return ctx


def radical(L, theta):
    F, n = L.F, L.dim
    return kernel(Matrix(F, gram(F, n, theta)))


def common_radical(L, thetas):
    F, n = L.F, L.dim
    rows = []
    for t in thetas:
        rows.extend(gram(F, n, t))
    if not rows:
        return span(F, [unit_vec(F, n, i) for i in range(n)], n)
    return kernel(Matrix(F, rows, n))


def is_allowable(ctx, U):
    return ctx.allowable(U)


def act_on_H2(ctx, A, v):
    return ctx.act(A, v)


def act_on_subspace(ctx, A, U):
    return ctx.act_subspace(A, U)
