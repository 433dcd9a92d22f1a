"""Dense exact linear algebra over a FieldCtx.

Vectors are tuples of field elements.  Matrices are :class:`Matrix` values
(row-major tuples).  A :class:`Subspace` is stored by the reduced row
echelon form of a spanning set, which is unique, so equality and hashing
are plain tuple comparisons.
"""
from heapq import merge
from itertools import combinations, product

from .field import InfiniteTransversal


class DimensionMismatch(ValueError):
    pass


class BudgetExceeded(RuntimeError):
    pass


SUBSPACE_BUDGET = 10 ** 7


def zero_vec(F, n):
    return (F.zero,) * n


def unit_vec(F, n, i):
    v = [F.zero] * n
    v[i] = F.one
    return tuple(v)


def vec_add(F, u, v):
    return tuple(F.add(a, b) for a, b in zip(u, v))


def vec_sub(F, u, v):
    return tuple(F.sub(a, b) for a, b in zip(u, v))


def vec_scale(F, c, v):
    return tuple(F.mul(c, a) for a in v)


def vec_axpy(F, c, u, v):
    """c*u + v"""
    return tuple(F.add(F.mul(c, a), b) for a, b in zip(u, v))


def dot(F, u, v):
    r = F.zero
    for a, b in zip(u, v):
        r = F.add(r, F.mul(a, b))
    return r


def lin_comb(F, coeffs, vectors, n):
    out = [F.zero] * n
    for c, v in zip(coeffs, vectors):
        if c != F.zero:
            for i, a in enumerate(v):
                if a != F.zero:
                    out[i] = F.add(out[i], F.mul(c, a))
    return tuple(out)


def rref_rows(F, rows, ncols=None, transform=False):
    """Row reduce.  Returns ``(nonzero rows, pivots, T)`` where ``T`` (only
    when requested) satisfies ``T * rows = reduced`` for all rows,
    including the zero rows dropped at the bottom."""
    rows = [list(r) for r in rows]
    m = len(rows)
    if ncols is None:
        ncols = len(rows[0]) if rows else 0
    zero, one = F.zero, F.one
    T = [list(unit_vec(F, m, i)) for i in range(m)] if transform else None
    pivots = []
    r = 0
    for c in range(ncols):
        piv = None
        for i in range(r, m):
            if rows[i][c] != zero:
                piv = i
                break
        if piv is None:
            continue
        rows[r], rows[piv] = rows[piv], rows[r]
        if transform:
            T[r], T[piv] = T[piv], T[r]
        inv = F.inv(rows[r][c])
        if inv != one:
            rows[r] = [F.mul(inv, a) for a in rows[r]]
            if transform:
                T[r] = [F.mul(inv, a) for a in T[r]]
        pr = rows[r]
        for i in range(m):
            if i != r:
                f = rows[i][c]
                if f != zero:
                    ri = rows[i]
                    rows[i] = [F.sub(a, F.mul(f, b)) if b != zero else a
                               for a, b in zip(ri, pr)]
                    if transform:
                        T[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(T[i], T[r])]
        pivots.append(c)
        r += 1
        if r == m:
            break
    red = tuple(tuple(x) for x in rows[:r])
    if transform:
        return red, tuple(pivots), Matrix(F, T)
    return red, tuple(pivots), None


class Matrix:
    """Dense matrix; ``data`` is a tuple of row tuples."""
    __slots__ = ("F", "data", "nrows", "ncols")

    def __init__(self, F, rows, ncols=None):
        self.F = F
        self.data = tuple(tuple(r) for r in rows)
        self.nrows = len(self.data)
        self.ncols = len(self.data[0]) if self.data else (ncols or 0)

    @classmethod
    def identity(cls, F, n):
        return cls(F, [unit_vec(F, n, i) for i in range(n)])

    @classmethod
    def from_columns(cls, F, cols, nrows=None):
        cols = [tuple(c) for c in cols]
        if not cols:
            return cls(F, [() for _ in range(nrows or 0)])
        return cls(F, list(zip(*cols)))

    @classmethod
    def from_ints(cls, F, rows):
        return cls(F, [[F.coerce(x) for x in r] for r in rows])

    def __getitem__(self, ij):
        i, j = ij
        return self.data[i][j]

    def row(self, i):
        return self.data[i]

    def col(self, j):
        return tuple(r[j] for r in self.data)

    def columns(self):
        return [self.col(j) for j in range(self.ncols)]

    def transpose(self):
        return Matrix(self.F, list(zip(*self.data)) if self.data else [], self.nrows)

    T = property(transpose)

    def apply(self, v):
        """Matrix times column vector."""
        F = self.F
        if len(v) != self.ncols:
            raise DimensionMismatch("vector length does not match")
        return tuple(dot(F, r, v) for r in self.data)

    def __matmul__(self, other):
        if isinstance(other, Matrix):
            if self.ncols != other.nrows:
                raise DimensionMismatch("inner dimensions differ")
            F = self.F
            cols = other.columns()
            return Matrix(F, [[dot(F, r, c) for c in cols] for r in self.data],
                          other.ncols)
        return self.apply(other)

    def __eq__(self, other):
        return isinstance(other, Matrix) and self.data == other.data

    def __hash__(self):
        return hash(self.data)

    def __repr__(self):
        F = self.F
        body = "; ".join(" ".join(F.fmt(a) for a in r) for r in self.data)
        return f"Matrix({F}, [{body}])"

    def rank(self):
        return len(rref_rows(self.F, self.data, self.ncols)[0])

    def is_invertible(self):
        return self.nrows == self.ncols and self.rank() == self.nrows

    def inverse(self):
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("not square")
        red, piv, T = rref_rows(self.F, self.data, n, transform=True)
        if len(red) != n:
            raise ZeroDivisionError("singular matrix")
        return T

    def det(self):
        F = self.F
        n = self.nrows
        if n != self.ncols:
            raise DimensionMismatch("not square")
        rows = [list(r) for r in self.data]
        d = F.one
        for c in range(n):
            piv = next((i for i in range(c, n) if rows[i][c] != F.zero), None)
            if piv is None:
                return F.zero
            if piv != c:
                rows[c], rows[piv] = rows[piv], rows[c]
                d = F.neg(d)
            d = F.mul(d, rows[c][c])
            inv = F.inv(rows[c][c])
            for i in range(c + 1, n):
                f = F.mul(rows[i][c], inv)
                if f != F.zero:
                    rows[i] = [F.sub(a, F.mul(f, b)) for a, b in zip(rows[i], rows[c])]
        return d


def rref(M):
    """(reduced Matrix, rank, transform T with T*M = reduced padded with 0)."""
    red, piv, T = rref_rows(M.F, M.data, M.ncols, transform=True)
    return Matrix(M.F, red, M.ncols), len(red), T


class Subspace:
    """Subspace of F^n held in canonical reduced row echelon form."""
    __slots__ = ("F", "n", "basis", "pivots", "_hash")

    def __init__(self, F, n, basis, pivots, _trusted=True):
        self.F = F
        self.n = n
        self.basis = basis
        self.pivots = pivots
        self._hash = None

    @property
    def dim(self):
        return len(self.basis)

    @property
    def key(self):
        return self.basis

    def __eq__(self, other):
        return (isinstance(other, Subspace) and self.n == other.n
                and self.basis == other.basis)

    def __hash__(self):
        if self._hash is None:
            self._hash = hash((self.n, self.basis))
        return self._hash

    def __lt__(self, other):
        return flat_key(self) < flat_key(other)

    def __repr__(self):
        F = self.F
        vs = ", ".join("(" + ",".join(F.fmt(a) for a in v) + ")" for v in self.basis)
        return f"<{vs}>" if vs else f"0<F^{self.n}"

    def __contains__(self, v):
        return contains(self, v)

    def __iter__(self):
        return iter(self.basis)

    def __len__(self):
        return len(self.basis)

    def coords(self, v):
        """Coordinates of ``v`` in the canonical basis (raises if outside)."""
        F = self.F
        c = [v[p] for p in self.pivots]
        if lin_comb(F, c, self.basis, self.n) != tuple(v):
            raise ValueError("vector not in subspace")
        return tuple(c)

    def reduce(self, v):
        """Clear the pivot columns of ``v``; zero iff ``v`` is inside."""
        F = self.F
        v = list(v)
        for b, p in zip(self.basis, self.pivots):
            f = v[p]
            if f != F.zero:
                for i, a in enumerate(b):
                    if a != F.zero:
                        v[i] = F.sub(v[i], F.mul(f, a))
        return tuple(v)


def flat_key(U):
    return tuple(a for row in U.basis for a in row)


def span(F, vectors, n=None):
    vectors = [tuple(v) for v in vectors]
    if n is None:
        if not vectors:
            raise DimensionMismatch("ambient dimension needed for an empty span")
        n = len(vectors[0])
    if any(len(v) != n for v in vectors):
        raise DimensionMismatch("vectors of different lengths")
    red, piv, _ = rref_rows(F, vectors, n)
    return Subspace(F, n, red, piv)


def zero_space(F, n):
    return Subspace(F, n, (), ())


def full_space(F, n):
    return span(F, [unit_vec(F, n, i) for i in range(n)], n)


def _check(U, V):
    if U.n != V.n:
        raise DimensionMismatch("ambient dimensions differ")


def subspace_sum(U, V):
    _check(U, V)
    return span(U.F, U.basis + V.basis, U.n)


def contains(U, v):
    if len(v) != U.n:
        raise DimensionMismatch("ambient dimension mismatch")
    F = U.F
    return all(a == F.zero for a in U.reduce(v))


def is_subspace(U, V):
    """U <= V"""
    _check(U, V)
    return all(contains(V, b) for b in U.basis)


def equal(U, V):
    return U == V


def kernel(M):
    """Right null space {x : M x = 0}."""
    F = M.F
    n = M.ncols
    red, piv, _ = rref_rows(F, M.data, n)
    free = [j for j in range(n) if j not in piv]
    vecs = []
    for f in free:
        x = [F.zero] * n
        x[f] = F.one
        for row, p in zip(red, piv):
            x[p] = F.neg(row[f])
        vecs.append(x)
    return span(F, vecs, n)


def image(M):
    """Column space."""
    return span(M.F, M.columns(), M.nrows)


def solve(M, b):
    """Some x with M x = b, or None."""
    F = M.F
    if len(b) != M.nrows:
        raise DimensionMismatch("right-hand side has wrong length")
    n = M.ncols
    aug = [tuple(r) + (bi,) for r, bi in zip(M.data, b)]
    red, piv, _ = rref_rows(F, aug, n + 1)
    if n in piv:
        return None
    x = [F.zero] * n
    for row, p in zip(red, piv):
        x[p] = row[n]
    return tuple(x)


def intersect(U, V):
    _check(U, V)
    F, n = U.F, U.n
    if U.dim == 0 or V.dim == 0:
        return zero_space(F, n)
    # x = sum a_i u_i = sum b_j v_j  <=>  [U^T | -V^T] (a, b) = 0
    cols = list(U.basis) + [tuple(F.neg(c) for c in v) for v in V.basis]
    K = kernel(Matrix.from_columns(F, cols))
    vecs = [lin_comb(F, k[:U.dim], U.basis, n) for k in K.basis]
    return span(F, vecs, n)


def complement_units(F, U):
    """Standard basis vectors at the non-pivot positions of U."""
    return [unit_vec(F, U.n, j) for j in range(U.n) if j not in U.pivots]


def extend_basis(F, U, n=None):
    """Indices j such that U together with e_j (j in the list) is F^n."""
    return [j for j in range(U.n) if j not in U.pivots]


# -- enumeration -----------------------------------------------------------

def gaussian_binomial(n, k, q):
    if k < 0 or k > n:
        return 0
    num = den = 1
    for i in range(k):
        num *= q ** (n - i) - 1
        den *= q ** (i + 1) - 1
    return num // den


def _cell(F, n, piv):
    """All RREF matrices with pivot set ``piv`` in lexicographic order."""
    k = len(piv)
    free = [(r, c) for r in range(k) for c in range(piv[r] + 1, n)
            if c not in piv]
    elems = F.elements()
    template = [[F.zero] * n for _ in range(k)]
    for r, c in enumerate(piv):
        template[r][c] = F.one
    for vals in product(elems, repeat=len(free)):
        rows = [row[:] for row in template]
        for (r, c), v in zip(free, vals):
            rows[r][c] = v
        basis = tuple(tuple(r) for r in rows)
        yield tuple(a for r in basis for a in r), basis


def enumerate_subspaces(F, n, k, budget=SUBSPACE_BUDGET):
    """All k-dimensional subspaces of F^n, lexicographic on the RREF."""
    if not F.is_finite:
        raise InfiniteTransversal("cannot enumerate subspaces over Q")
    F._require_enumerable()
    count = gaussian_binomial(n, k, F.q)
    if count > budget:
        raise BudgetExceeded(f"{count} subspaces exceed the budget {budget}")
    if k == 0:
        yield zero_space(F, n)
        return
    cells = [_cell(F, n, piv) for piv in combinations(range(n), k)]
    pivsets = list(combinations(range(n), k))
    # merge the cells; each cell stream is already sorted
    tagged = [((key, i, basis) for key, basis in cell)
              for i, cell in enumerate(cells)]
    for key, i, basis in merge(*tagged):
        yield Subspace(F, n, basis, pivsets[i])


# -- general linear group ----------------------------------------------------

def gl_order(F, n):
    if not F.is_finite:
        raise InfiniteTransversal("GL(n, Q) is infinite")
    q = F.q
    r = 1
    for i in range(n):
        r *= q ** n - q ** i
    return r


def primitive_element(F):
    order = F.q - 1
    for g in F.nonzero():
        x, e = g, 1
        while x != F.one:
            x = F.mul(x, g)
            e += 1
        if e == order:
            return g
    raise AssertionError("no primitive element")


def gl_generators(F, n, verify=True):
    """Two generators of GL(n, q): diag(z, 1, ..., 1) with z primitive, and
    the matrix with first row (-1, 0, ..., 0, 1) and -1 on the subdiagonal.
    For q = 2 the first generator is replaced by the transvection I + E_12."""
    if not F.is_finite:
        raise InfiniteTransversal("GL(n, Q) is not finitely generated")
    if n == 1:
        return [Matrix(F, [[primitive_element(F)]])]
    z = primitive_element(F)
    one, m1 = F.one, F.neg(F.one)
    a = [list(unit_vec(F, n, i)) for i in range(n)]
    if F.q == 2:
        a[0][1] = one
    else:
        a[0][0] = z
    b = [[F.zero] * n for _ in range(n)]
    b[0][0] = m1
    b[0][n - 1] = one
    for i in range(1, n):
        b[i][i - 1] = m1
    gens = [Matrix(F, a), Matrix(F, b)]
    if verify:
        _check_transitive(F, n, gens)
    return gens


def _normalize(F, v):
    for a in v:
        if a != F.zero:
            inv = F.inv(a)
            return tuple(F.mul(inv, b) for b in v)
    return v


def _check_transitive(F, n, gens):
    start = _normalize(F, unit_vec(F, n, 0))
    seen = {start}
    todo = [start]
    while todo:
        v = todo.pop()
        for g in gens:
            w = _normalize(F, g.apply(v))
            if w not in seen:
                seen.add(w)
                todo.append(w)
    expected = (F.q ** n - 1) // (F.q - 1)
    if len(seen) != expected:
        raise AssertionError(f"generators reach {len(seen)} of {expected} points")


def random_matrix(F, n, m, rng):
    return Matrix(F, [[rng.choice(F.elements()) for _ in range(m)] for _ in range(n)])


def random_invertible(F, n, rng):
    while True:
        M = random_matrix(F, n, n, rng)
        if M.is_invertible():
            return M
