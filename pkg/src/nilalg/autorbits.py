"""Automorphism groups, orbits on subspaces of H^2, isomorphism testing.

Automorphisms of a nilpotent Lie algebra are determined by the images of
a set of generators (a lift of a basis of L/L').  The search below builds
a stabilizer chain along the generators: G_k is the pointwise stabilizer
of g_1..g_k, and |G_{k-1} : G_k| is the size of the orbit of g_k under
G_{k-1}.  Each orbit is grown by BFS under the generators found so far;
a vector y that is not yet reached is tested by a depth-first search for
an automorphism fixing g_1..g_{k-1} and sending g_k to y.  Failed vectors
are marked dead together with their current orbit.

Matrices act on columns: column j of A is the image of the j-th basis
vector.  On H^2 the action is (A t)(x, y) = t(Ax, Ay), which reverses
products, so a path word g_a1, ..., g_am from a BFS root R gives
act(g_a1 ... g_am)(R).
"""
from collections import deque
from itertools import product

import numpy as np

from .linalg import (Matrix, Subspace, span, kernel, contains, unit_vec, zero_vec,
                     lin_comb, rref_rows, enumerate_subspaces, gl_generators,
                     gl_order, BudgetExceeded, solve, random_invertible,
                     gaussian_binomial)
from .liealg import (derived, characteristic_subspaces, is_isomorphism,
                     fingerprint, split_abelian_summand_full, LieError, is_nilpotent,
                     NotNilpotent)
from .cohomology import cohomology, pair_index, coboundary_vectors
from .field import InfiniteTransversal

AUT_Q_CAP = 5


class AutGroup:
    """Aut(L) over a finite field.

    ``mode`` is ``"full-GL"`` for abelian algebras (generators from
    :func:`gl_generators`) and ``"generator-set"`` otherwise, in which case
    the stabilizer chain is kept so that every element can be listed.
    """

    def __init__(self, L, mode, gens, order, levels=None, base=None):
        self.L = L
        self.F = L.F
        self.mode = mode
        self.gens = gens
        self.order = order
        self.levels = levels      # list of dict: orbit vector -> transversal Matrix
        self.base = base          # generator vectors g_1..g_d

    def __len__(self):
        return self.order

    def __repr__(self):
        return f"<AutGroup order={self.order} mode={self.mode} gens={len(self.gens)}>"

    def contains(self, A):
        return is_isomorphism(self.L, self.L, A)

    def elements(self):
        """Every element, as Matrix values."""
        F, n = self.F, self.L.dim
        if self.mode == "full-GL":
            for vals in product(F.elements(), repeat=n * n):
                M = Matrix(F, [vals[i * n:(i + 1) * n] for i in range(n)])
                if M.is_invertible():
                    yield M
            return
        trans = [list(lv.values()) for lv in self.levels]

        def rec(k, acc):
            if k == len(trans):
                yield acc
                return
            for r in trans[k]:
                yield from rec(k + 1, acc @ r)
        yield from rec(0, Matrix.identity(F, n))

    def random_element(self, rng):
        """Uniform element: one random transversal element per level."""
        F, n = self.F, self.L.dim
        if self.mode == "full-GL":
            return random_invertible(F, n, rng)
        M = Matrix.identity(F, n)
        for lv in self.levels:
            M = M @ rng.choice(list(lv.values()))
        return M

    def element_batches(self, batch=1 << 17):
        """Elements as numpy arrays of shape (m, n, n) holding element ints."""
        if self.mode == "full-GL":
            buf = []
            for M in self.elements():
                buf.append(M.data)
                if len(buf) == batch:
                    yield np.array(buf, dtype=np.int64)
                    buf = []
            if buf:
                yield np.array(buf, dtype=np.int64)
            return
        ops = NumpyOps(self.F)
        n = self.L.dim
        trans = [np.array([M.data for M in lv.values()], dtype=np.int64)
                 for lv in self.levels]
        if not trans:
            yield np.array([Matrix.identity(self.F, n).data], dtype=np.int64)
            return
        # suffix products r_j ... r_{d-1} in one array, prefixes looped
        j = len(trans)
        suf = np.array([Matrix.identity(self.F, n).data], dtype=np.int64)
        while j > 0 and len(suf) * len(trans[j - 1]) <= batch:
            j -= 1
            t = trans[j]
            suf = ops.matmul(t[:, None], suf[None, :]).reshape(-1, n, n)
        prefixes = trans[:j]

        def rec(k, acc):
            if k == len(prefixes):
                yield ops.matmul(acc[None], suf)
                return
            for r in prefixes[k]:
                yield from rec(k + 1, ops.matmul(acc, r))
        ident = np.array(Matrix.identity(self.F, n).data, dtype=np.int64)
        yield from rec(0, ident)


# -- numpy helpers ------------------------------------------------------------

class NumpyOps:
    """Elementwise field arithmetic on int arrays (mod p or table lookup)."""

    def __init__(self, F):
        if not F.is_finite:
            raise InfiniteTransversal("numpy arithmetic needs a finite field")
        self.F = F
        self.prime = F.k == 1
        self.p = F.p

    def add(self, a, b):
        if self.prime:
            return (a + b) % self.p
        return self.F.add_table[a, b]

    def sub(self, a, b):
        if self.prime:
            return (a - b) % self.p
        return self.F.add_table[a, self.F.neg_table[b]]

    def mul(self, a, b):
        if self.prime:
            return (a * b) % self.p
        return self.F.mul_table[a, b]

    def neg(self, a):
        if self.prime:
            return (-a) % self.p
        return self.F.neg_table[a]

    def matmul(self, A, B):
        if self.prime:
            return np.matmul(A, B) % self.p
        # broadcast (..., n, m) x (..., m, r)
        n, m = A.shape[-2], A.shape[-1]
        r = B.shape[-1]
        shape = np.broadcast_shapes(A.shape[:-2], B.shape[:-2]) + (n, r)
        out = np.zeros(shape, dtype=np.int64)
        for k in range(m):
            out = self.add(out, self.mul(A[..., :, k:k + 1], B[..., k:k + 1, :]))
        return out

    def invertible(self, A):
        """Boolean mask: which matrices in the batch (m, n, n) are invertible."""
        F = self.F
        M = A.copy()
        m, n, _ = M.shape
        ok = np.ones(m, dtype=bool)
        inv_table = np.array([0] + [F.inv(a) for a in range(1, F.q)], dtype=np.int64)
        rows = np.arange(m)
        for c in range(n):
            sub = M[:, c:, c]
            nz = sub != 0
            has = nz.any(axis=1)
            ok &= has
            piv = np.argmax(nz, axis=1) + c
            # swap rows c and piv
            top = M[rows, c].copy()
            M[rows, c] = M[rows, piv]
            M[rows, piv] = top
            pv = M[:, c, c]
            inv = inv_table[pv]
            M[:, c] = self.mul(M[:, c], inv[:, None])
            for r in range(c + 1, n):
                f = M[:, r, c]
                M[:, r] = self.sub(M[:, r], self.mul(f[:, None], M[:, c]))
        return ok


def batch_is_homomorphism(L, A):
    """Mask over a batch of matrices: A[x_i, x_j] = [A x_i, A x_j]."""
    F, n = L.F, L.dim
    ops = NumpyOps(F)
    m = A.shape[0]
    ok = np.ones(m, dtype=bool)
    terms = [(i, j, v) for (i, j), v in L.table.items()]

    def bracket(u, v):
        out = np.zeros((m, n), dtype=np.int64)
        for a, b, c in terms:
            w = ops.sub(ops.mul(u[:, a], v[:, b]), ops.mul(u[:, b], v[:, a]))
            for k, ck in enumerate(c):
                if ck:
                    out[:, k] = ops.add(out[:, k], ops.mul(w, ck))
        return out

    for i in range(n):
        for j in range(i + 1, n):
            c = L.basis_bracket(i, j)
            lhs = np.zeros((m, n), dtype=np.int64)
            for k, ck in enumerate(c):
                if ck:
                    lhs = ops.add(lhs, ops.mul(A[:, :, k], ck))
            rhs = bracket(A[:, :, i], A[:, :, j])
            ok &= (lhs == rhs).all(axis=1)
    return ok


# -- the chain search -------------------------------------------------------

class _Search:
    def __init__(self, L):
        F, n = L.F, L.dim
        self.L, self.F, self.n = L, F, n
        D = derived(L)
        # generators: standard basis vectors independent modulo L'
        gens, cur = [], D
        for j in range(n):
            e = unit_vec(F, n, j)
            if not contains(cur, e):
                gens.append(e)
                cur = span(F, list(cur.basis) + [e], n)
        self.gens = gens
        self.d = d = len(gens)
        self.D = D
        # words: (vector, a, parent) with vector = [g_a, words[parent]]
        words = []
        ends = []
        wspan = Subspace(F, n, (), ())
        for k in range(d):
            words.append((gens[k], k, None))
            wspan = span(F, [w[0] for w in words], n)
            changed = True
            while changed:
                changed = False
                for a in range(k + 1):
                    for p in range(len(words)):
                        v = L.bracket(gens[a], words[p][0])
                        if not contains(wspan, v):
                            words.append((v, a, p))
                            wspan = span(F, [w[0] for w in words], n)
                            changed = True
            ends.append(len(words))
        if len(words) != n:
            raise LieError("generators do not generate: algebra is not nilpotent")
        self.words = words
        self.ends = ends
        W = Matrix.from_columns(F, [w[0] for w in words], n)
        self.Winv = W.inverse()
        # constraint data per level: for u in S_{k-1} words with [g_k, u] in S_{k-1}
        self.rel = []
        for k in range(d):
            prev = ends[k - 1] if k else 0
            rels = []
            for i in range(prev):
                r = L.bracket(gens[k], words[i][0])
                c = self.Winv.apply(r)
                if all(x == F.zero for x in c[prev:]):
                    rels.append((i, c[:prev]))
            self.rel.append(rels)
        # pairs to check at each level: words (i, j) with j new in S_k
        self.checks = []
        for k in range(d):
            prev = ends[k - 1] if k else 0
            chk = []
            for j in range(prev, ends[k]):
                for i in range(j):
                    r = L.bracket(words[i][0], words[j][0])
                    chk.append((i, j, self.Winv.apply(r)[:ends[k]]))
            self.checks.append(chk)
        # characteristic subspaces: annihilators and membership of generators
        self.chars = []
        for Wc in characteristic_subspaces(L):
            ann = list(kernel(Matrix(F, Wc.basis, n)).basis)
            self.chars.append((Wc, ann))

    def _apply_words(self, imgs, coords):
        """A(v) for v with word coordinates ``coords`` (only the first
        len(coords) words enter)."""
        return lin_comb(self.F, coords, imgs, self.n)

    def candidates(self, k, ys, imgs):
        """Affine candidate set for y_k given y_0..y_{k-1} and word images."""
        F, n, L = self.F, self.n, self.L
        rows, rhs = [], []
        for i, c in self.rel[k]:
            target = self._apply_words(imgs, c)       # A([g_k, u])
            ad = L.ad(imgs[i])                         # [img_u, y] = ad(img_u) y
            # [y, img_u] = -[img_u, y] = target
            for r, t in zip(ad.data, target):
                rows.append(tuple(F.neg(a) for a in r))
                rhs.append(t)
        g = self.gens[k]
        for Wc, ann in self.chars:
            if contains(Wc, g):
                for w in ann:
                    rows.append(w)
                    rhs.append(F.zero)
        if rows:
            M = Matrix(F, rows, n)
            y0 = solve(M, rhs)
            if y0 is None:
                return None, []
            K = kernel(M)
        else:
            y0 = zero_vec(F, n)
            K = span(F, [unit_vec(F, n, i) for i in range(n)], n)
        return y0, list(K.basis)

    def iter_affine(self, y0, basis):
        F, n = self.F, self.n
        elems = F.elements()
        for coeffs in product(elems, repeat=len(basis)):
            yield tuple(F.add(a, b) for a, b in zip(y0, lin_comb(F, coeffs, basis, n)))

    def accept(self, k, ys, imgs, y):
        """Extend the word images by level k with y_k = y; None if rejected."""
        F, n, L = self.F, self.n, self.L
        g = self.gens[k]
        for Wc, ann in self.chars:
            if not contains(Wc, g) and contains(Wc, y):
                return None
        # independence modulo L'
        modD = span(F, list(self.D.basis) + list(ys) + [y], n)
        if modD.dim != self.D.dim + k + 1:
            return None
        prev = self.ends[k - 1] if k else 0
        new = list(imgs)
        for idx in range(prev, self.ends[k]):
            v, a, p = self.words[idx]
            if p is None:
                new.append(tuple(y))
            else:
                ya = y if a == k else ys[a]
                new.append(L.bracket(ya, new[p]))
        # homomorphism on S_k
        for i, j, c in self.checks[k]:
            if L.bracket(new[i], new[j]) != lin_comb(F, c, new, n):
                return None
        # injectivity on S_k
        if span(F, new, n).dim != len(new):
            return None
        return new

    def complete(self, k, ys, imgs):
        """Depth-first search for any completion; returns word images or None."""
        if k == self.d:
            return imgs
        y0, basis = self.candidates(k, ys, imgs)
        if y0 is None:
            return None
        for y in self.iter_affine(y0, basis):
            new = self.accept(k, ys, imgs, y)
            if new is None:
                continue
            res = self.complete(k + 1, ys + [y], new)
            if res is not None:
                return res
        return None

    def matrix(self, imgs):
        img = Matrix.from_columns(self.F, imgs, self.n)
        return img @ self.Winv


def _orbit(vec, gens):
    seen = {vec: None}
    todo = deque([vec])
    while todo:
        v = todo.popleft()
        for g in gens:
            w = g.apply(v)
            if w not in seen:
                seen[w] = None
                todo.append(w)
    return seen


def _schreier(vec, gens, F, n):
    """Orbit of vec with transversal elements r_w (r_w vec = w)."""
    tr = {vec: Matrix.identity(F, n)}
    todo = deque([vec])
    while todo:
        v = todo.popleft()
        for g in gens:
            w = g.apply(v)
            if w not in tr:
                tr[w] = g @ tr[v]
                todo.append(w)
    return tr


_AUT_CACHE = {}


def automorphism_group(L, budget_q=AUT_Q_CAP):
    F = L.F
    if not F.is_finite:
        raise InfiniteTransversal("automorphism groups are only computed over finite fields")
    key = ("aut", L.key())
    if key in _AUT_CACHE:
        return _AUT_CACHE[key]
    n = L.dim
    if L.is_abelian():
        G = AutGroup(L, "full-GL", gl_generators(F, n) if n else [], gl_order(F, n))
        _AUT_CACHE[key] = G
        return G
    if F.q > budget_q:
        raise BudgetExceeded(f"automorphism search capped at q <= {budget_q}")
    S = _Search(L)
    d = S.d
    gens = []
    levels = [None] * d
    ident_imgs = [w[0] for w in S.words]
    for k in range(d - 1, -1, -1):
        g = S.gens[k]
        ys = S.gens[:k]
        prev = S.ends[k - 1] if k else 0
        imgs = ident_imgs[:prev]
        orbit = _orbit(g, gens)
        dead = set()
        y0, basis = S.candidates(k, ys, imgs)
        for y in S.iter_affine(y0, basis):
            if y in orbit or y in dead:
                continue
            new = S.accept(k, ys, imgs, y)
            res = S.complete(k + 1, ys + [y], new) if new is not None else None
            if res is None:
                dead.update(_orbit(y, gens))
                continue
            t = S.matrix(res)
            gens.append(t)
            orbit = _orbit(g, gens)
        levels[k] = _schreier(g, gens, F, n)
    order = 1
    for lv in levels:
        order *= len(lv)
    for t in gens:
        assert is_isomorphism(L, L, t)
    G = AutGroup(L, "generator-set", gens, order, levels, S.gens)
    _AUT_CACHE[key] = G
    return G


# -- shape predicates ----------------------------------------------------------

def _shape_52(o, a):
    z = [a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3], a[..., 1, 4],
         a[..., 3, 2], a[..., 4, 2]]
    u = o.sub(o.mul(a[..., 0, 0], a[..., 1, 1]), o.mul(a[..., 0, 1], a[..., 1, 0]))
    return _all_zero(z) & (a[..., 2, 2] == u)


def _shape_53(o, a):
    a11, a22, a32 = a[..., 0, 0], a[..., 1, 1], a[..., 2, 1]
    z = [a[..., 0, 1], a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3],
         a[..., 1, 4], a[..., 2, 3], a[..., 2, 4], a[..., 4, 2], a[..., 4, 3]]
    return (_all_zero(z) & (a[..., 2, 2] == o.mul(a11, a22))
            & (a[..., 3, 2] == o.mul(a11, a32))
            & (a[..., 3, 3] == o.mul(o.mul(a11, a11), a22)))


def _shape_55(o, a):
    a11, a21, a22 = a[..., 0, 0], a[..., 1, 0], a[..., 1, 1]
    a32, a41, a42 = a[..., 2, 1], a[..., 3, 0], a[..., 3, 1]
    z = [a[..., 0, 1], a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3],
         a[..., 1, 4], a[..., 2, 4], a[..., 3, 2], a[..., 3, 4]]
    u = o.sub(o.add(o.mul(a11, a32), o.mul(a21, a42)), o.mul(a22, a41))
    a11sq = o.mul(a11, a11)
    return (_all_zero(z) & (a[..., 2, 2] == o.mul(a11, a22))
            & (a[..., 2, 3] == o.neg(o.mul(a11, a21)))
            & (a[..., 3, 3] == a11sq)
            & (a[..., 4, 2] == u)
            & (a[..., 4, 4] == o.mul(a11sq, a22)))


def _shape_56(o, a):
    a11, a21, a31 = a[..., 0, 0], a[..., 1, 0], a[..., 2, 0]
    a32, a42 = a[..., 2, 1], a[..., 3, 1]
    z = [a[..., 0, 1], a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3],
         a[..., 1, 4], a[..., 2, 3], a[..., 2, 4], a[..., 3, 4]]
    p2 = o.mul(a11, a11)
    p3 = o.mul(p2, a11)
    p4 = o.mul(p3, a11)
    p5 = o.mul(p4, a11)
    u = o.add(o.add(o.neg(o.mul(p2, a31)), o.mul(a11, a42)), o.mul(a21, a32))
    v = o.add(o.mul(p3, a21), o.mul(p2, a32))
    return (_all_zero(z) & (a[..., 1, 1] == p2) & (a[..., 2, 2] == p3)
            & (a[..., 3, 2] == o.mul(a11, a32)) & (a[..., 3, 3] == p4)
            & (a[..., 4, 2] == u) & (a[..., 4, 3] == v) & (a[..., 4, 4] == p5))


def _shape_57(o, a):
    a11, a22, a32, a42 = a[..., 0, 0], a[..., 1, 1], a[..., 2, 1], a[..., 3, 1]
    z = [a[..., 0, 1], a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3],
         a[..., 1, 4], a[..., 2, 3], a[..., 2, 4], a[..., 3, 4]]
    p2 = o.mul(a11, a11)
    return (_all_zero(z) & (a[..., 2, 2] == o.mul(a11, a22))
            & (a[..., 3, 2] == o.mul(a11, a32)) & (a[..., 3, 3] == o.mul(p2, a22))
            & (a[..., 4, 2] == o.mul(a11, a42)) & (a[..., 4, 3] == o.mul(p2, a32))
            & (a[..., 4, 4] == o.mul(o.mul(p2, a11), a22)))


def _shape_58(o, a):
    a11 = a[..., 0, 0]
    z = [a[..., 0, 1], a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 3], a[..., 1, 4],
         a[..., 2, 3], a[..., 2, 4]]
    return (_all_zero(z)
            & (a[..., 3, 3] == o.mul(a11, a[..., 1, 1])) & (a[..., 3, 4] == o.mul(a11, a[..., 1, 2]))
            & (a[..., 4, 3] == o.mul(a11, a[..., 2, 1])) & (a[..., 4, 4] == o.mul(a11, a[..., 2, 2])))


def _shape_59(o, a):
    a11, a12, a21, a22 = a[..., 0, 0], a[..., 0, 1], a[..., 1, 0], a[..., 1, 1]
    a31, a32 = a[..., 2, 0], a[..., 2, 1]
    z = [a[..., 0, 2], a[..., 0, 3], a[..., 0, 4], a[..., 1, 2], a[..., 1, 3], a[..., 1, 4],
         a[..., 2, 3], a[..., 2, 4]]
    u = o.sub(o.mul(a11, a22), o.mul(a12, a21))
    return (_all_zero(z) & (a[..., 2, 2] == u)
            & (a[..., 3, 2] == o.sub(o.mul(a11, a32), o.mul(a12, a31)))
            & (a[..., 3, 3] == o.mul(a11, u)) & (a[..., 3, 4] == o.mul(a12, u))
            & (a[..., 4, 2] == o.sub(o.mul(a21, a32), o.mul(a22, a31)))
            & (a[..., 4, 3] == o.mul(a21, u)) & (a[..., 4, 4] == o.mul(a22, u)))


def _shape_42(o, a):
    z = [a[..., 0, 2], a[..., 0, 3], a[..., 1, 2], a[..., 1, 3], a[..., 3, 2]]
    u = o.sub(o.mul(a[..., 0, 0], a[..., 1, 1]), o.mul(a[..., 0, 1], a[..., 1, 0]))
    return _all_zero(z) & (a[..., 2, 2] == u)


def _all_zero(entries):
    out = entries[0] == 0
    for e in entries[1:]:
        out = out & (e == 0)
    return out


# free entries (row, col) of each parametrised shape; the rest are zero or
# determined by the predicate
SHAPES = {
    "L3_2+F^2": (5, _shape_52, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (2, 3), (2, 4),
                           (3, 0), (3, 1), (3, 3), (3, 4), (4, 0), (4, 1), (4, 3), (4, 4)]),
    "L4_3+F": (5, _shape_53, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (3, 4),
                         (4, 0), (4, 1), (4, 4)]),
    "L5_5": (5, _shape_55, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1),
                       (4, 0), (4, 1), (4, 3)]),
    "L5_6": (5, _shape_56, [(0, 0), (1, 0), (2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1)]),
    "L5_7": (5, _shape_57, [(0, 0), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1), (4, 0), (4, 1)]),
    "L5_8": (5, _shape_58, [(0, 0), (1, 0), (1, 1), (1, 2), (2, 0), (2, 1), (2, 2),
                       (3, 0), (3, 1), (3, 2), (4, 0), (4, 1), (4, 2)]),
    "L5_9": (5, _shape_59, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (3, 0), (3, 1),
                       (4, 0), (4, 1)]),
    "L3_2+F": (4, _shape_42, [(0, 0), (0, 1), (1, 0), (1, 1), (2, 0), (2, 1), (2, 3),
                         (3, 0), (3, 1), (3, 3)]),
}


def _shape_key(algebra_id):
    from .catalog import parse_id
    return str(parse_id(algebra_id))


def matches_shape(algebra_id, A):
    """Does the matrix ``A`` have the parametrised form listed for Aut of
    this algebra?  ``algebra_id`` accepts canonical ids and aliases such
    as ``"L5_2"``."""
    key = _shape_key(algebra_id)
    if key not in SHAPES:
        raise KeyError(f"no automorphism shape recorded for {algebra_id}")
    n, pred, _ = SHAPES[key]
    if A.nrows != n or A.ncols != n:
        return False
    ops = NumpyOps(A.F)
    arr = np.array(A.data, dtype=np.int64)[None]
    return bool(pred(ops, arr)[0])


def batch_matches_shape(algebra_id, F, arr):
    _, pred, _ = SHAPES[_shape_key(algebra_id)]
    return pred(NumpyOps(F), arr)


def shape_matrices(algebra_id, F, chunk=1 << 20):
    """All matrices of the parametrised form (invertible or not), in
    batches: the free entries run over F and the dependent ones are filled
    in from the predicate's formulas."""
    key = _shape_key(algebra_id)
    n, pred, free = SHAPES[key]
    q = F.q
    ops = NumpyOps(F)
    total = q ** len(free)
    for start in range(0, total, chunk):
        idx = np.arange(start, min(total, start + chunk), dtype=np.int64)
        A = np.zeros((len(idx), n, n), dtype=np.int64)
        rest = idx.copy()
        for (r, c) in reversed(free):
            A[:, r, c] = rest % q
            rest //= q
        _fill_dependent(key, ops, A)
        yield A


def _fill_dependent(key, o, A):
    a = A
    if key in ("L3_2+F^2", "L3_2+F"):
        a[:, 2, 2] = o.sub(o.mul(a[:, 0, 0], a[:, 1, 1]), o.mul(a[:, 0, 1], a[:, 1, 0]))
    elif key == "L4_3+F":
        a11, a22, a32 = a[:, 0, 0], a[:, 1, 1], a[:, 2, 1]
        a[:, 2, 2] = o.mul(a11, a22)
        a[:, 3, 2] = o.mul(a11, a32)
        a[:, 3, 3] = o.mul(o.mul(a11, a11), a22)
    elif key == "L5_5":
        a11, a21, a22 = a[:, 0, 0], a[:, 1, 0], a[:, 1, 1]
        a32, a41, a42 = a[:, 2, 1], a[:, 3, 0], a[:, 3, 1]
        a[:, 2, 2] = o.mul(a11, a22)
        a[:, 2, 3] = o.neg(o.mul(a11, a21))
        a[:, 3, 3] = o.mul(a11, a11)
        a[:, 4, 2] = o.sub(o.add(o.mul(a11, a32), o.mul(a21, a42)), o.mul(a22, a41))
        a[:, 4, 4] = o.mul(o.mul(a11, a11), a22)
    elif key == "L5_6":
        a11, a21, a31, a32, a42 = a[:, 0, 0], a[:, 1, 0], a[:, 2, 0], a[:, 2, 1], a[:, 3, 1]
        p2 = o.mul(a11, a11)
        p3 = o.mul(p2, a11)
        p4 = o.mul(p3, a11)
        a[:, 1, 1] = p2
        a[:, 2, 2] = p3
        a[:, 3, 2] = o.mul(a11, a32)
        a[:, 3, 3] = p4
        a[:, 4, 2] = o.add(o.add(o.neg(o.mul(p2, a31)), o.mul(a11, a42)), o.mul(a21, a32))
        a[:, 4, 3] = o.add(o.mul(p3, a21), o.mul(p2, a32))
        a[:, 4, 4] = o.mul(p4, a11)
    elif key == "L5_7":
        a11, a22, a32, a42 = a[:, 0, 0], a[:, 1, 1], a[:, 2, 1], a[:, 3, 1]
        p2 = o.mul(a11, a11)
        a[:, 2, 2] = o.mul(a11, a22)
        a[:, 3, 2] = o.mul(a11, a32)
        a[:, 3, 3] = o.mul(p2, a22)
        a[:, 4, 2] = o.mul(a11, a42)
        a[:, 4, 3] = o.mul(p2, a32)
        a[:, 4, 4] = o.mul(o.mul(p2, a11), a22)
    elif key == "L5_8":
        a11 = a[:, 0, 0]
        a[:, 3, 3] = o.mul(a11, a[:, 1, 1])
        a[:, 3, 4] = o.mul(a11, a[:, 1, 2])
        a[:, 4, 3] = o.mul(a11, a[:, 2, 1])
        a[:, 4, 4] = o.mul(a11, a[:, 2, 2])
    elif key == "L5_9":
        a11, a12, a21, a22 = a[:, 0, 0], a[:, 0, 1], a[:, 1, 0], a[:, 1, 1]
        a31, a32 = a[:, 2, 0], a[:, 2, 1]
        u = o.sub(o.mul(a11, a22), o.mul(a12, a21))
        a[:, 2, 2] = u
        a[:, 3, 2] = o.sub(o.mul(a11, a32), o.mul(a12, a31))
        a[:, 3, 3] = o.mul(a11, u)
        a[:, 3, 4] = o.mul(a12, u)
        a[:, 4, 2] = o.sub(o.mul(a21, a32), o.mul(a22, a31))
        a[:, 4, 3] = o.mul(a21, u)
        a[:, 4, 4] = o.mul(a22, u)


# -- orbits on subspaces of H^2 ----------------------------------------------

class VectorCodec:
    """Vectors of F^h <-> ints (first coordinate most significant), so that
    comparing ints agrees with comparing the tuples lexicographically."""

    def __init__(self, F, h):
        self.F, self.h, self.q = F, h, F.q
        self.size = F.q ** h

    def encode(self, v):
        r = 0
        q = self.q
        for a in v:
            r = r * q + a
        return r

    def decode(self, x):
        q, h = self.q, self.h
        out = [0] * h
        for i in range(h - 1, -1, -1):
            x, out[i] = divmod(x, q)
        return tuple(out)

    def all_vectors(self):
        """(size, h) array of all vectors in code order."""
        q, h = self.q, self.h
        idx = np.arange(self.size, dtype=np.int64)
        out = np.zeros((self.size, h), dtype=np.int64)
        for i in range(h - 1, -1, -1):
            out[:, i] = idx % q
            idx //= q
        return out

    def encode_array(self, arr):
        r = np.zeros(arr.shape[0], dtype=np.int64)
        for i in range(self.h):
            r = r * self.q + arr[:, i]
        return r


def _image_tables(F, codec, mats):
    """For each matrix M (h x h, rows = images of basis vectors) the table
    code(v) -> code(v M)."""
    ops = NumpyOps(F)
    allv = codec.all_vectors()
    tables = []
    for M in mats:
        Mn = np.array(M.data, dtype=np.int64).reshape(codec.h, codec.h)
        img = ops.matmul(allv, Mn) if codec.h else allv
        tables.append(codec.encode_array(img).tolist())
    return tables


class _Canon:
    """Canonical keys (tuple of codes of the RREF rows) of spans."""

    def __init__(self, F, codec):
        self.F, self.codec = F, codec
        # normalised code of each vector (leading entry 1) for the s = 1 case
        allv = codec.all_vectors()
        lead = np.zeros(codec.size, dtype=np.int64)
        for i in range(codec.h - 1, -1, -1):
            col = allv[:, i]
            lead = np.where(col != 0, col, lead)
        inv = np.array([0] + [F.inv(a) for a in range(1, F.q)], dtype=np.int64)
        ops = NumpyOps(F)
        scaled = ops.mul(allv, inv[lead][:, None])
        self.norm = codec.encode_array(scaled).tolist()

    def key(self, codes):
        if len(codes) == 1:
            return (self.norm[codes[0]],)
        F, codec = self.F, self.codec
        red, _, _ = rref_rows(F, [codec.decode(c) for c in codes], codec.h)
        return tuple(codec.encode(r) for r in red)


class OrbitPartition:
    """Orbits of Aut(L) on all s-dimensional subspaces of H^2(L).

    Orbits are found by BFS in enumeration order, so each representative is
    the lexicographically least subspace of its orbit.  Every subspace
    remembers its BFS parent and the generator used, which gives explicit
    group elements moving the representative to it.
    """

    def __init__(self, L, s, ctx=None, group=None):
        F = L.F
        self.L, self.F, self.s = L, F, s
        self.ctx = ctx or cohomology(L)
        self.h = h = self.ctx.dim
        self.group = group or automorphism_group(L)
        self.gens = list(self.group.gens)
        self.mats = [self.ctx.action_matrix(g) for g in self.gens]
        self.codec = VectorCodec(F, h)
        self.canon = _Canon(F, self.codec)
        self.tables = _image_tables(F, self.codec, self.mats)
        self.index = {}
        self.keys = []
        self._build()

    def key_of(self, U):
        if U.n != self.h or U.dim != self.s:
            raise ValueError("subspace has wrong dimensions")
        return tuple(self.codec.encode(r) for r in U.basis)

    def subspace(self, key):
        return Subspace(self.F, self.h, tuple(self.codec.decode(c) for c in key),
                        tuple(next(i for i, a in enumerate(self.codec.decode(c)) if a)
                              for c in key))

    def _build(self):
        index, keys = self.index, self.keys
        orbit_of, parent, via = [], [], []
        reps, sizes = [], []
        tables, canon = self.tables, self.canon
        for U in enumerate_subspaces(self.F, self.h, self.s):
            k = tuple(self.codec.encode(r) for r in U.basis)
            if k in index:
                continue
            oi = len(reps)
            root = len(keys)
            index[k] = root
            keys.append(k)
            orbit_of.append(oi)
            parent.append(-1)
            via.append(-1)
            reps.append(root)
            cnt = 1
            todo = deque([root])
            while todo:
                i = todo.popleft()
                ki = keys[i]
                for gi, tab in enumerate(tables):
                    kk = canon.key([tab[c] for c in ki])
                    if kk not in index:
                        j = len(keys)
                        index[kk] = j
                        keys.append(kk)
                        orbit_of.append(oi)
                        parent.append(i)
                        via.append(gi)
                        todo.append(j)
                        cnt += 1
            sizes.append(cnt)
        self.orbit_of = orbit_of
        self.parent = parent
        self.via = via
        self.reps = reps
        self.sizes = sizes
        self.allowable = [self.ctx.allowable(self.subspace(keys[r])) for r in reps]

    # -- queries ---------------------------------------------------------------
    def __len__(self):
        return len(self.reps)

    def orbits(self, allowable_only=True):
        """List of (representative Subspace, size)."""
        return [(self.subspace(self.keys[r]), sz)
                for r, sz, ok in zip(self.reps, self.sizes, self.allowable)
                if ok or not allowable_only]

    def n_allowable(self):
        return sum(self.allowable)

    def orbit_index(self, U):
        return self.orbit_of[self.index[self.key_of(U)]]

    def representative(self, U):
        return self.subspace(self.keys[self.reps[self.orbit_index(U)]])

    def word(self, U):
        """Generator indices a_1..a_m along the BFS path from the root."""
        i = self.index[self.key_of(U)]
        path = []
        while self.parent[i] >= 0:
            path.append(self.via[i])
            i = self.parent[i]
        return path[::-1]

    def element(self, U):
        """W with act(W)(representative) = U."""
        W = Matrix.identity(self.F, self.L.dim)
        for a in self.word(U):
            W = W @ self.gens[a]
        return W

    def same_orbit(self, U1, U2):
        o1, o2 = self.orbit_index(U1), self.orbit_index(U2)
        if o1 != o2:
            return False, None
        A = self.element(U1).inverse() @ self.element(U2)
        return True, A


# partitions shared between equal algebras that carry the same H^2 basis
_PARTITIONS = {}
PARTITION_LIMIT = 600000


def orbit_partition(L, s):
    """Cached :class:`OrbitPartition`.  The cache lives on the algebra and
    in a table keyed by (structure constants, H^2 basis, s), so algebras
    rebuilt with the same table (extracted parents, say) share it."""
    key = ("orbits", s)
    if key not in L._cache:
        gkey = (L.key(), tuple(cohomology(L).H), s)
        if gkey not in _PARTITIONS:
            _PARTITIONS[gkey] = OrbitPartition(L, s)
        L._cache[key] = _PARTITIONS[gkey]
    return L._cache[key]


def _cached_partition(L, s):
    if ("orbits", s) in L._cache:
        return L._cache[("orbits", s)]
    ctx = cohomology(L)
    gkey = (L.key(), tuple(ctx.H), s)
    if gkey in _PARTITIONS or (L.F.is_finite
                               and gaussian_binomial(ctx.dim, s, L.F.q) <= PARTITION_LIMIT):
        return orbit_partition(L, s)
    return None


def orbits_on_allowable(L, s):
    return orbit_partition(L, s).orbits(allowable_only=True)


def same_orbit(L, U1, U2, partition=None):
    """(same?, A) with act(A)(U1) = U2; BFS from U1 unless a cached
    partition is available."""
    if U1.dim != U2.dim:
        return False, None
    part = partition or _cached_partition(L, U1.dim)
    if part is not None:
        return part.same_orbit(U1, U2)
    return bfs_same_orbit(L, U1, U2)


def bfs_same_orbit(L, U1, U2):
    """Same as :func:`same_orbit` but by BFS from U1 on Subspace values,
    without enumerating all subspaces."""
    ctx = cohomology(L)
    if U1 == U2:
        return True, Matrix.identity(L.F, L.dim)
    G = automorphism_group(L)
    gens = G.gens
    mats = [ctx.action_matrix(g) for g in gens]
    seen = {U1: None}
    todo = deque([U1])
    while todo:
        U = todo.popleft()
        for gi, M in enumerate(mats):
            V = ctx.act_subspace(gens[gi], U, M)
            if V not in seen:
                seen[V] = (U, gi)
                if V == U2:
                    path = []
                    X = V
                    while seen[X] is not None:
                        X, a = seen[X][0], seen[X][1]
                        path.append(a)
                    W = Matrix.identity(L.F, L.dim)
                    for a in reversed(path):
                        W = W @ gens[a]
                    return True, W
                todo.append(V)
    return False, None


# -- isomorphism via descendants ------------------------------------------------

def transport_cocycle(F, n, theta, phi_inv):
    """theta o (phi^-1 x phi^-1): a cocycle of the target of phi."""
    from .cohomology import gram, from_gram
    G = Matrix(F, gram(F, n, theta))
    return from_gram(F, n, (phi_inv.transpose() @ G @ phi_inv).data)


def extension_iso(P, theta_src, theta_dst, A):
    """Isomorphism L_{theta_src} -> L_{theta_dst}, both over P, given
    A in Aut(P) with act(A) mapping the class span of theta_dst onto the
    class span of theta_src.

    With t'' = theta_dst o (A x A) we solve theta_src = T t'' + N o [,];
    then [[A, 0], [-T^-1 N, T^-1]] is the required map."""
    F, n = P.F, P.dim
    s = len(theta_src)
    ctx = cohomology(P)
    tpp = [transform_cocycle(F, n, t, A) for t in theta_dst]
    hs = [ctx.decompose(t)[1] for t in theta_src]
    hpp = [ctx.decompose(t)[1] for t in tpp]
    # T with hs = T hpp (rows);  solve for each row
    Hm = Matrix.from_columns(F, hpp, ctx.dim)        # dim x s
    T_rows = []
    for h in hs:
        x = solve(Hm, h)
        if x is None:
            raise LieError("cocycle classes do not span the same subspace")
        T_rows.append(x)
    T = Matrix(F, T_rows, s)
    eta = coboundary_vectors(P)                      # eta_j: Delta coords
    Em = Matrix.from_columns(F, eta, len(pair_index(n)[1]))
    N_rows = []
    for k in range(s):
        comb = lin_comb(F, T_rows[k], tpp, len(theta_src[k]))
        resid = tuple(F.sub(a, b) for a, b in zip(theta_src[k], comb))
        x = solve(Em, resid)
        if x is None:
            raise LieError("difference is not a coboundary")
        N_rows.append(x)
    N = Matrix(F, N_rows, n)
    Ti = T.inverse()
    mTN = Ti @ N
    rows = []
    for i in range(n):
        rows.append(tuple(A.data[i]) + (F.zero,) * s)
    for k in range(s):
        rows.append(tuple(F.neg(a) for a in mTN.data[k]) + tuple(Ti.data[k]))
    return Matrix(F, rows, n + s)


def transform_cocycle(F, n, theta, A):
    from .cohomology import gram, from_gram
    G = Matrix(F, gram(F, n, theta))
    return from_gram(F, n, (A.transpose() @ G @ A).data)


def block_diag(F, A, m):
    n = A.nrows
    rows = [tuple(r) + (F.zero,) * m for r in A.data]
    for i in range(m):
        rows.append((F.zero,) * n + unit_vec(F, m, i))
    return Matrix(F, rows, n + m)


def isomorphic(K1, K2):
    """(isomorphic?, X) with X an isomorphism K1 -> K2 when they are."""
    if K1.F != K2.F or K1.dim != K2.dim:
        return False, None
    if not (is_nilpotent(K1) and is_nilpotent(K2)):
        raise NotNilpotent("isomorphism testing is implemented for nilpotent algebras")
    if fingerprint(K1) != fingerprint(K2):
        return False, None
    F = K1.F
    s1, s2 = split_abelian_summand_full(K1), split_abelian_summand_full(K2)
    if s1.m != s2.m or s1.core.dim != s2.core.dim:
        return False, None
    ok, chi = _core_iso(s1.core, s2.core)
    if not ok:
        return False, None
    X = s2.basis @ block_diag(F, chi, s1.m) @ s1.basis.inverse()
    assert is_isomorphism(K1, K2, X)
    return True, X


def _core_iso(C1, C2):
    from .extensions import extract_cocycle
    F = C1.F
    if C1.dim == 0:
        return True, Matrix(F, [], 0)
    if fingerprint(C1) != fingerprint(C2):
        return False, None
    e1, e2 = extract_cocycle(C1), extract_cocycle(C2)
    if e1.U.dim != e2.U.dim or e1.parent.dim != e2.parent.dim:
        return False, None
    ok, phi = isomorphic(e1.parent, e2.parent)
    if not ok:
        return False, None
    P2 = e2.parent
    n = P2.dim
    phi_inv = phi.inverse()
    th1 = [transport_cocycle(F, n, t, phi_inv) for t in e1.thetas]
    ctx = cohomology(P2)
    U1 = span(F, [ctx.reduce(t) for t in th1], ctx.dim)
    ok, A = same_orbit(P2, U1, e2.U)
    if not ok:
        return False, None
    # act(A)(U1) = U2:  L_{theta2} -> L_{th1} via extension_iso
    Psi = extension_iso(P2, e2.thetas, th1, A)
    Phi = block_diag(F, phi, len(th1))
    # C1 -> E1 -> E1' -> E2 -> C2
    X = e2.basis @ Psi.inverse() @ Phi @ e1.basis.inverse()
    if not is_isomorphism(C1, C2, X):
        raise AssertionError("assembled isomorphism failed verification")
    return True, X
