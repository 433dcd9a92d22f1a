"""Brute-force reference computations that share no code with the library
beyond the field and the algebra container."""
from itertools import combinations, product

import numpy as np


def alternating_forms_gf2(n):
    """All alternating forms on GF(2)^n as dicts (i, j) -> bit, i < j."""
    pairs = list(combinations(range(n), 2))
    for bits in product((0, 1), repeat=len(pairs)):
        yield dict(zip(pairs, bits))


def cocycle_count_gf2(L):
    """|Z^2(L)| by checking the cocycle identity on every alternating form."""
    n = L.dim

    def form(t, u, v):
        r = 0
        for (i, j), b in t.items():
            if b:
                r ^= (u[i] & v[j]) ^ (u[j] & v[i])
        return r

    e = [tuple(int(i == k) for i in range(n)) for k in range(n)]
    count = 0
    for t in alternating_forms_gf2(n):
        ok = True
        for a, b, c in combinations(range(n), 3):
            s = (form(t, L.basis_bracket(a, b), e[c]) ^ form(t, L.basis_bracket(c, a), e[b])
                 ^ form(t, L.basis_bracket(b, c), e[a]))
            if s:
                ok = False
                break
        count += ok
    return count


def aut_order_bruteforce(L):
    """|Aut(L)| by running over all of GL(n, q) (small n, q only)."""
    F, n = L.F, L.dim
    elems = F.elements()
    count = 0
    for cols in product(product(elems, repeat=n), repeat=n):
        from nilalg.linalg import Matrix
        M = Matrix.from_columns(F, cols, n)
        if not M.is_invertible():
            continue
        ok = True
        for a in range(n):
            for b in range(a + 1, n):
                if M.apply(L.basis_bracket(a, b)) != L.bracket(cols[a], cols[b]):
                    ok = False
                    break
            if not ok:
                break
        count += ok
    return count


# -- GF(2) isomorphism search on bitmasks ---------------------------------------

def _mask(v):
    return sum(1 << i for i, a in enumerate(v) if a)


def _bracket_table(L):
    n = L.dim
    size = 1 << n
    basic = [[_mask(L.basis_bracket(i, j)) for j in range(n)] for i in range(n)]
    row = np.zeros((size, n), dtype=np.int64)      # [u, e_j]
    for u in range(size):
        for i in range(n):
            if u >> i & 1:
                row[u] ^= np.array(basic[i], dtype=np.int64)
    tab = np.zeros((size, size), dtype=np.int64)
    for j in range(n):
        has = (np.arange(size) >> j) & 1
        tab ^= np.outer(np.ones(size, dtype=np.int64), has) * row[:, j][:, None]
    return tab


def _rank_ok(M):
    """Rows of M (m, r) of bitmasks: mask of rows whose r entries are independent."""
    M = M.copy()
    m, r = M.shape
    ok = np.ones(m, dtype=bool)
    for c in range(r):
        piv = M[:, c]
        ok &= piv != 0
        low = piv & -piv                           # lowest set bit
        for d in range(c + 1, r):
            hit = (M[:, d] & low) != 0
            M[:, d] = np.where(hit, M[:, d] ^ piv, M[:, d])
    return ok


def gf2_isomorphic(K1, K2, chunk=1 << 20, max_gens=4):
    """Does an isomorphism K1 -> K2 exist?  Breadth-first over images of
    generators of K1, level by level, pruned by the homomorphism property on
    the subalgebra generated so far and by linear independence.  Algebras
    with more than ``max_gens`` generators are refused: the frontier grows
    like 64^d."""
    n = K1.dim
    if n != K2.dim:
        return False
    b1 = {(i, j): _mask(K1.basis_bracket(i, j)) for i in range(n) for j in range(n)}
    T1 = _bracket_table(K1)
    T2 = _bracket_table(K2)
    # derived algebra of K1 as the set of masks it spans
    span = {0}
    for v in set(b1.values()):
        span |= {x ^ v for x in span}
    gens = []
    for i in range(n):
        if (1 << i) not in span:
            gens.append(1 << i)
            span |= {x ^ (1 << i) for x in span}
    # word basis grown generator by generator
    words, recipe, level = [], [], []
    for k, g in enumerate(gens):
        words.append(g)
        recipe.append((k, None))
        level.append(k)
        changed = True
        while changed:
            changed = False
            for a in range(k + 1):
                for p in range(len(words)):
                    v = int(T1[gens[a], words[p]])
                    sp = {0}
                    for w in words:
                        sp |= {x ^ w for x in sp}
                    if v not in sp:
                        words.append(v)
                        recipe.append((a, p))
                        level.append(k)
                        changed = True
    if len(words) != n:
        raise AssertionError("generators do not generate")
    if len(gens) > max_gens:
        raise ValueError(f"{len(gens)} generators is too many for this search")
    # coordinates of every mask in the word basis
    coord = {}
    for bits in range(1 << n):
        v = 0
        for t in range(n):
            if bits >> t & 1:
                v ^= words[t]
        coord[v] = bits
    checks = []
    for j in range(n):
        for i in range(j):
            checks.append((i, j, coord[int(T1[words[i], words[j]])]))
    size = 1 << n
    frontier = np.zeros((1, 0), dtype=np.int64)
    for k in range(len(gens)):
        idx = [t for t in range(n) if level[t] == k]
        new_frontier = []
        cands = np.arange(1, size, dtype=np.int64)
        for start in range(0, len(frontier), max(1, chunk // len(cands))):
            block = frontier[start:start + max(1, chunk // len(cands))]
            m = len(block) * len(cands)
            Y = np.zeros((m, idx[-1] + 1), dtype=np.int64)
            Y[:, :block.shape[1]] = np.repeat(block, len(cands), axis=0)
            for t in idx:
                a, p = recipe[t]
                if p is None:
                    Y[:, t] = np.tile(cands, len(block))
                else:
                    Y[:, t] = T2[Y[:, gens_index(a, recipe)], Y[:, p]]
            ok = _rank_ok(Y)
            hi = idx[-1]
            for i, j, c in checks:
                if j > hi or j < idx[0]:
                    continue
                rhs = np.zeros(m, dtype=np.int64)
                for t in range(hi + 1):
                    if c >> t & 1:
                        rhs ^= Y[:, t]
                if c >> (hi + 1):
                    ok &= False
                ok &= T2[Y[:, i], Y[:, j]] == rhs
            if k == len(gens) - 1 and ok.any():
                return True
            new_frontier.append(Y[ok])
        frontier = np.concatenate(new_frontier) if new_frontier else np.zeros((0, 0), np.int64)
        if len(frontier) == 0:
            return False
    return len(frontier) > 0


def gens_index(a, recipe):
    """Word index of generator a."""
    return next(t for t, (b, p) in enumerate(recipe) if p is None and b == a)
