import random
from itertools import product

import pytest
from hypothesis import given, settings, strategies as st

from nilalg.field import GF, QQ
from nilalg.linalg import (Matrix, span, kernel, image, solve, intersect, subspace_sum, contains,
                           enumerate_subspaces, gaussian_binomial, gl_order, gl_generators,
                           random_invertible, random_matrix, BudgetExceeded, DimensionMismatch,
                           complement_units, zero_vec)


def _closure(gens):
    I = Matrix.identity(gens[0].F, gens[0].nrows)
    seen = {I}
    todo = [I]
    while todo:
        M = todo.pop()
        for g in gens:
            N = g @ M
            if N not in seen:
                seen.add(N)
                todo.append(N)
    return seen


@pytest.mark.parametrize("q,n,order", [(2, 2, 6), (2, 3, 168), (3, 2, 48), (4, 2, 180), (5, 2, 480)])
def test_gl_generators_generate(q, n, order):
    F = GF(q)
    assert gl_order(F, n) == order
    assert len(_closure(gl_generators(F, n))) == order


def test_gl_order_gf2_4():
    assert gl_order(GF(2), 4) == 20160


@pytest.mark.parametrize("q,n,k", [(2, 4, 2), (3, 4, 2), (2, 6, 3), (4, 3, 1), (5, 3, 2)])
def test_enumerate_subspaces_count_and_order(q, n, k):
    F = GF(q)
    subs = list(enumerate_subspaces(F, n, k))
    assert len(subs) == gaussian_binomial(n, k, q)
    keys = [tuple(a for r in U.basis for a in r) for U in subs]
    assert keys == sorted(keys)
    assert len(set(subs)) == len(subs)


def test_enumerate_subspaces_gf2_brute_force():
    # every 2-subspace of F_2^4 found by spanning all pairs
    F = GF(2)
    vecs = [v for v in product((0, 1), repeat=4) if any(v)]
    brute = {span(F, [u, v]) for u in vecs for v in vecs if span(F, [u, v]).dim == 2}
    assert brute == set(enumerate_subspaces(F, 4, 2))
    assert len(brute) == 35


def test_subspace_budget():
    with pytest.raises(BudgetExceeded):
        list(enumerate_subspaces(GF(5), 8, 4, budget=1000))


def test_gaussian_binomial_values():
    assert gaussian_binomial(6, 2, 2) == 651
    assert gaussian_binomial(6, 2, 3) == 11011
    assert gaussian_binomial(4, 0, 7) == 1
    assert gaussian_binomial(3, 4, 2) == 0


def test_det_and_inverse_over_q():
    from fractions import Fraction as Fr
    M = Matrix(QQ, [[Fr(2), Fr(1)], [Fr(7), Fr(4)]])
    assert M.det() == 1
    assert M @ M.inverse() == Matrix.identity(QQ, 2)


def test_dimension_mismatch():
    F = GF(3)
    with pytest.raises(DimensionMismatch):
        Matrix.identity(F, 2) @ Matrix.identity(F, 3)


def test_columns_are_images():
    F = GF(5)
    M = Matrix.from_columns(F, [(1, 2), (3, 4)])
    assert M.apply((1, 0)) == (1, 2)
    assert M.apply((0, 1)) == (3, 4)


def test_complement_units_span_everything():
    F = GF(3)
    U = span(F, [(1, 2, 0, 1), (0, 0, 1, 1)])
    W = span(F, list(U.basis) + complement_units(F, U))
    assert W.dim == 4


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 7]), st.integers(1, 4), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_rank_nullity(q, n, m, seed):
    F = GF(q)
    M = random_matrix(F, n, m, random.Random(seed))
    K = kernel(M)
    assert K.dim + M.rank() == m
    assert image(M).dim == M.rank()
    for v in K.basis:
        assert M.apply(v) == zero_vec(F, n)


@settings(max_examples=300, deadline=None)
@given(st.sampled_from([2, 3, 4, 5, 9]), st.integers(1, 4), st.integers(0, 10 ** 6))
def test_inverse_and_det_multiplicative(q, n, seed):
    F = GF(q)
    rng = random.Random(seed)
    A, B = random_invertible(F, n, rng), random_matrix(F, n, n, rng)
    assert A @ A.inverse() == Matrix.identity(F, n)
    assert (A @ B).det() == F.mul(A.det(), B.det())


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_solve_finds_preimage(q, seed):
    F = GF(q)
    rng = random.Random(seed)
    M = random_matrix(F, 3, 4, rng)
    x = tuple(rng.choice(F.elements()) for _ in range(4))
    b = M.apply(x)
    y = solve(M, b)
    assert y is not None and M.apply(y) == b


@settings(max_examples=200, deadline=None)
@given(st.sampled_from([2, 3]), st.integers(0, 10 ** 6))
def test_dimension_formula(q, seed):
    F = GF(q)
    rng = random.Random(seed)
    U = image(random_matrix(F, 5, 2, rng))
    V = image(random_matrix(F, 5, 3, rng))
    W = intersect(U, V)
    assert subspace_sum(U, V).dim + W.dim == U.dim + V.dim
    assert all(contains(U, w) and contains(V, w) for w in W.basis)
