import random

import pytest
from hypothesis import given, settings, strategies as st

from conftest import alg
from nilalg.field import GF, QQ
from nilalg.linalg import Matrix, random_invertible, span
from nilalg.liealg import (LieAlgebra, JacobiViolation, LieError, center, derived,
                           lower_central_series, upper_central_series, nilpotency_class,
                           is_nilpotent, change_basis, is_isomorphism, fingerprint,
                           split_abelian_summand_full, direct_sum_abelian, abelian, quotient,
                           format_table, characteristic_subspaces)
from nilalg.catalog import instantiate


def test_heisenberg_basics(GF3):
    H = alg(GF3, 3, "12:3")
    assert center(H) == span(GF3, [(0, 0, 1)])
    assert derived(H) == center(H)
    assert nilpotency_class(H) == 2
    assert [U.dim for U in lower_central_series(H)] == [3, 1, 0]
    assert [U.dim for U in upper_central_series(H)] == [0, 1, 3]


def test_antisymmetry_is_implied(GF5):
    H = alg(GF5, 3, "12:3")
    assert H.basis_bracket(1, 0) == (0, 0, 4)
    assert H.basis_bracket(2, 2) == (0, 0, 0)
    # storing (j, i) flips the sign
    H2 = LieAlgebra(GF5, 3, {(1, 0): (0, 0, 4)})
    assert H2 == H


def test_jacobi_violation_reported(GF2):
    with pytest.raises(JacobiViolation) as e:
        alg(GF2, 4, "23:4,14:1")
    # J(x1, x2, x3) = [x1, x4] = x1; the triple is 1-based
    assert e.value.triple == (1, 2, 3)


def test_not_nilpotent(GF3):
    # sl2-like over GF(3): [e,f]=h, [h,e]=2e, [h,f]=-2f
    L = LieAlgebra(GF3, 3, {(0, 1): (0, 0, 1), (2, 0): (2, 0, 0), (2, 1): (0, 1, 0)})
    assert not is_nilpotent(L)
    assert nilpotency_class(L) == "not nilpotent"


def test_filiform_class():
    F = QQ
    L = instantiate("L5_6", F)
    assert nilpotency_class(L) == 4
    assert is_nilpotent(L)


def test_split_abelian_summand(GF2):
    L = direct_sum_abelian(alg(GF2, 3, "12:3"), 2)
    s = split_abelian_summand_full(L)
    assert s.m == 2 and s.core.dim == 3
    assert change_basis(L, s.basis) == direct_sum_abelian(s.core, 2)


def test_abelian_split_is_total(GF3):
    s = split_abelian_summand_full(abelian(GF3, 4))
    assert s.m == 4 and s.core.dim == 0


def test_quotient_by_center(GF3):
    L = instantiate("L4_3", GF3)
    Q, proj = quotient(L, center(L))
    assert Q.dim == 3 and format_table(Q) != "abelian"
    assert proj.nrows == 3 and proj.ncols == 4


def test_characteristic_subspaces_are_fixed(GF2):
    from nilalg.autorbits import automorphism_group
    L = instantiate("L5_5", GF2)
    G = automorphism_group(L)
    for A in list(G.elements())[:50]:
        for U in characteristic_subspaces(L):
            assert span(GF2, [A.apply(v) for v in U.basis], L.dim) == U


def test_change_basis_singular(GF2):
    with pytest.raises(LieError):
        change_basis(alg(GF2, 2, ""), Matrix(GF2, [[1, 1], [1, 1]]))


@settings(max_examples=150, deadline=None)
@given(st.sampled_from(["L5_6", "L5_9", "L6_19(1)", "L6_22(1)", "L4_3+F"]),
       st.sampled_from([2, 3, 5]), st.integers(0, 10 ** 6))
def test_change_basis_gives_isomorphic_copy(name, q, seed):
    F = GF(q)
    L = instantiate(name, F)
    P = random_invertible(F, L.dim, random.Random(seed))
    K = change_basis(L, P)
    # P maps K to L
    assert is_isomorphism(K, L, P)
    assert fingerprint(K) == fingerprint(L)
    assert nilpotency_class(K) == nilpotency_class(L)
