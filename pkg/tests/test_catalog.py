import json
import random

import pytest

from oracles import gf2_isomorphic
from nilalg.field import GF, QQ, InfiniteTransversal
from nilalg.linalg import random_invertible
from nilalg.liealg import (is_nilpotent, change_basis, center, quotient, abelian,
                           jacobi_check, derived, is_subspace)
from nilalg.cohomology import cohomology
from nilalg.autorbits import isomorphic
from nilalg.catalog import (parse_id, AlgebraId, instantiate, list_catalog, count_formula,
                            normalize_parameter, descendant_table, identify, ENTRIES,
                            transversal, CatalogError, Partial, traditional_name, export_json,
                            symbolic_families, cross_validate, defining_subspace)

FIELDS = {q: GF(q) for q in (2, 3, 4, 5, 7, 8, 9)}


# -- ids ------------------------------------------------------------------------

@pytest.mark.parametrize("text", ["L6_19(1)", "L5_4+F", "L6_8^2(1)+F^2", "L1_1+F^5", "L6_10",
                                  "L3_2+F^2"])
def test_id_round_trip(text):
    assert str(parse_id(text)) == text


@pytest.mark.parametrize("alias,canon", [("L5_2", "L3_2+F^2"), ("L4_1", "L1_1+F^3"),
                                         ("L6_1", "L1_1+F^5"), ("L6_9", "L5_9+F"),
                                         ("L2_1", "L1_1+F")])
def test_aliases(alias, canon):
    assert str(parse_id(alias)) == canon
    assert traditional_name(parse_id(canon)) == alias


def test_gf4_parameter_format():
    F = GF(4)
    for aid, _ in list_catalog(6, F):
        assert parse_id(str(aid), F) == aid
    # the representative of F* modulo squares is the least element, here a
    names = [str(a) for a, _ in list_catalog(6, F)]
    assert "L6_19([0,1])" in names and "L6_8^2([0,1])" in names


def test_bad_ids():
    for bad in ["L7_1", "X6_1", "L6_19(", "L6_99"]:
        with pytest.raises((CatalogError, ValueError)):
            instantiate(bad, GF(3))


# -- counts -----------------------------------------------------------------------

@pytest.mark.parametrize("q,count", [(2, 36), (3, 34), (4, 36), (5, 34), (7, 34), (8, 36),
                                     (9, 34)])
def test_dim6_counts(q, count):
    F = FIELDS[q]
    assert len(list_catalog(6, F)) == count == count_formula(F)


@pytest.mark.parametrize("dim,count", [(1, 1), (2, 1), (3, 2), (4, 3), (5, 9)])
@pytest.mark.parametrize("F", [GF(2), GF(3), QQ], ids=str)
def test_small_dims_field_independent(dim, count, F):
    rows = list_catalog(dim, F)
    assert len(rows) == count
    assert all(is_nilpotent(L) and L.dim == dim for _, L in rows)


def test_dim6_over_q_refused():
    with pytest.raises((CatalogError, InfiniteTransversal)):
        list_catalog(6, QQ)
    assert count_formula(QQ) == "26+4s, s infinite"
    assert len(symbolic_families()) == 27


@pytest.mark.parametrize("q", [2, 3, 5])
def test_entries_are_valid_nilpotent(q):
    F = FIELDS[q]
    for aid, L in list_catalog(6, F):
        assert jacobi_check(L) is None
        assert is_nilpotent(L)


# -- instantiation and parameters ------------------------------------------------------

def test_l610_table():
    L = instantiate("L6_10", GF(5))
    assert L.basis_bracket(0, 1) == (0, 0, 1, 0, 0, 0)
    assert L.basis_bracket(0, 2) == (0, 0, 0, 0, 0, 1)
    assert L.basis_bracket(3, 4) == (0, 0, 0, 0, 0, 1)
    assert len(L.table) == 3


def test_l67_2_omega_gf2():
    L = instantiate("L6_7^2(1)", GF(2))
    assert L.basis_bracket(2, 3) == (0, 0, 0, 0, 1, 1)


def test_domain_errors():
    with pytest.raises(CatalogError):
        instantiate("L6_19(0)", GF(3))
    with pytest.raises(CatalogError):
        instantiate("L6_3^2(0)", GF(3))
    with pytest.raises(CatalogError):
        instantiate("L6_14", GF(2))


@pytest.mark.parametrize("family,eps,q,out", [("L6_19", 4, 5, 1), ("L6_22", 0, 5, 0),
                                              ("L6_3^2", 1, 2, 0), ("L6_21", 3, 5, 2),
                                              ("L6_24", 2, 3, 2), ("L6_8^2", 1, 2, 1)])
def test_normalize_parameter(family, eps, q, out):
    assert normalize_parameter(family, eps, GF(q)) == out


def _star(F, a, b):
    return any(F.mul(F.mul(g, g), b) == a for g in F.nonzero())


def _star_plus(F, a, b):
    return any(F.add(F.mul(F.mul(g, g), b), F.mul(d, d)) == a
               for g in F.nonzero() for d in F.elements())


def _arf(F, a, b):
    return any(F.add(F.mul(x, x), x) == F.add(a, b) for x in F.elements())


RELATIONS = {"star": _star, "star_nonzero": _star, "star_plus": _star_plus, "arf": _arf}


def _param_cases():
    for q in (2, 3, 5):
        F = FIELDS[q]
        for fam, e in ENTRIES.items():
            dom = e.domain_for(F) if e.available(F) else None
            if dom is None:
                continue
            yield pytest.param(fam, q, id=f"{fam}-GF{q}")


@pytest.mark.parametrize("family,q", list(_param_cases()))
def test_parameter_law(family, q):
    # instantiate(family, a) and (family, b) are isomorphic iff a ~ b,
    # exhaustively over the raw domain
    F = FIELDS[q]
    e = ENTRIES[family]
    dom = e.domain_for(F)
    rel = RELATIONS[dom]
    pool = list(F.nonzero()) if dom == "star_nonzero" else list(F.elements())
    algs = {a: instantiate(AlgebraId(family, a, 0, F), F) for a in pool}
    for i, a in enumerate(pool):
        for b in pool[i:]:
            want = rel(F, a, b)
            assert isomorphic(algs[a], algs[b])[0] == want, (a, b)
            if q == 2:
                assert gf2_isomorphic(algs[a], algs[b]) == want
    reps = transversal(e, F)
    assert {normalize_parameter(family, a, F) for a in pool} == set(reps)


# -- descendant tables ------------------------------------------------------------

def test_l56_gf2_step1():
    ids = [str(a) for a, _ in descendant_table("L5_6", GF(2), 1)]
    assert ids == ["L6_15", "L6_2^2", "L6_3^2(0)"]


@pytest.mark.parametrize("q", [2, 3, 5])
def test_l54_has_none(q):
    assert descendant_table("L5_4", GF(q), 1) == []


def test_l31_step3():
    assert [str(a) for a, _ in descendant_table("L3_1", GF(3), 3)] == ["L6_26"]


@pytest.mark.parametrize("q", [2, 3])
def test_defining_subspaces_allowable_and_parent_consistent(q):
    F = FIELDS[q]
    for fam, e in ENTRIES.items():
        if e.parent is None or not e.available(F):
            continue
        P = instantiate(e.parent, F)
        ctx = cohomology(P)
        for eps in transversal(e, F):
            assert ctx.allowable(defining_subspace(e, F, eps))
            K = instantiate(AlgebraId(fam, eps, 0, F), F)
            C = center(K)
            assert is_subspace(C, derived(K))
            assert isomorphic(quotient(K, C)[0], P)[0]


def test_cross_validate_reports():
    r = cross_validate("L5_8", GF(3), 1)
    assert r.ok and r.claimed == r.computed == 3


# -- identification ------------------------------------------------------------------

def test_identify_round_trip_examples():
    F = GF(3)
    assert str(identify(instantiate("L6_24(0)", F))) == "L6_24(0)"
    K = change_basis(instantiate("L6_19(1)", F), random_invertible(F, 6, random.Random(5)))
    assert str(identify(K)) == "L6_19(1)"
    assert str(identify(abelian(GF(2), 6))) == "L1_1+F^5"


def test_identify_normalizes_parameter():
    F = GF(5)
    assert str(identify(instantiate("L6_22(4)", F))) == "L6_22(1)"


def test_identify_with_witness():
    F = GF(2)
    L = instantiate("L6_8^2(1)", F)
    K = change_basis(L, random_invertible(F, 6, random.Random(2)))
    aid, X = identify(K, witness=True)
    from nilalg.liealg import is_isomorphism
    assert str(aid) == "L6_8^2(1)"
    assert is_isomorphism(K, instantiate(aid, F), X)


def test_identify_over_q_is_partial():
    res = identify(instantiate("L6_19(1)", QQ))
    assert isinstance(res, Partial)
    assert "L6_19" in " ".join(res.candidates)


def test_identify_over_q_small_dim_candidates():
    res = identify(instantiate("L5_6", QQ))
    assert isinstance(res, Partial) and "L5_6" in res.candidates


def test_export_json_deterministic():
    a, b = export_json(5, GF(3)), export_json(5, GF(3))
    assert a == b
    doc = json.loads(a)
    assert doc["count"] == len(doc["entries"]) == 9
    assert doc["field"] == "GF(3)"
