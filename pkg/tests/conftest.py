import os
import sys

import pytest

sys.path.insert(0, os.path.dirname(__file__))

from nilalg.field import make_field
from nilalg.liealg import LieAlgebra


@pytest.fixture(scope="session")
def GF2():
    return make_field("GF(2)")


@pytest.fixture(scope="session")
def GF3():
    return make_field("GF(3)")


@pytest.fixture(scope="session")
def GF5():
    return make_field("GF(5)")


def alg(F, n, rel):
    """Algebra from a string like "12:3,13:4" (1-based, unit coefficients,
    a leading minus allowed)."""
    table = {}
    for part in filter(None, rel.split(",")):
        ij, rhs = part.split(":")
        v = [F.zero] * n
        for term in rhs.split("+"):
            c = F.one
            if term.startswith("-"):
                c, term = F.neg(F.one), term[1:]
            k = int(term) - 1
            v[k] = F.add(v[k], c)
        table[(int(ij[0]) - 1, int(ij[1]) - 1)] = tuple(v)
    return LieAlgebra(F, n, table)
