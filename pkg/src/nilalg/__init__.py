"""Nilpotent Lie algebras of dimension at most 6 over small fields:
cohomology, descendants, automorphism groups, orbits and identification."""
from .field import make_field, GF, QQ
from .linalg import Matrix, Subspace, span
from .liealg import LieAlgebra, change_basis, is_isomorphism
from .cohomology import cohomology
from .extensions import central_extension, extract_cocycle
from .autorbits import automorphism_group, orbit_partition, same_orbit, isomorphic
from .catalog import (AlgebraId, parse_id, instantiate, list_catalog, count_formula,
                      identify, descendant_table)

__all__ = ["make_field", "GF", "QQ", "Matrix", "Subspace", "span", "LieAlgebra",
           "change_basis", "is_isomorphism", "cohomology", "central_extension",
           "extract_cocycle", "automorphism_group", "orbit_partition", "same_orbit",
           "isomorphic", "AlgebraId", "parse_id", "instantiate", "list_catalog",
           "count_formula", "identify", "descendant_table"]

__version__ = "0.1.0"
