"""The classification data of nilpotent Lie algebras of dimension at most 6
and the identification engine.

Identifiers are core based: an algebra with an abelian direct summand is
written as its core plus F^m (``"L3_2+F^2"``), and abelian algebras are
``"L1_1+F^{n-1}"``.  The traditional names such as ``L5_2`` or ``L6_7`` for
direct sums are accepted as aliases by :func:`parse_id`.

Every descendant entry records its parent, the coordinates of its defining
subspace in the listed basis of H^2(parent), and a bracket template.  The
template is literally the central extension of the parent by the lifted
rows; the test-suite checks this for each entry.
"""
import json
import re
from collections import namedtuple
from dataclasses import dataclass, field as dc_field

from .field import (InfiniteTransversal, make_field, omega, s_param,
                    t_param, square_class_transversal, star_plus_transversal,
                    normalize_star, normalize_star_plus, normalize_arf)
from .linalg import Matrix, span, BudgetExceeded
from .liealg import (LieAlgebra, LieError, NotNilpotent, is_nilpotent,
                     direct_sum_abelian, fingerprint,
                     split_abelian_summand_full, is_isomorphism)
from .cohomology import pair_index, cohomology
from .extensions import extract_cocycle
from .autorbits import (orbit_partition, extension_iso, transport_cocycle, block_diag,
                        AUT_Q_CAP)

MAX_DIM = 6


class CatalogError(LieError):
    pass


# -- identifiers --------------------------------------------------------------

@dataclass(frozen=True)
class AlgebraId:
    family: str
    param: object = None
    summands: int = 0
    F: object = dc_field(default=None, compare=False, hash=False)

    @property
    def dim(self):
        return ENTRIES[self.family].dim + self.summands

    def core(self):
        return AlgebraId(self.family, self.param, 0, self.F)

    def __str__(self):
        s = self.family
        if self.param is not None:
            p = self.F.fmt(self.param) if self.F is not None else str(self.param)
            s += f"({p})"
        if self.summands == 1:
            s += "+F"
        elif self.summands > 1:
            s += f"+F^{self.summands}"
        return s


_ID_RE = re.compile(r"^(L\d+_\d+(?:\^2)?)(?:\(([^)]*)\))?((?:\+F(?:\^\d+)?)*)$")


def parse_id(text, F=None):
    """Parse an identifier.  Traditional direct-sum names are resolved to
    their core based form; parameters are parsed with ``F`` when given."""
    s = str(text).replace(" ", "").replace("⊕", "+")
    m = _ID_RE.match(s)
    if not m:
        raise CatalogError(f"cannot parse algebra id {text!r}")
    fam, par, tail = m.group(1), m.group(2), m.group(3)
    extra = 0
    for t in re.findall(r"\+F(?:\^(\d+))?", tail):
        extra += int(t) if t else 1
    if fam in ALIASES:
        fam, base = ALIASES[fam]
        extra += base
    if fam not in ENTRIES:
        raise CatalogError(f"unknown algebra family {fam!r}")
    param = None
    if par is not None and par != "":
        param = F.parse(par) if F is not None else par
    elif ENTRIES[fam].domain:
        raise CatalogError(f"{fam} needs a parameter")
    return AlgebraId(fam, param, extra, F)


# -- entries --------------------------------------------------------------------

@dataclass
class Entry:
    family: str
    dim: int
    template: str
    parent: str = None           # core based id of K/C(K)
    rows: tuple = ()             # defining subspace in H^2(parent) coordinates
    domain: str = None           # star_nonzero | star | star_plus | arf | "star|star_plus"
    char: str = "any"            # any | odd | 2
    hint: str = None             # listed H^2 basis for the algebra itself
    order: int = 0

    @property
    def s(self):
        return len(self.rows)

    def domain_for(self, F):
        if self.domain == "star|star_plus":
            return "star_plus" if F.p == 2 else "star"
        return self.domain

    def available(self, F):
        if self.char == "odd":
            return F.p != 2
        if self.char == "2":
            return F.p == 2
        return True


E = Entry
_RAW_ENTRIES = [
    E("L1_1", 1, ""),
    E("L3_2", 3, "12:3", "L1_1+F", ((1,),), hint="13,23"),
    E("L4_3", 4, "12:3,13:4", "L3_2", ((1, 0),), hint="14,23"),
    E("L5_4", 5, "12:5,34:5", "L1_1+F^3", ((1, 0, 0, 0, 0, 1),), hint="13,14,23,24,34"),
    E("L5_5", 5, "12:3,13:5,24:5", "L3_2+F", ((1, 0, 0, 1),), hint="14,15+34,23,24"),
    E("L5_6", 5, "12:3,13:4,14:5,23:5", "L4_3", ((1, 1),), hint="15+24,23,25-34"),
    E("L5_7", 5, "12:3,13:4,14:5", "L4_3", ((1, 0),), hint="15,23,25-34"),
    E("L5_8", 5, "12:4,13:5", "L1_1+F^2", ((1, 0, 0), (0, 1, 0)), hint="14,15,23,24,25+34,35"),
    E("L5_9", 5, "12:3,13:4,23:5", "L3_2", ((1, 0), (0, 1)), hint="14,15+24,25"),
    E("L6_10", 6, "12:3,13:6,45:6", "L3_2+F^2", ((1, 0, 0, 0, 0, 0, 1),)),
    E("L6_11", 6, "12:3,13:4,14:6,23:6,25:6", "L4_3+F", ((1, 0, 1, 1),)),
    E("L6_12", 6, "12:3,13:4,14:6,25:6", "L4_3+F", ((1, 0, 0, 1),)),
    E("L6_13", 6, "12:3,13:5,15:6,24:5,34:6", "L5_5", ((0, 1, 0, 0),)),
    E("L6_14", 6, "12:3,13:4,14:5,23:5,25:6,34:-6", "L5_6", ((0, 0, 1),), char="odd"),
    E("L6_15", 6, "12:3,13:4,14:5,15:6,23:5,24:6", "L5_6", ((1, 0, 0),)),
    E("L6_16", 6, "12:3,13:4,14:5,25:6,34:-6", "L5_7", ((0, 0, 1),), char="odd"),
    E("L6_17", 6, "12:3,13:4,14:5,15:6,23:6", "L5_7", ((1, 1, 0),)),
    E("L6_18", 6, "12:3,13:4,14:5,15:6", "L5_7", ((1, 0, 0),)),
    E("L6_19", 6, "12:4,13:5,15:6,24:6,35:e6", "L5_8", ((0, 1, 0, 1, 0, "e"),),
      domain="star_nonzero"),
    E("L6_20", 6, "12:4,13:5,15:6,24:6", "L5_8", ((0, 1, 0, 1, 0, 0),)),
    E("L6_21", 6, "12:3,13:4,14:6,23:5,25:e6", "L5_9", ((1, 0, "e"),), domain="star_nonzero"),
    E("L6_22", 6, "12:5,13:6,24:e6,34:5", "L1_1+F^3",
      ((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, "e", 0)), domain="star|star_plus"),
    E("L6_23", 6, "12:3,13:5,14:6,24:5", "L3_2+F", ((1, 0, 0, 1), (0, 1, 0, 0))),
    E("L6_24", 6, "12:3,13:5,14:e6,23:6,24:5", "L3_2+F", ((1, 0, 0, 1), (0, "e", 1, 0)),
      domain="star|star_plus"),
    E("L6_25", 6, "12:3,13:5,14:6", "L3_2+F", ((1, 0, 0, 0), (0, 1, 0, 0))),
    E("L6_26", 6, "12:4,13:5,23:6", "L1_1+F^2", ((1, 0, 0), (0, 1, 0), (0, 0, 1))),
    E("L6_27", 6, "12:3,13:5,24:6", "L3_2+F", ((1, 0, 0, 0), (0, 0, 0, 1))),
    E("L6_28", 6, "12:3,13:4,14:5,23:6", "L4_3", ((1, 0), (0, 1))),
    E("L6_1^2", 6, "12:3,13:5,15:6,24:5+6,34:6", "L5_5", ((0, 1, 0, 1),), char="2"),
    E("L6_2^2", 6, "12:3,13:4,14:5,15:6,23:5+6,24:6", "L5_6", ((1, 1, 0),), char="2"),
    E("L6_3^2", 6, "12:3,13:4,14:5,23:5+e6,25:6,34:6", "L5_6", ((0, "e", 1),),
      domain="star_plus", char="2"),
    E("L6_4^2", 6, "12:3,13:4,14:5,23:e6,25:6,34:6", "L5_7", ((0, "e", 1),),
      domain="star_plus", char="2"),
    E("L6_5^2", 6, "12:4,13:5,25:6,34:6", "L5_8", ((0, 0, 0, 0, 1, 0),), char="2"),
    E("L6_6^2", 6, "12:3,13:4,15:6,23:5,24:6", "L5_9", ((0, 1, 0),), char="2"),
    E("L6_7^2", 6, "12:5,13:6,24:e6,34:5+6", "L1_1+F^3",
      ((1, 0, 0, 0, 0, 1), (0, 1, 0, 0, "e", 1)), domain="arf", char="2"),
    E("L6_8^2", 6, "12:3,13:5,14:e6,23:6,24:5+6", "L3_2+F", ((1, 0, 0, 1), (0, "e", 1, 1)),
      domain="arf", char="2"),
]
del E

ENTRIES = {e.family: e for e in _RAW_ENTRIES}

# listed H^2 bases for parents that are direct sums
SUM_HINTS = {
    "L1_1+F": "12",
    "L1_1+F^2": "12,13,23",
    "L1_1+F^3": "12,13,14,23,24,34",
    "L3_2+F": "13,14,23,24",
    "L3_2+F^2": "13,14,15,23,24,25,45",
    "L4_3+F": "14,15,23,25",
}

# traditional names of direct sums -> (core family, number of F summands)
ALIASES = {
    "L2_1": ("L1_1", 1), "L3_1": ("L1_1", 2), "L4_1": ("L1_1", 3), "L4_2": ("L3_2", 1),
    "L5_1": ("L1_1", 4), "L5_2": ("L3_2", 2), "L5_3": ("L4_3", 1),
    "L6_1": ("L1_1", 5), "L6_2": ("L3_2", 3), "L6_3": ("L4_3", 2),
}
for _k in range(4, 10):
    ALIASES[f"L6_{_k}"] = (f"L5_{_k}", 1)

def _traditional_name(aid):
    """Traditional name of an identifier, e.g. L3_2+F^2 -> L5_2."""
    dim = aid.dim
    for name, (fam, m) in ALIASES.items():
        if fam == aid.family and m == aid.summands and int(name[1]) == dim:
            return name
    return aid.family


def _sort_key(aid, F=None):
    # dim, ordinary before the char 2 series, traditional number, parameter
    name = _traditional_name(aid)
    series = 1 if name.endswith("^2") else 0
    num = int(re.match(r"L\d+_(\d+)", name).group(1))
    rank = 0
    if aid.param is not None and F is not None:
        rank = transversal(ENTRIES[aid.family], F).index(aid.param)
    return (aid.dim, series, num, rank)


def traditional_name(aid):
    return _traditional_name(aid)


# -- parsing templates ----------------------------------------------------------

_TERM = re.compile(r"([+-]?)(e?)(\d)")


def parse_template(F, n, template, eps=None):
    """"12:3,13:5+e6" -> bracket table (0-based) over F."""
    table = {}
    for part in filter(None, (p.strip() for p in template.split(","))):
        lhs, rhs = part.split(":")
        i, j = int(lhs[0]) - 1, int(lhs[1]) - 1
        v = [F.zero] * n
        for sign, e, k in _TERM.findall(rhs):
            c = F.one
            if e:
                if eps is None:
                    raise CatalogError("template needs a parameter")
                c = eps
            if sign == "-":
                c = F.neg(c)
            v[int(k) - 1] = F.add(v[int(k) - 1], c)
        table[(i, j)] = tuple(v)
    return table


def parse_hint(F, n, hint):
    """"14,15+34,25-34" -> cocycles in Delta coordinates."""
    index, pairs = pair_index(n)
    out = []
    for part in hint.split(","):
        v = [F.zero] * len(pairs)
        for sign, a, b in re.findall(r"([+-]?)(\d)(\d)", part):
            c = F.neg(F.one) if sign == "-" else F.one
            p = index[(int(a) - 1, int(b) - 1)]
            v[p] = F.add(v[p], c)
        out.append(tuple(v))
    return out


def lift_rows(F, rows, eps=None):
    out = []
    for r in rows:
        row = []
        for x in r:
            if x == "e":
                if eps is None:
                    raise CatalogError("defining rows need a parameter")
                row.append(eps)
            else:
                row.append(F.from_int(x))
        out.append(tuple(row))
    return out


# -- parameters -------------------------------------------------------------------

def transversal(entry, F):
    dom = entry.domain_for(F)
    if dom is None:
        return [None]
    if not F.is_finite:
        raise InfiniteTransversal(f"{entry.family} has infinitely many parameters over {F}")
    if dom == "star_nonzero":
        return square_class_transversal(F)[1:]
    if dom == "star":
        return square_class_transversal(F)
    if dom == "star_plus":
        return star_plus_transversal(F)
    if dom == "arf":
        return [F.zero, omega(F)]
    raise AssertionError(dom)


def normalize_parameter(family, eps, F):
    """Transversal representative of the class of ``eps`` for ``family``."""
    entry = ENTRIES[parse_id(family).family] if family not in ENTRIES else ENTRIES[family]
    dom = entry.domain_for(F)
    if dom is None:
        raise CatalogError(f"{entry.family} has no parameter")
    if not entry.available(F):
        raise CatalogError(f"{entry.family} is not defined in characteristic {F.p}")
    if dom == "star_nonzero":
        if eps == F.zero:
            raise CatalogError(f"{entry.family} needs a nonzero parameter")
        return normalize_star(F, eps)
    if dom == "star":
        return normalize_star(F, eps)
    if dom == "star_plus":
        return normalize_star_plus(F, eps)
    return normalize_arf(F, eps)


# -- instantiation -------------------------------------------------------------

_INSTANCES = {}


def _as_id(aid, F):
    if isinstance(aid, AlgebraId):
        if aid.F is None and aid.param is not None and isinstance(aid.param, str):
            return parse_id(str(aid), F)
        return AlgebraId(aid.family, aid.param, aid.summands, F)
    return parse_id(aid, F)


def instantiate(aid, F, normalize=False):
    """The algebra with identifier ``aid`` over ``F``.  Raw parameters in
    the family's domain are accepted; ``normalize=True`` replaces them by
    their transversal representative first."""
    F = make_field(F)
    aid = _as_id(aid, F)
    entry = ENTRIES[aid.family]
    if not entry.available(F):
        raise CatalogError(f"{entry.family} is only defined in characteristic "
                           f"{'2' if entry.char == '2' else 'different from 2'}")
    eps = aid.param
    if entry.domain is not None:
        if eps is None:
            raise CatalogError(f"{entry.family} needs a parameter")
        if entry.domain_for(F) == "star_nonzero" and eps == F.zero:
            raise CatalogError(f"{entry.family} needs a nonzero parameter")
        if normalize:
            eps = normalize_parameter(entry.family, eps, F)
            aid = AlgebraId(aid.family, eps, aid.summands, F)
    elif eps is not None:
        raise CatalogError(f"{entry.family} takes no parameter")
    key = (str(aid), F)
    if key in _INSTANCES:
        return _INSTANCES[key]
    core = LieAlgebra(F, entry.dim, parse_template(F, entry.dim, entry.template, eps),
                      check=True)
    if aid.summands:
        L = direct_sum_abelian(core, aid.summands)
    else:
        L = core
    L.name = str(aid)
    hint = SUM_HINTS.get(str(aid)) if aid.summands else entry.hint
    if hint is not None:
        L.h2_hint = parse_hint(F, L.dim, hint)
    _INSTANCES[key] = L
    return L


def defining_subspace(entry, F, eps=None):
    """Span of the lifted defining rows inside H^2(parent) coordinates."""
    return span(F, lift_rows(F, entry.rows, eps), len(entry.rows[0]))


def defining_cocycles(entry, F, eps=None):
    P = instantiate(entry.parent, F)
    ctx = cohomology(P)
    return [ctx.lift(r) for r in lift_rows(F, entry.rows, eps)]


# -- listing and counting ----------------------------------------------------------

def _ids_in_dim(dim, F):
    # every core of dimension <= dim, padded with abelian summands
    out = []
    for entry in _RAW_ENTRIES:
        if entry.dim <= dim and entry.available(F):
            for eps in transversal(entry, F):
                out.append(AlgebraId(entry.family, eps, dim - entry.dim, F))
    return sorted(out, key=lambda a: _sort_key(a, F))


def list_catalog(dim, F):
    """All isomorphism types of nilpotent Lie algebras of dimension ``dim``
    over ``F``, as (AlgebraId, LieAlgebra) pairs."""
    F = make_field(F)
    if dim < 1 or dim > MAX_DIM:
        raise CatalogError(f"dimension must be between 1 and {MAX_DIM}")
    if not F.is_finite and dim == 6:
        raise InfiniteTransversal(
            "dimension 6 over Q has infinite families: " + ", ".join(symbolic_families()))
    if not F.is_finite:
        ids = [AlgebraId(e.family, None, dim - e.dim, F) for e in _RAW_ENTRIES
               if e.dim <= dim]
        ids = sorted(ids, key=_sort_key)
    else:
        ids = _ids_in_dim(dim, F)
    return [(a, instantiate(a, F)) for a in ids]


def symbolic_families():
    out = []
    for e in _RAW_ENTRIES:
        if e.dim != 6:
            continue
        tag = {"star_nonzero": "(eps in F*/~*)", "star": "(eps in F/~*)",
               "star_plus": "(eps in F/~*+)", "arf": "(eta in {0, omega})",
               "star|star_plus": "(eps in F/~* or F/~*+)", None: ""}[e.domain]
        ch = {"odd": " [char != 2]", "2": " [char 2]", "any": ""}[e.char]
        out.append(e.family + tag + ch)
    return out


def count_formula(F):
    """26 + 4s in odd characteristic, 30 + 2s + 4t in characteristic 2."""
    F = make_field(F)
    if not F.is_finite:
        return "26+4s, s infinite"
    s = s_param(F)
    if F.p == 2:
        return 30 + 2 * s + 4 * t_param(F)
    return 26 + 4 * s


# -- descendants -----------------------------------------------------------------

def descendants_of(parent):
    """Entries whose parent is ``parent`` (core based id)."""
    pid = str(parse_id(parent))
    return [e for e in _RAW_ENTRIES if e.parent == pid]


def descendant_table(parent, F, s):
    """The listed step-s descendants of ``parent`` over F, as
    (AlgebraId, defining Subspace) pairs."""
    F = make_field(F)
    out = []
    for e in descendants_of(parent):
        if e.s != s or not e.available(F):
            continue
        for eps in transversal(e, F):
            out.append((AlgebraId(e.family, eps, 0, F), defining_subspace(e, F, eps)))
    return out


CrossCheck = namedtuple("CrossCheck", "parent s claimed computed matches ok")


def cross_validate(parent, F, s):
    """Compare the listed descendants with the computed orbits on
    allowable subspaces: equal counts and a bijection via orbit indices."""
    F = make_field(F)
    P = instantiate(parent, F)
    part = orbit_partition(P, s)
    claimed = descendant_table(parent, F, s)
    allowable = [i for i, ok in enumerate(part.allowable) if ok]
    matches = []
    for aid, U in claimed:
        oi = part.orbit_index(U)
        matches.append((aid, oi, part.allowable[oi]))
    hit = sorted(oi for _, oi, _ in matches)
    ok = (hit == allowable) and all(a for _, _, a in matches)
    return CrossCheck(str(parse_id(parent)), s, len(claimed), len(allowable), matches, ok)


# -- identification -----------------------------------------------------------------

_ORBIT_MAPS = {}


def _orbit_map(pid, F, s):
    key = (pid, F, s)
    if key not in _ORBIT_MAPS:
        P = instantiate(pid, F)
        part = orbit_partition(P, s)
        table = {}
        for aid, U in descendant_table(pid, F, s):
            oi = part.orbit_index(U)
            if oi in table:
                raise AssertionError(f"{aid} and {table[oi][0]} share an orbit")
            table[oi] = (aid, U)
        _ORBIT_MAPS[key] = (P, part, table)
    return _ORBIT_MAPS[key]


Partial = namedtuple("Partial", "fingerprint candidates")


def identify(K, witness=False):
    """Identifier of K (and, with ``witness=True``, an isomorphism X from
    K onto ``instantiate(id)``)."""
    F = K.F
    if K.dim > MAX_DIM or K.dim < 1:
        raise CatalogError(f"identification covers dimensions 1..{MAX_DIM}")
    if not is_nilpotent(K):
        raise NotNilpotent("algebra is not nilpotent")
    if not F.is_finite:
        return Partial(fingerprint(K), candidates(K))
    if F.q > AUT_Q_CAP:
        raise BudgetExceeded(f"identification is capped at q <= {AUT_Q_CAP}")
    aid, X = _identify(K)
    target = instantiate(aid, F)
    if not is_isomorphism(K, target, X):
        raise AssertionError("identification witness failed verification")
    return (aid, X) if witness else aid


def _identify(K):
    F, n = K.F, K.dim
    if K.is_abelian():
        return AlgebraId("L1_1", None, n - 1, F), Matrix.identity(F, n)
    sp = split_abelian_summand_full(K)
    core_id, Xc = _identify_core(sp.core)
    aid = AlgebraId(core_id.family, core_id.param, sp.m, F)
    X = block_diag(F, Xc, sp.m) @ sp.basis.inverse()
    return aid, X


def _identify_core(C):
    F = C.F
    ex = extract_cocycle(C)
    pid, phi = _identify(ex.parent)
    s = len(ex.thetas)
    P, part, table = _orbit_map(str(pid), F, s)
    n = P.dim
    phi_inv = phi.inverse()
    th = [transport_cocycle(F, n, t, phi_inv) for t in ex.thetas]
    ctx = cohomology(P)
    U = span(F, [ctx.reduce(t) for t in th], ctx.dim)
    oi = part.orbit_index(U)
    if oi not in table:
        raise AssertionError(f"no listed descendant of {pid} in this orbit")
    aid, Ue = table[oi]
    ok, A = part.same_orbit(Ue, U)
    entry = ENTRIES[aid.family]
    theta_e = defining_cocycles(entry, F, aid.param)
    Psi = extension_iso(P, th, theta_e, A)
    Phi = block_diag(F, phi, s)
    return aid, Psi @ Phi @ ex.basis.inverse()


def candidates(K):
    """Families compatible with the basic invariants of K (used over Q)."""
    F = K.F
    fp = fingerprint(K)
    out = []
    for e in _RAW_ENTRIES:
        if e.dim > K.dim or not e.available(F):
            continue
        samples = [None] if e.domain is None else [F.one, F.from_int(2), F.zero]
        for eps in samples:
            if e.domain_for(F) == "star_nonzero" and eps == F.zero:
                continue
            core = LieAlgebra(F, e.dim, parse_template(F, e.dim, e.template, eps), check=False)
            L = direct_sum_abelian(core, K.dim - e.dim)
            if fingerprint(L) == fp:
                out.append(str(AlgebraId(e.family, None, K.dim - e.dim))
                           + ("(eps)" if e.domain else ""))
                break
    return out


# -- export -------------------------------------------------------------------

def brackets_of(L):
    F = L.F
    out = []
    for (i, j), v in L.table.items():
        for k, c in enumerate(v):
            if c != F.zero:
                out.append({"i": i + 1, "j": j + 1, "k": k + 1, "c": F.fmt(c)})
    return out


def export_json(dim, F):
    F = make_field(F)
    entries = []
    for aid, L in list_catalog(dim, F):
        e = ENTRIES[aid.family]
        entries.append({
            "id": str(aid),
            "dim": L.dim,
            "brackets": brackets_of(L),
            "parent": e.parent if aid.summands == 0 else None,
            "parameter": None if aid.param is None else F.fmt(aid.param),
        })
    doc = {"field": F.name, "count": len(entries), "entries": entries}
    return json.dumps(doc, indent=2, sort_keys=True)
