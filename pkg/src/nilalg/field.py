"""Exact arithmetic over the rationals and over small Galois fields.

Elements are bare Python values interpreted by a :class:`FieldCtx`:

* finite fields use ``int`` in ``range(q)``; the integer is the rank of the
  element in the enumeration order, which is ``0, 1, ..., p-1`` for prime
  fields and lexicographic on coefficient vectors ``[c0, c1, ...]``
  (constant term first) for extension fields;
* the rationals use :class:`fractions.Fraction`.

Finite arithmetic goes through precomputed addition/multiplication tables,
so every operation is a pair of list lookups.  The square-class relation
``~*`` (a = g^2 b, g nonzero), the characteristic-2 relation ``~*+``
(a = g^2 b + d^2) and the constants psi(F), omega, s, t live here too.
"""
from fractions import Fraction
from functools import lru_cache
from itertools import product
import math
import re

import numpy as np

BUILTIN_MODULI = {
    (2, 2): (1, 1, 1),      # x^2 + x + 1
    (2, 3): (1, 1, 0, 1),   # x^3 + x + 1
    (3, 2): (1, 0, 1),      # x^2 + 1
    (2, 4): (1, 1, 0, 0, 1),  # x^4 + x + 1
}

ENUM_CAP = 16


class FieldError(ValueError):
    pass


class UnsupportedField(FieldError):
    pass


class InfiniteTransversal(FieldError):
    pass


class _Infinite:
    """Symbolic marker for the index of the squares in an infinite field."""
    _inst = None

    def __new__(cls):
        if cls._inst is None:
            cls._inst = super().__new__(cls)
        return cls._inst

    def __repr__(self):
        return "infinite"

    __str__ = __repr__


INFINITE = _Infinite()


def _is_prime(p):
    if p < 2:
        return False
    return all(p % d for d in range(2, math.isqrt(p) + 1))


# -- polynomials over GF(p), coefficient tuples with the constant term first

def _poly_trim(a):
    a = list(a)
    while a and a[-1] == 0:
        a.pop()
    return a


def _poly_mod(a, m, p):
    a = _poly_trim(a)
    m = _poly_trim(m)
    inv_lead = pow(m[-1], p - 2, p)
    while len(a) >= len(m):
        c = a[-1] * inv_lead % p
        shift = len(a) - len(m)
        for i, mi in enumerate(m):
            a[shift + i] = (a[shift + i] - c * mi) % p
        a = _poly_trim(a)
    return a


def _irreducible(m, p):
    k = len(m) - 1
    for d in range(1, k // 2 + 1):
        for tail in product(range(p), repeat=d):
            if _poly_mod(m, list(tail) + [1], p) == []:
                return False
    return True


class FieldCtx:
    """A field: either the rationals or GF(p^k) with a fixed modulus."""

    def __init__(self, p=0, k=1, modulus=None):
        if p == 0:
            self.kind = "rational"
            self.p, self.k, self.q = 0, 1, None
            self.modulus = None
            self.zero, self.one = Fraction(0), Fraction(1)
            return
        if not _is_prime(p):
            raise UnsupportedField(f"{p} is not prime")
        if k < 1:
            raise UnsupportedField("degree must be positive")
        if k > 1 and modulus is None:
            if (p, k) not in BUILTIN_MODULI:
                raise UnsupportedField(f"no built-in modulus for GF({p}^{k})")
            modulus = BUILTIN_MODULI[(p, k)]
        if k > 1:
            modulus = tuple(modulus)
            if len(modulus) != k + 1 or modulus[-1] != 1:
                raise UnsupportedField("modulus must be monic of degree k")
            if not _irreducible(modulus, p):
                raise UnsupportedField(f"modulus {modulus} is reducible mod {p}")
        self.kind = "finite"
        self.p, self.k, self.q = p, k, p ** k
        self.modulus = modulus
        self._build_tables()

    def _build_tables(self):
        p, k, q = self.p, self.k, self.q
        vecs = [tuple(v) for v in product(range(p), repeat=k)]
        index = {v: i for i, v in enumerate(vecs)}
        self._vecs = vecs
        add = [[index[tuple((a + b) % p for a, b in zip(u, v))] for v in vecs]
               for u in vecs]
        mul = [[0] * q for _ in range(q)]
        for i, u in enumerate(vecs):
            for j, v in enumerate(vecs):
                if k == 1:
                    mul[i][j] = u[0] * v[0] % p
                    continue
                prod = [0] * (2 * k - 1)
                for a, ua in enumerate(u):
                    if ua:
                        for b, vb in enumerate(v):
                            prod[a + b] += ua * vb
                r = _poly_mod([c % p for c in prod], self.modulus, p)
                r = tuple(r + [0] * (k - len(r)))
                mul[i][j] = index[r]
        self.zero = 0
        self.one = index[(1,) + (0,) * (k - 1)]
        self._add = add
        self._mul = mul
        self._neg = [row.index(0) for row in add]
        inv = [None] * q
        for i in range(1, q):
            inv[i] = mul[i].index(self.one)
        self._inv = inv
        self._sub = [[add[a][self._neg[b]] for b in range(q)] for a in range(q)]
        # numpy copies for vectorised bulk work
        self.add_table = np.array(add, dtype=np.int64)
        self.mul_table = np.array(mul, dtype=np.int64)
        self.neg_table = np.array(self._neg, dtype=np.int64)

    # -- basic protocol -----------------------------------------------------
    @property
    def is_finite(self):
        return self.kind == "finite"

    @property
    def char(self):
        return self.p

    def add(self, a, b):
        if self.q is None:
            return a + b
        return self._add[a][b]

    def sub(self, a, b):
        if self.q is None:
            return a - b
        return self._sub[a][b]

    def mul(self, a, b):
        if self.q is None:
            return a * b
        return self._mul[a][b]

    def neg(self, a):
        if self.q is None:
            return -a
        return self._neg[a]

    def inv(self, a):
        if self.q is None:
            if a == 0:
                raise ZeroDivisionError("inverse of zero")
            return 1 / Fraction(a)
        r = self._inv[a]
        if r is None:
            raise ZeroDivisionError("inverse of zero")
        return r

    def div(self, a, b):
        return self.mul(a, self.inv(b))

    def pow(self, a, e):
        if e < 0:
            a, e = self.inv(a), -e
        r = self.one
        while e:
            if e & 1:
                r = self.mul(r, a)
            a = self.mul(a, a)
            e >>= 1
        return r

    def from_int(self, n):
        """Image of the integer ``n`` under Z -> F."""
        if self.q is None:
            return Fraction(n)
        m = n % self.p
        r = self.zero
        for _ in range(m):
            r = self._add[r][self.one]
        return r

    def coerce(self, x):
        """Accept ints (as integers mod p / rationals) and fractions."""
        if self.q is None:
            return Fraction(x)
        if isinstance(x, Fraction):
            return self.div(self.from_int(x.numerator), self.from_int(x.denominator))
        return self.from_int(int(x))

    def element(self, coeffs):
        """Element with the given coefficient vector (finite fields)."""
        coeffs = tuple(c % self.p for c in coeffs)
        coeffs = coeffs + (0,) * (self.k - len(coeffs))
        return self._vecs.index(coeffs)

    def coeffs(self, a):
        return self._vecs[a]

    def elements(self):
        self._require_enumerable()
        return list(range(self.q))

    def nonzero(self):
        return [a for a in self.elements() if a != 0]

    def _require_enumerable(self):
        if self.q is None:
            raise InfiniteTransversal("the rationals cannot be enumerated")
        if self.q > ENUM_CAP:
            raise UnsupportedField(f"enumeration capped at q <= {ENUM_CAP}")

    # -- serialisation ------------------------------------------------------
    def fmt(self, a):
        if self.q is None:
            a = Fraction(a)
            return f"{a.numerator}/{a.denominator}"
        if self.k == 1:
            return str(a)
        return "[" + ",".join(map(str, self._vecs[a])) + "]"

    def parse(self, s):
        s = str(s).strip()
        if self.q is None:
            return Fraction(s)
        if s.startswith("["):
            parts = [int(t) for t in s.strip("[]").split(",") if t.strip()]
            if len(parts) != self.k or any(not 0 <= c < self.p for c in parts):
                raise FieldError(f"bad element {s!r} for {self}")
            return self._vecs.index(tuple(parts))
        # a bare integer names an element of the prime subfield
        v = int(s)
        if not 0 <= v < self.p:
            raise FieldError(f"bad element {s!r} for {self}")
        return self.from_int(v)

    @property
    def name(self):
        return "Q" if self.q is None else f"GF({self.q})"

    def __repr__(self):
        return self.name

    def __eq__(self, other):
        return (isinstance(other, FieldCtx) and self.p == other.p
                and self.k == other.k and self.modulus == other.modulus)

    def __hash__(self):
        return hash((self.p, self.k, self.modulus))

    def __reduce__(self):
        return (make_field, ({"p": self.p, "k": self.k} if self.p else {"rational": True},))


@lru_cache(maxsize=None)
def _cached(p, k):
    return FieldCtx(p, k)


def make_field(desc):
    """Build a field from ``{"rational": True}``, ``{"p":..,"k":..}``,
    ``"Q"``, ``"GF(q)"`` or an integer prime power."""
    if isinstance(desc, FieldCtx):
        return desc
    if isinstance(desc, str):
        s = desc.strip().replace(" ", "")
        if s in ("Q", "QQ"):
            return _cached(0, 1)
        m = re.fullmatch(r"(?:GF|F)\(?(\d+)\)?", s)
        if not m:
            raise UnsupportedField(f"cannot parse field {desc!r}")
        return make_field(int(m.group(1)))
    if isinstance(desc, int):
        for p in range(2, desc + 1):
            if desc % p == 0:
                break
        else:
            raise UnsupportedField(f"{desc} is not a prime power")
        k, r = 0, desc
        while r % p == 0:
            r //= p
            k += 1
        if r != 1 or not _is_prime(p):
            raise UnsupportedField(f"{desc} is not a prime power")
        return make_field({"p": p, "k": k})
    if desc.get("rational"):
        return _cached(0, 1)
    p, k = int(desc["p"]), int(desc.get("k", 1))
    if not _is_prime(p):
        raise UnsupportedField(f"{p} is not prime")
    if k > 1 and (p, k) not in BUILTIN_MODULI:
        raise UnsupportedField(f"no built-in modulus for GF({p}^{k})")
    return _cached(p, k)


def GF(q):
    return make_field(q)


QQ = make_field("Q")


# -- square classes and friends ---------------------------------------------

def squares(F):
    """The set of nonzero squares."""
    F._require_enumerable()
    return frozenset(F.mul(g, g) for g in F.nonzero())


def _is_rational_square(x):
    x = Fraction(x)
    if x < 0:
        return None
    n, d = math.isqrt(x.numerator), math.isqrt(x.denominator)
    if n * n == x.numerator and d * d == x.denominator:
        return Fraction(n, d)
    return None


def same_class(F, relation, a, b):
    """Decide ``a ~ b`` for ``relation`` in {"star", "star_plus"}.

    Returns ``(True, witness)`` or ``(False, None)``; the witness is ``g``
    with a = g^2 b (star) or ``(g, d)`` with a = g^2 b + d^2 (star_plus).
    """
    if relation == "star":
        if F.q is None:
            a, b = Fraction(a), Fraction(b)
            if a == 0 or b == 0:
                return (a == b, F.one if a == b else None)
            g = _is_rational_square(a / b)
            return (g is not None, g)
        for g in F.nonzero():
            if F.mul(F.mul(g, g), b) == a:
                return True, g
        return False, None
    if relation == "star_plus":
        if F.p != 2:
            raise FieldError("the relation ~*+ needs characteristic 2")
        F._require_enumerable()
        sq_root = {F.mul(d, d): d for d in F.elements()}
        for g in F.nonzero():
            rest = F.sub(a, F.mul(F.mul(g, g), b))
            if rest in sq_root:
                return True, (g, sq_root[rest])
        return False, None
    raise ValueError(f"unknown relation {relation!r}")


def _classes(F, relation, pool):
    reps = []
    for a in pool:
        if not any(same_class(F, relation, a, r)[0] for r in reps):
            reps.append(a)
    return reps


def square_class_transversal(F):
    """{0} together with the least member of each class of F*/(F*)^2."""
    if F.q is None:
        raise InfiniteTransversal("F/~* is infinite over Q")
    F._require_enumerable()
    return [F.zero] + _classes(F, "star", F.nonzero())


def star_plus_transversal(F):
    if F.q is None:
        raise InfiniteTransversal("~*+ is not defined over Q")
    if F.p != 2:
        raise FieldError("the relation ~*+ needs characteristic 2")
    return _classes(F, "star_plus", F.elements())


def psi_image(F):
    """psi(F) = {x^2 + x}; an additive subgroup of index 2."""
    if F.p != 2:
        raise FieldError("psi is only used in characteristic 2")
    F._require_enumerable()
    return frozenset(F.add(F.mul(x, x), x) for x in F.elements())


def omega(F):
    """The least element outside psi(F)."""
    image = psi_image(F)
    return next(a for a in F.elements() if a not in image)


def s_param(F):
    if F.q is None:
        return INFINITE
    return math.gcd(F.q - 1, 2)


def t_param(F):
    if F.p != 2:
        raise FieldError("t is only defined in characteristic 2")
    # finite fields of characteristic 2 are perfect: every element is a
    # square, so a ~*+ 0 for all a
    return 1


def normalize_star(F, a):
    """Transversal representative of the ~* class of ``a``."""
    for r in square_class_transversal(F):
        if same_class(F, "star", a, r)[0]:
            return r
    raise AssertionError("transversal does not cover F")


def normalize_star_plus(F, a):
    for r in star_plus_transversal(F):
        if same_class(F, "star_plus", a, r)[0]:
            return r
    raise AssertionError("transversal does not cover F")


def normalize_arf(F, a):
    """Reduce ``a`` into {0, omega} modulo psi(F)."""
    return F.zero if a in psi_image(F) else omega(F)
