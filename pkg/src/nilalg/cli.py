"""Command-line interface.

    nilalg classify --dim 6 --field "GF(2)" [--json]
    nilalg identify algebra.json [--witness]
    nilalg descendants --parent L5_8 --field "GF(3)" --step 1
    nilalg klein --field "GF(2)"
    nilalg verify --field "GF(2)" --level full

Exit codes: 0 ok, 1 verification failure, 2 unsupported field, 3 outside
what can be computed (dim 6 over Q, identification over large fields),
4 not nilpotent, 5 malformed input file.
"""
import argparse
import json
import sys

from .field import make_field, FieldError, UnsupportedField, InfiniteTransversal
from .linalg import BudgetExceeded
from .liealg import LieAlgebra, LieError, NotNilpotent, format_table
from . import catalog

EXIT_FAIL, EXIT_FIELD, EXIT_UNSUPPORTED, EXIT_NOT_NILPOTENT, EXIT_MALFORMED = 1, 2, 3, 4, 5


class MalformedFile(ValueError):
    pass


class _Exit(Exception):
    def __init__(self, code):
        self.code = code


def load_algebra(doc):
    """AlgebraFile document -> LieAlgebra (indices are 1-based)."""
    try:
        dim = int(doc["dim"])
        F = make_field(doc["field"])
        brackets = doc["brackets"]
    except (KeyError, TypeError, ValueError) as e:
        if isinstance(e, FieldError):
            raise
        raise MalformedFile(f"missing or bad field: {e}")
    if dim < 1:
        raise MalformedFile("dim must be positive")
    seen = set()
    table = {}
    for b in brackets:
        try:
            i, j, k = int(b["i"]), int(b["j"]), int(b["k"])
            c = F.parse(b.get("c", "1"))
        except (KeyError, TypeError, ValueError) as e:
            raise MalformedFile(f"bad bracket entry {b!r}: {e}")
        if not (1 <= i < j <= dim and 1 <= k <= dim):
            raise MalformedFile(f"indices out of range in {b!r}")
        if (i, j, k) in seen:
            raise MalformedFile(f"duplicate bracket entry {(i, j, k)}")
        seen.add((i, j, k))
        v = list(table.get((i - 1, j - 1), [F.zero] * dim))
        v[k - 1] = c
        table[(i - 1, j - 1)] = v
    try:
        return LieAlgebra(F, dim, table, check=True)
    except LieError as e:
        raise MalformedFile(f"not a Lie algebra: {e}")


def algebra_doc(L):
    return {"dim": L.dim, "field": L.F.name, "brackets": catalog.brackets_of(L)}


def _field(name):
    try:
        return make_field(name)
    except FieldError as e:
        print(f"error: {e}", file=sys.stderr)
        raise _Exit(EXIT_FIELD)


def cmd_classify(args):
    F = _field(args.field)
    if args.dim == 6 and not F.is_finite:
        print("dimension 6 over Q contains infinite families:", file=sys.stderr)
        for fam in catalog.symbolic_families():
            print("  " + fam, file=sys.stderr)
        return EXIT_UNSUPPORTED
    try:
        if args.json:
            print(catalog.export_json(args.dim, F))
            return 0
        rows = catalog.list_catalog(args.dim, F)
    except (UnsupportedField, InfiniteTransversal) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FIELD
    except catalog.CatalogError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    for aid, L in rows:
        alias = catalog.traditional_name(aid)
        label = str(aid) if alias == aid.family else f"{aid} ({alias})"
        print(f"{label:28s} {format_table(L)}")
    print(f"{len(rows)} algebras of dimension {args.dim} over {F.name}")
    return 0


def cmd_identify(args):
    try:
        with open(args.file) as fh:
            doc = json.load(fh)
        K = load_algebra(doc)
    except UnsupportedField as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_FIELD
    except (OSError, json.JSONDecodeError, MalformedFile, FieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    try:
        res = catalog.identify(K, witness=True)
    except NotNilpotent as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_NOT_NILPOTENT
    except BudgetExceeded as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except catalog.CatalogError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    if isinstance(res, catalog.Partial):
        print("full identification needs a finite field; candidates:", file=sys.stderr)
        for c in res.candidates:
            print("  " + c, file=sys.stderr)
        return EXIT_UNSUPPORTED
    aid, X = res
    print(aid)
    if args.witness:
        for row in X.data:
            print(" ".join(K.F.fmt(a) for a in row))
    return 0


def cmd_descendants(args):
    F = _field(args.field)
    try:
        r = catalog.cross_validate(args.parent, F, args.step)
    except (InfiniteTransversal, BudgetExceeded) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    except catalog.CatalogError as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_MALFORMED
    print(f"parent {r.parent}, step {r.s}, over {F.name}")
    for aid, oi, ok in r.matches:
        print(f"  {str(aid):16s} orbit {oi:4d} {'allowable' if ok else 'NOT ALLOWABLE'}")
    print(f"listed {r.claimed}, computed allowable orbits {r.computed}: "
          f"{'match' if r.ok else 'MISMATCH'}")
    return 0 if r.ok else EXIT_FAIL


def cmd_klein(args):
    from .forms import verify_klein
    F = _field(args.field)
    try:
        r = verify_klein(F)
    except (BudgetExceeded, FieldError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_UNSUPPORTED
    print(f"{r['subspaces']} two-dimensional subspaces, {r['orbits']} orbits")
    for label, oi in r["orbit_of_rep"].items():
        print(f"  {label:24s} orbit {oi} (size {r['sizes'][oi]})")
    print("all matched" if r["ok"] else "MISMATCH")
    return 0 if r["ok"] else EXIT_FAIL


def cmd_verify(args):
    from . import verify
    F = _field(args.field)
    if not F.is_finite:
        print("error: verification runs over finite fields", file=sys.stderr)
        return EXIT_UNSUPPORTED
    results = verify.run(F, args.level, seed=args.seed)
    for name, ok, detail, secs in results:
        print(f"{'PASS' if ok else 'FAIL'}  {name:12s} {detail}  ({secs:.1f}s)")
    fails = sum(not ok for _, ok, _, _ in results)
    print(f"{len(results) - fails}/{len(results)} passed")
    return EXIT_FAIL if fails else 0


def build_parser():
    p = argparse.ArgumentParser(prog="nilalg",
                                description="Nilpotent Lie algebras of dimension at most 6.")
    p.add_argument("--seed", type=int, default=0)
    sub = p.add_subparsers(dest="cmd", required=True)

    c = sub.add_parser("classify", help="list the algebras of a given dimension")
    c.add_argument("--dim", type=int, required=True)
    c.add_argument("--field", required=True)
    c.add_argument("--json", action="store_true")
    c.set_defaults(func=cmd_classify)

    c = sub.add_parser("identify", help="identify an algebra given as a JSON file")
    c.add_argument("file")
    c.add_argument("--witness", action="store_true")
    c.set_defaults(func=cmd_identify)

    c = sub.add_parser("descendants", help="compare listed and computed descendants")
    c.add_argument("--parent", required=True)
    c.add_argument("--field", required=True)
    c.add_argument("--step", type=int, required=True)
    c.set_defaults(func=cmd_descendants)

    c = sub.add_parser("klein", help="orbits of GL(4) on 2-subspaces of the exterior square")
    c.add_argument("--field", required=True)
    c.set_defaults(func=cmd_klein)

    c = sub.add_parser("verify", help="run the self-checks")
    c.add_argument("--field", required=True)
    c.add_argument("--level", choices=("quick", "full"), default="quick")
    c.set_defaults(func=cmd_verify)
    for sp in sub.choices.values():
        sp.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    return p


def main(argv=None):
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except _Exit as e:
        return e.code


if __name__ == "__main__":
    sys.exit(main())
