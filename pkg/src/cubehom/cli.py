"""Batch front-end: read documents, run one computation, print a report.

Exit codes: 0 on success or a passing check, 1 when validation or a
comparison fails, 2 when a document or flag cannot be parsed.
"""

import argparse
import sys

from . import formats
from .catalg import (bw_cohomology_cubical, bw_cohomology_oracle, bw_comparison,
                     category_cohomology, category_homology, cubical_nerve,
                     factorization_category, nerve_vs_bar_comparison)
from .coeff import (direct_image, extend_semicubical, is_local, pullback_system,
                    validate_functoriality)
from .cubset import product, pullback_fiber, universal_from_semicubical
from .formats import FormatError
from .homcalc import cohomology, fiber_criterion, homology, semicubical_homology


class ValidationFailure(Exception):
    """Carries the problem list of a failed validate() to the exit handler."""

    def __init__(self, problems):
        super().__init__("validation failed")
        self.problems = list(problems)


def _check(problems):
    if problems:
        raise ValidationFailure(problems)


def _load_set(path):
    X = formats.parse_cubical_set(formats.load_document(path))
    _check(X.validate())
    return X


def _load_semi(path):
    S = formats.parse_semicubical_set(formats.load_document(path))
    _check(S.validate())
    return S


def _load_map(path):
    f = formats.parse_cubical_map(formats.load_document(path))
    _check(f.validate())
    return f


def _load_category(path):
    C = formats.parse_category(formats.load_document(path))
    _check(C.validate())
    return C


def _load_diagram(path, C):
    D = formats.parse_diagram(formats.load_document(path), C)
    _check(D.validate())
    return D


def _truncation(args) -> int:
    t = args.truncate if args.truncate is not None else args.max_dim + 1
    if t < args.max_dim + 1:
        raise ValueError(f"truncation {t} is below max-dim + 1 = {args.max_dim + 1}")
    return t


def _carrier_and_system(args):
    """Resolve --set/--table plus --system into a cubes table and a system."""
    if args.set:
        if not args.system:
            raise FormatError("--set needs a --system document")
        X = _load_set(args.set)
        base = X.expand(_truncation(args))
        return base, formats.build_system(formats.load_document(args.system), base, X)
    data = formats.load_document(args.table)
    t = data.get("type")
    if t == "cubes-table":
        base = formats.parse_cubes_table(data)
        _check(base.validate())
        if not args.system:
            raise FormatError("--table with a cubes-table document needs --system")
        if args.truncate is not None:
            raise ValueError("a prebuilt table cannot be re-truncated")
        return base, formats.build_system(formats.load_document(args.system), base, None)
    if t == "table-system":
        F = formats.parse_table_system(data)
        if args.truncate is not None:
            raise ValueError("a prebuilt table cannot be re-truncated")
        if args.system:
            return F.base, formats.build_system(
                formats.load_document(args.system), F.base, None)
        _check(validate_functoriality(F))
        return F.base, F
    raise FormatError(f"--table expects a cubes-table or table-system document, "
                      f"got type {t!r}")


def _emit(args, data) -> int:
    text = formats.dumps_document(data)
    if args.out:
        with open(args.out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)
    return 0


def _print_groups(args, groups, kind) -> int:
    if args.format == "json":
        sys.stdout.write(formats.dumps_document(formats.groups_to_data(groups, kind)))
    else:
        print(formats.format_groups(groups, kind))
    return 0


def cmd_validate(args) -> int:
    problems = []
    if args.set:
        X = formats.parse_cubical_set(formats.load_document(args.set))
        problems = X.validate()
        if args.system and not problems:
            base = X.expand(args.truncate)
            F = formats.build_system(formats.load_document(args.system), base, X)
            problems = validate_functoriality(F)
    elif args.semi:
        S = formats.parse_semicubical_set(formats.load_document(args.semi))
        problems = S.validate()
        if args.system and not problems:
            F = formats.build_semicubical_system(formats.load_document(args.system), S)
            problems = F.validate()
    elif args.map:
        problems = formats.parse_cubical_map(formats.load_document(args.map)).validate()
    elif args.category:
        C = formats.parse_category(formats.load_document(args.category))
        problems = C.validate()
        if args.diagram and not problems:
            D = formats.parse_diagram(formats.load_document(args.diagram), C)
            problems = D.validate()
    else:
        T = formats.parse_cubes_table(formats.load_document(args.table))
        problems = T.validate()
        if args.system and not problems:
            F = formats.build_system(formats.load_document(args.system), T, None)
            problems = validate_functoriality(F)
    if problems:
        for p in problems:
            print(p)
        return 1
    print("ok")
    return 0


def cmd_homology(args) -> int:
    base, F = _carrier_and_system(args)
    return _print_groups(args, homology(base, F, args.max_dim, args.path), "homology")


def cmd_cohomology(args) -> int:
    base, G = _carrier_and_system(args)
    return _print_groups(args, cohomology(base, G, args.max_dim), "cohomology")


def cmd_semicubical_homology(args) -> int:
    S = _load_semi(args.semi)
    F = formats.build_semicubical_system(formats.load_document(args.system), S)
    _check(F.validate())
    return _print_groups(args, semicubical_homology(S, F, args.max_dim), "homology")


def cmd_universal(args) -> int:
    S = _load_semi(args.semi)
    return _emit(args, formats.cubical_set_to_data(universal_from_semicubical(S)))


def cmd_product(args) -> int:
    A = _load_set(args.left)
    B = _load_set(args.right)
    if args.truncate < 0:
        raise ValueError("truncation must be nonnegative")
    return _emit(args, formats.cubes_table_to_data(product(A, B, args.truncate)))


def cmd_fiber(args) -> int:
    f = _load_map(args.map)
    y = formats.resolve_cube_key(f.target, args.cube)
    fib = pullback_fiber(f, y, args.max_dim)
    return _emit(args, formats.cubes_table_to_data(fib))


def cmd_fiber_criterion(args) -> int:
    f = _load_map(args.map)
    report = fiber_criterion(f, args.max_dim, _truncation(args))
    for row in report.rows:
        if not row.ok:
            print(f"fiber over {row.key} (dim {row.dim}): "
                  f"{formats.format_groups(row.groups)}")
    print("criterion passed" if report.passed else "criterion failed")
    return 0 if report.passed else 1


def cmd_direct_image(args) -> int:
    f = _load_map(args.map)
    base = f.source.expand(args.truncate)
    F = formats.build_system(formats.load_document(args.system), base, f.source)
    return _emit(args, formats.table_system_to_data(direct_image(f, F)))


def cmd_pullback_system(args) -> int:
    f = _load_map(args.map)
    base = f.target.expand(args.truncate)
    F = formats.build_system(formats.load_document(args.system), base, f.target)
    return _emit(args, formats.table_system_to_data(pullback_system(f, F)))


def cmd_cat_homology(args) -> int:
    C = _load_category(args.category)
    D = _load_diagram(args.diagram, C)
    return _print_groups(args, category_homology(C, D, args.max_dim), "homology")


def cmd_cat_cohomology(args) -> int:
    C = _load_category(args.category)
    D = _load_diagram(args.diagram, C)
    return _print_groups(args, category_cohomology(C, D, args.max_dim), "cohomology")


def cmd_nerve(args) -> int:
    C = _load_category(args.category)
    if args.truncate < 0:
        raise ValueError("truncation must be nonnegative")
    return _emit(args, formats.cubes_table_to_data(cubical_nerve(C, args.truncate)))


def cmd_bw(args) -> int:
    C = _load_category(args.category)
    D = _load_diagram(args.diagram, factorization_category(C))
    return _print_groups(args, bw_cohomology_cubical(C, D, args.max_dim), "cohomology")


def cmd_bw_oracle(args) -> int:
    C = _load_category(args.category)
    D = _load_diagram(args.diagram, factorization_category(C))
    return _print_groups(args, bw_cohomology_oracle(C, D, args.max_dim), "cohomology")


def _need(args, contract, **flags):
    missing = [f"--{name.replace('_', '-')}" for name, wanted in flags.items()
               if wanted and getattr(args, name) is None]
    if missing:
        raise FormatError(f"contract {contract} needs {' and '.join(missing)}")


def cmd_compare(args) -> int:
    contract = args.contract
    kind = "homology"
    if contract == "dirhomol":
        _need(args, contract, map=True, system=True)
        f = _load_map(args.map)
        t = _truncation(args)
        src = f.source.expand(t)
        F = formats.build_system(formats.load_document(args.system), src, f.source)
        left = homology(src, F, args.max_dim)
        right = homology(f.target.expand(t), direct_image(f, F), args.max_dim)
        labels = ("source", "direct image")
    elif contract == "comloc":
        _need(args, contract, set=True, system=True)
        X = _load_set(args.set)
        base = X.expand(_truncation(args))
        F = formats.build_system(formats.load_document(args.system), base, X)
        if not is_local(F):
            raise ValueError("the local route needs every operator matrix unimodular")
        left = homology(base, F, args.max_dim, path="local")
        right = homology(base, F, args.max_dim, path="generic")
        labels = ("local", "generic")
    elif contract == "semicubecube":
        _need(args, contract, semi=True, system=True)
        S = _load_semi(args.semi)
        F = formats.build_semicubical_system(formats.load_document(args.system), S)
        _check(F.validate())
        left = semicubical_homology(S, F, args.max_dim)
        G = extend_semicubical(F, args.max_dim + 1)
        right = homology(G.base, G, args.max_dim)
        labels = ("semicubical", "universal")
    elif contract == "homolcatcub":
        _need(args, contract, category=True, diagram=True)
        C = _load_category(args.category)
        D = _load_diagram(args.diagram, C.op())
        report = nerve_vs_bar_comparison(C, D, args.max_dim)
        left, right = report.cubical, report.categorical
        labels = ("cubical", "categorical")
    else:
        _need(args, contract, category=True, diagram=True)
        C = _load_category(args.category)
        D = _load_diagram(args.diagram, factorization_category(C))
        report = bw_comparison(C, D, args.max_dim)
        left, right = report.cubical, report.categorical
        labels = ("cubical", "oracle")
        kind = "cohomology"
    print(f"{labels[0]}: {formats.format_groups(left, kind)}")
    print(f"{labels[1]}: {formats.format_groups(right, kind)}")
    equal = left == right
    print("equal" if equal else "unequal")
    return 0 if equal else 1


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="cubehom",
        description="Exact homology and cohomology of cubical sets, "
                    "semi-cubical sets, and finite categories.")
    sub = p.add_subparsers(dest="command", required=True)

    def groups_flags(sp):
        sp.add_argument("--max-dim", type=int, required=True,
                        help="highest degree to report")
        sp.add_argument("--format", choices=("text", "json"), default="text")

    sp = sub.add_parser("validate", help="run the invariant checks of one document")
    which = sp.add_mutually_exclusive_group(required=True)
    which.add_argument("--set")
    which.add_argument("--semi")
    which.add_argument("--map")
    which.add_argument("--category")
    which.add_argument("--table")
    sp.add_argument("--system", help="also check a coefficient system document")
    sp.add_argument("--diagram", help="also check a diagram document (with --category)")
    sp.add_argument("--truncate", type=int, default=2,
                    help="expansion depth when checking a system on --set")
    sp.set_defaults(handler=cmd_validate)

    for name, handler in (("homology", cmd_homology), ("cohomology", cmd_cohomology)):
        sp = sub.add_parser(name, help=f"{name} of a cubical set or prebuilt table")
        which = sp.add_mutually_exclusive_group(required=True)
        which.add_argument("--set")
        which.add_argument("--table")
        sp.add_argument("--system", help="coefficient system document")
        sp.add_argument("--truncate", type=int, default=None)
        groups_flags(sp)
        if name == "homology":
            sp.add_argument("--path", choices=("auto", "local", "generic"),
                            default="auto")
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("semicubical-homology",
                        help="homology of a semi-cubical set")
    sp.add_argument("--semi", required=True)
    sp.add_argument("--system", required=True)
    groups_flags(sp)
    sp.set_defaults(handler=cmd_semicubical_homology)

    sp = sub.add_parser("universal",
                        help="freely add degeneracies to a semi-cubical set")
    sp.add_argument("--semi", required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_universal)

    sp = sub.add_parser("product", help="levelwise product table of two sets")
    sp.add_argument("--left", required=True)
    sp.add_argument("--right", required=True)
    sp.add_argument("--truncate", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_product)

    sp = sub.add_parser("fiber", help="fiber of a map over one cube of the target")
    sp.add_argument("--map", required=True)
    sp.add_argument("--cube", required=True, help="cube key in the target")
    sp.add_argument("--max-dim", type=int, required=True,
                    help="truncation dimension of the fiber table")
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_fiber)

    sp = sub.add_parser("fiber-criterion",
                        help="check every fiber for point homology")
    sp.add_argument("--map", required=True)
    sp.add_argument("--max-dim", type=int, required=True)
    sp.add_argument("--truncate", type=int, default=None)
    sp.set_defaults(handler=cmd_fiber_criterion)

    sp = sub.add_parser("direct-image",
                        help="push a system forward along a map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--system", required=True)
    sp.add_argument("--truncate", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_direct_image)

    sp = sub.add_parser("pullback-system",
                        help="restrict a system on the target along a map")
    sp.add_argument("--map", required=True)
    sp.add_argument("--system", required=True)
    sp.add_argument("--truncate", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_pullback_system)

    for name, handler in (("cat-homology", cmd_cat_homology),
                          ("cat-cohomology", cmd_cat_cohomology)):
        sp = sub.add_parser(name, help=f"{name.split('-')[1]} of a finite category")
        sp.add_argument("--category", required=True)
        sp.add_argument("--diagram", required=True)
        groups_flags(sp)
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("nerve", help="cubical nerve table of a finite category")
    sp.add_argument("--category", required=True)
    sp.add_argument("--truncate", type=int, required=True)
    sp.add_argument("--out")
    sp.set_defaults(handler=cmd_nerve)

    for name, handler in (("bw", cmd_bw), ("bw-oracle", cmd_bw_oracle)):
        sp = sub.add_parser(name, help="cohomology with a natural system on the "
                                       "factorization category")
        sp.add_argument("--category", required=True)
        sp.add_argument("--diagram", required=True,
                        help="diagram document on the factorization category")
        groups_flags(sp)
        sp.set_defaults(handler=handler)

    sp = sub.add_parser("compare", help="run one comparison contract")
    sp.add_argument("--contract", required=True,
                    choices=("dirhomol", "comloc", "semicubecube",
                             "homolcatcub", "homolbwcub"))
    sp.add_argument("--set")
    sp.add_argument("--semi")
    sp.add_argument("--map")
    sp.add_argument("--category")
    sp.add_argument("--diagram")
    sp.add_argument("--system")
    sp.add_argument("--max-dim", type=int, required=True)
    sp.add_argument("--truncate", type=int, default=None)
    sp.set_defaults(handler=cmd_compare)

    return p


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.handler(args)
    except FormatError as e:
        print(f"parse error: {e}", file=sys.stderr)
        return 2
    except ValidationFailure as e:
        for problem in e.problems:
            print(problem)
        return 1
    except ValueError as e:
        print(f"error: {e}", file=sys.stderr)
        return 1


if __name__ == "__main__":
    sys.exit(main())
