"""Batch command-line front end over JSON files.

Subcommands: moments, jacobi, orthonormalize, freeproduct, paths, verify.
Exit codes: 0 success, 1 validation or numerical failure, 2 usage or input
format error.  Report lines are prefixed "ok:" or "FAIL:" for scripting.
"""

from __future__ import annotations

import argparse
import json
import sys

from . import freeproduct as fp
from . import jsonio
from .functional import (
    DEFAULT_POSITIVITY_TOL,
    MomentFunctional,
    NotStrictlyPositiveError,
    hankel_check,
    kernel_table,
)
from .jacobi import DEFAULT_VALIDATE_TOL, favard_moments, validate
from .orthopoly import orthonormalize
from .paths import (
    enumerate_paths,
    jacobi_from_moments,
    moments_from_paths,
    motzkin_number,
    path_weight,
)
from .words import Word, enumerate_words


class CliFailure(Exception):
    """Abort with a diagnostic; carries the exit code."""

    def __init__(self, message: str, code: int):
        super().__init__(message)
        self.code = code


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="ncjacobi",
        description=(
            "moment tables, block Jacobi coefficient families, orthonormal "
            "polynomials, and weighted lattice paths in non-commuting variables"
        ),
    )
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("moments", help="family JSON -> moment table JSON")
    p.add_argument("--family", required=True, help="input family file")
    p.add_argument("--max-degree", type=int, required=True, help="table degree bound")
    p.add_argument("--out", required=True, help="output moment file")
    p.add_argument(
        "--engine",
        choices=("paths", "operator"),
        default="paths",
        help="weighted path sums or operator corner entries (default paths)",
    )
    p.add_argument("--tolerance", type=float, default=None)

    p = sub.add_parser("jacobi", help="moment table JSON -> family JSON")
    p.add_argument("--moments", required=True, help="input moment file")
    p.add_argument("--depth", type=int, required=True, help="levels to recover")
    p.add_argument("--out", required=True, help="output family file")
    p.add_argument("--tolerance", type=float, default=None)

    p = sub.add_parser("orthonormalize", help="moment table JSON -> basis JSON")
    p.add_argument("--moments", required=True, help="input moment file")
    p.add_argument("--depth", type=int, required=True, help="orthonormalization depth")
    p.add_argument("--out", required=True, help="output basis file")
    p.add_argument("--tolerance", type=float, default=None)

    p = sub.add_parser("freeproduct", help="one-variable recurrences -> family JSON")
    p.add_argument(
        "--spec",
        required=True,
        help="comma-separated kinds, e.g. hermite,chebyshev_t,laguerre(0.5) "
        "or custom:file.json",
    )
    p.add_argument("--depth", type=int, required=True)
    p.add_argument("--out", required=True, help="output family file")
    p.add_argument("--basis", default=None, help="optionally write the product basis here")

    p = sub.add_parser("paths", help="word -> path list / count")
    p.add_argument("--word", required=True, help="comma-separated letters, e.g. 1,2,1")
    p.add_argument("--alphabet", type=int, default=None, help="default: largest letter")
    p.add_argument("--count-only", action="store_true", help="print the count only")
    p.add_argument(
        "--family", default=None, help="family file: also report per-path weights"
    )
    p.add_argument("--out", default=None, help="optional JSON output file")

    p = sub.add_parser("verify", help="validation / positivity report")
    p.add_argument("--family", default=None, help="family file to validate")
    p.add_argument("--moments", default=None, help="moment file to validate")
    p.add_argument("--depth", type=int, default=None, help="positivity depth (moments)")
    p.add_argument("--tolerance", type=float, default=None)

    return parser


def _load_family(path: str):
    try:
        return jsonio.load_family(path)
    except FileNotFoundError as exc:
        raise CliFailure(f"error: cannot read {path}: {exc}", 2) from exc
    except json.JSONDecodeError as exc:
        raise CliFailure(f"error: {path} is not valid JSON: {exc}", 2) from exc
    except jsonio.SchemaError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc


def _load_moments(path: str):
    try:
        return jsonio.load_moments(path)
    except FileNotFoundError as exc:
        raise CliFailure(f"error: cannot read {path}: {exc}", 2) from exc
    except json.JSONDecodeError as exc:
        raise CliFailure(f"error: {path} is not valid JSON: {exc}", 2) from exc
    except jsonio.SchemaError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc


def _require_admissible(family, path: str, tol: float | None):
    report = validate(family, tol=tol if tol is not None else DEFAULT_VALIDATE_TOL)
    if not report.ok:
        raise CliFailure(
            f"FAIL: family {path}: {report.violations[0]}"
            + (f" (+{len(report.violations) - 1} more)" if len(report.violations) > 1 else ""),
            1,
        )


def cmd_moments(args) -> int:
    family = _load_family(args.family)
    if args.max_degree < 0:
        raise CliFailure("error: --max-degree must be >= 0", 2)
    _require_admissible(family, args.family, args.tolerance)
    tol = args.tolerance if args.tolerance is not None else DEFAULT_POSITIVITY_TOL
    try:
        if args.engine == "operator":
            phi = favard_moments(family, args.max_degree, tol=tol)
        else:
            table = {}
            for n in range(0, 2 * args.max_degree + 2):
                for w in enumerate_words(family.alphabet, n):
                    if w in table:
                        continue
                    val = moments_from_paths(family, w)
                    table[w] = val
                    table[w.involute()] = val
            phi = MomentFunctional(family.alphabet, args.max_degree, table)
            if not phi.is_strictly_positive(args.max_degree, tol=tol):
                raise NotStrictlyPositiveError(
                    f"moment table of {args.family} failed strict positivity"
                )
    except (ValueError, NotStrictlyPositiveError) as exc:
        raise CliFailure(f"FAIL: {exc}", 1) from exc
    jsonio.save_moments(args.out, phi)
    count = len(phi.to_json_obj()["moments"])
    print(
        f"ok: wrote {count} moments of degree <= {args.max_degree} "
        f"(words up to length {phi.word_bound}) to {args.out}"
    )
    return 0


def cmd_jacobi(args) -> int:
    phi = _load_moments(args.moments)
    if args.depth < 0:
        raise CliFailure("error: --depth must be >= 0", 2)
    try:
        family = jacobi_from_moments(
            phi,
            args.depth,
            tol=args.tolerance if args.tolerance is not None else DEFAULT_POSITIVITY_TOL,
        )
    except NotStrictlyPositiveError as exc:
        raise CliFailure(f"FAIL: {exc}", 1) from exc
    except ValueError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc
    jsonio.save_family(args.out, family)
    print(f"ok: recovered depth-{args.depth} family from {args.moments} to {args.out}")
    return 0


def cmd_orthonormalize(args) -> int:
    phi = _load_moments(args.moments)
    if args.depth < 0:
        raise CliFailure("error: --depth must be >= 0", 2)
    if args.depth > phi.max_degree:
        raise CliFailure(
            f"error: depth {args.depth} exceeds table degree {phi.max_degree}", 2
        )
    try:
        basis = orthonormalize(
            phi,
            args.depth,
            tol=args.tolerance if args.tolerance is not None else DEFAULT_POSITIVITY_TOL,
        )
    except NotStrictlyPositiveError as exc:
        raise CliFailure(f"FAIL: {exc}", 1) from exc
    jsonio.write_json(args.out, basis.to_json_obj())
    print(f"ok: wrote {len(basis.words)} orthonormal polynomials to {args.out}")
    return 0


def cmd_freeproduct(args) -> int:
    if args.depth < 0:
        raise CliFailure("error: --depth must be >= 0", 2)
    try:
        recurrences = fp.parse_recurrence_spec(args.spec, max(args.depth, 1))
        family = fp.build(recurrences, args.depth)
    except FileNotFoundError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc
    except (ValueError, KeyError, json.JSONDecodeError) as exc:
        raise CliFailure(f"error: bad recurrence spec {args.spec!r}: {exc}", 2) from exc
    jsonio.save_family(args.out, family)
    labels = ",".join(rec.label for rec in recurrences)
    print(f"ok: wrote depth-{args.depth} family for {labels} to {args.out}")
    if args.basis is not None:
        words = [
            w
            for n in range(args.depth + 1)
            for w in enumerate_words(family.alphabet, n)
        ]
        obj = {
            "N": family.alphabet,
            "depth": args.depth,
            "basis": [
                {
                    "word": list(w.letters),
                    "terms": fp.product_polynomial(recurrences, w).to_json_obj(),
                }
                for w in words
            ],
        }
        jsonio.write_json(args.basis, obj)
        print(f"ok: wrote {len(words)} product polynomials to {args.basis}")
    return 0


def cmd_paths(args) -> int:
    try:
        letters = tuple(int(tok) for tok in args.word.split(",") if tok.strip())
    except ValueError as exc:
        raise CliFailure(f"error: cannot parse word {args.word!r}: {exc}", 2) from exc
    if not letters:
        raise CliFailure("error: word must be nonempty", 2)
    alphabet = args.alphabet if args.alphabet is not None else max(letters)
    try:
        word = Word(letters, alphabet)
    except ValueError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc
    count = motzkin_number(len(word))
    if args.count_only:
        print(count)
        return 0
    try:
        paths = enumerate_paths(word)
    except ValueError as exc:
        raise CliFailure(f"error: {exc}", 2) from exc
    obj = {
        "word": list(word.letters),
        "count": count,
        "paths": [p.to_json_obj() for p in paths],
    }
    if args.family is not None:
        family = _load_family(args.family)
        try:
            weights = [path_weight(family, p) for p in paths]
        except (ValueError, KeyError) as exc:
            raise CliFailure(f"FAIL: cannot weigh paths against {args.family}: {exc}", 1) from exc
        obj["weights"] = weights
        print(f"ok: weight sum {sum(weights):.15g} over {count} paths")
    if args.out is not None:
        jsonio.write_json(args.out, obj)
        print(f"ok: wrote {count} paths to {args.out}")
    else:
        json.dump(obj, sys.stdout, indent=1)
        print()
    return 0


def cmd_verify(args) -> int:
    if (args.family is None) == (args.moments is None):
        raise CliFailure("error: verify needs exactly one of --family / --moments", 2)
    failures = 0
    if args.family is not None:
        family = _load_family(args.family)
        tol = args.tolerance if args.tolerance is not None else DEFAULT_VALIDATE_TOL
        report = validate(family, tol=tol)
        if report.ok:
            print(
                f"ok: family {args.family} admissible "
                f"(N={family.alphabet}, depth={family.depth})"
            )
        else:
            for violation in report.violations:
                print(f"FAIL: family {args.family}: {violation}")
            failures += len(report.violations)
    else:
        phi = _load_moments(args.moments)
        print(f"ok: moment table unital and reversal-symmetric (loaded {args.moments})")
        check_depth = min(phi.word_bound, 4)
        table = kernel_table(phi, check_depth)
        hreport = hankel_check(table, phi.alphabet, check_depth)
        if hreport.ok:
            print(f"ok: kernel passes the shift invariance check to depth {check_depth}")
        else:
            print(
                f"FAIL: kernel violates shift invariance at "
                f"{len(hreport.violations)} triples"
            )
            failures += 1
        depth = args.depth if args.depth is not None else phi.max_degree
        if depth > phi.max_degree:
            raise CliFailure(
                f"error: --depth {depth} exceeds table degree {phi.max_degree}", 2
            )
        tol = args.tolerance if args.tolerance is not None else DEFAULT_POSITIVITY_TOL
        report = phi.gram(depth, tol=tol)
        if report.positive:
            print(
                f"ok: strictly positive at degree {depth} "
                f"(min Gram pivot {report.min_pivot:.6g})"
            )
        else:
            print(
                f"FAIL: not strictly positive at degree {depth} "
                f"(Gram pivot {report.pivots[-1]:.6g} <= {tol:g})"
            )
            failures += 1
    return 1 if failures else 0


COMMANDS = {
    "moments": cmd_moments,
    "jacobi": cmd_jacobi,
    "orthonormalize": cmd_orthonormalize,
    "freeproduct": cmd_freeproduct,
    "paths": cmd_paths,
    "verify": cmd_verify,
}


def main(argv: list[str] | None = None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    tolerance = getattr(args, "tolerance", None)
    if tolerance is not None and tolerance <= 0:
        print("error: --tolerance must be > 0", file=sys.stderr)
        return 2
    try:
        return COMMANDS[args.command](args)
    except CliFailure as exc:
        stream = sys.stderr if exc.code == 2 else sys.stdout
        print(str(exc), file=stream)
        return exc.code


def entry() -> None:
    raise SystemExit(main())


if __name__ == "__main__":
    entry()
