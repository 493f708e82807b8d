"""Command line interface.

Subcommands: gram-space, enumerate, factor, two-squares, table, verify.
Exit codes: 0 success, 2 input error, 3 solver failure (path budget or
iteration budget exhausted), 4 verification failure.  Reports are emitted
as JSON with sorted keys, so runs with equal seeds produce byte-identical
files.
"""

import argparse
import csv
import json
import re
import sys

import numpy as np

from . import __version__
from .biform import Biform, BinaryForm, TermPoly
from .binary_sos import (
    enumerate_rank_two,
    enumerate_two_squares,
    rep_forms,
    two_squares_residual,
)
from .cones import enumerate_cone
from .enumerator import enumerate_rank, expected_counts
from .errors import (
    IterationBudgetExceeded,
    MinsosError,
    PathFailureBudgetExceeded,
)
from .factorization import FactorResult, SymMatrixPoly, factor
from .gram import Representation, build_gram_space, verify_representation
from .sampling import curve_samples, distinct_seeds, random_positive_form
from .surfaces import CONE_RNC, SCROLL, VERONESE, SurfaceSpec, cone_rnc, scroll, veronese

EXIT_OK = 0
EXIT_INPUT = 2
EXIT_SOLVER = 3
EXIT_VERIFY = 4

SOLVER_ERRORS = (PathFailureBudgetExceeded, IterationBudgetExceeded)

DEFAULT_TABLE_SURFACES = "cone_rnc(4),scroll(2,2),scroll(3,1)"

# commas inside scroll(d,e) are not list separators
_LIST_SPLIT = re.compile(r",(?![^(]*\))")

_SURFACE_RE = re.compile(
    r"^\s*(?:(scroll)\s*\(\s*(\d+)\s*,\s*(\d+)\s*\)"
    r"|(cone_rnc)\s*\(\s*(\d+)\s*\)"
    r"|(veronese))\s*$"
)


def parse_surface(text):
    m = _SURFACE_RE.match(text)
    if not m:
        raise ValueError(
            "cannot parse surface %r; use scroll(d,e), cone_rnc(d), or veronese"
            % text
        )
    if m.group(1):
        return scroll(int(m.group(2)), int(m.group(3)))
    if m.group(4):
        return cone_rnc(int(m.group(5)))
    return veronese()


def load_json(path):
    with open(path, "r", encoding="utf-8") as fh:
        return json.load(fh)


def load_form(path, as_float=False):
    """Read a form file: biform, ternary form, or binary form JSON."""
    data = load_json(path)
    if "degST" in data:
        form = Biform.from_json(data)
    elif "nvars" in data:
        form = TermPoly.from_json(data)
    elif "deg" in data or "coeffs" in data:
        form = BinaryForm.from_json(data)
    else:
        raise ValueError("unrecognized form JSON in %s" % path)
    if as_float:
        form = form.to_complex()
    return form


def write_json(path, payload):
    text = json.dumps(payload, indent=2, sort_keys=True)
    with open(path, "w", encoding="utf-8") as fh:
        fh.write(text + "\n")


def emit(args, payload):
    if getattr(args, "json_out", None):
        write_json(args.json_out, payload)
        print("report written to %s" % args.json_out)


def _fmt_theta(theta):
    return "(" + ", ".join("%+.10g" % float(v) for v in theta) + ")"


# -- commands ---------------------------------------------------------------


def cmd_gram_space(args):
    spec = parse_surface(args.surface)
    form = load_form(args.form, as_float=args.as_float)
    space = build_gram_space(form, spec)
    print("surface: %s" % spec)
    print("basis size N = %d, family dimension k = %d" % (space.size, space.kdim))
    print("basis: " + ", ".join(space.basis.label(i) for i in range(space.size)))
    emit(
        args,
        {"kind": "gramSpace", "surface": str(spec), "space": space.to_json()},
    )
    return EXIT_OK


def _dump_curve(path, form):
    if not isinstance(form, Biform):
        raise ValueError("curve samples need a biform on a scroll or cone")
    rows = curve_samples(form)
    with open(path, "w", encoding="utf-8", newline="") as fh:
        writer = csv.writer(fh)
        writer.writerow(["s", "branch", "x"])
        for s, branch, x in rows:
            writer.writerow(["%.17g" % s, branch, "%.17g" % x])
    print("curve samples written to %s (%d points)" % (path, len(rows)))


def cmd_enumerate(args):
    spec = parse_surface(args.surface)
    form = load_form(args.form, as_float=args.as_float)
    if args.dump_curve_samples:
        _dump_curve(args.dump_curve_samples, form)
    if spec.kind == CONE_RNC:
        if args.rank != 3:
            raise ValueError("cone enumeration is rank-3 only")
        report = enumerate_cone(form, spec, cluster_radius=args.cluster_radius)
        solutions_json = None
    else:
        space = build_gram_space(form, spec)
        report = enumerate_rank(
            space,
            rank=args.rank,
            seed=args.seed,
            residual_tol=args.residual_tol,
            cluster_radius=args.cluster_radius,
        )
        solutions_json = (
            report.solution_set.to_json() if report.solution_set else None
        )
    for line in report.summary_lines():
        print(line)
    for entry in report.entries:
        tag = "psd" if entry["psd"] else "indefinite"
        resid = entry.get("verify_residual")
        resid_txt = "" if resid is None else "  residual %.3e" % resid
        print(
            "%-10s theta = %s  inertia %s%s"
            % (tag, _fmt_theta(entry["theta"]), tuple(entry["inertia"]), resid_txt)
        )
    payload = {
        "kind": "enumeration",
        "surface": str(spec),
        "seed": args.seed,
        "rank": args.rank,
        "pathsParallel": args.paths_parallel,
        "form": form.to_json(),
        "report": report.to_json(),
        "solutions": solutions_json,
    }
    emit(args, payload)
    return EXIT_OK


def cmd_factor(args):
    data = load_json(args.matrix)
    A = SymMatrixPoly.from_json(data)
    result = factor(A)
    scale = max(1.0, A.max_abs_coeff())
    print(
        "factored %d x %d matrix, degree pattern %s, %d columns, rank %d"
        % (A.n, A.n, result.heights, result.ncols, result.rank)
    )
    print("residual %.3e (bound %.1e relative)" % (result.residual, args.residual_tol))
    if result.warning:
        print("warning: " + result.warning)
    for i, row in enumerate(result.rows()):
        parts = []
        for entry in row:
            coeffs = ", ".join("%.6g" % complex(c).real for c in entry.coeffs)
            parts.append("[" + coeffs + "]")
        print("row %d: %s" % (i, "  ".join(parts)))
    payload = {
        "kind": "factorization",
        "matrix": A.to_json(),
        "result": result.to_json(),
    }
    emit(args, payload)
    if result.residual > args.residual_tol * scale:
        print("FAIL: residual above bound", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_two_squares(args):
    form = load_form(args.form, as_float=args.as_float)
    if not isinstance(form, BinaryForm):
        raise ValueError("two-squares expects a binary form JSON (deg + coeffs)")
    reps = enumerate_two_squares(form)
    census = enumerate_rank_two(form)
    scale = max(1.0, float(form.max_abs_coeff()))
    print(
        "%d inequivalent two-squares representations (census: %s)"
        % (len(reps), census.counts)
    )
    rep_payload = []
    worst = 0.0
    for idx, rep in enumerate(reps):
        p, q = rep_forms(rep)
        resid = two_squares_residual(form, rep)
        worst = max(worst, resid)
        print(
            "rep %d: p = %s  q = %s  residual %.3e"
            % (
                idx,
                ["%.10g" % complex(c).real for c in p.coeffs],
                ["%.10g" % complex(c).real for c in q.coeffs],
                resid,
            )
        )
        rep_payload.append(
            {
                "representation": rep.to_json(),
                "p": [complex(c).real for c in p.coeffs],
                "q": [complex(c).real for c in q.coeffs],
                "residual": resid,
            }
        )
    payload = {
        "kind": "twoSquares",
        "form": form.to_json(),
        "count": len(reps),
        "representations": rep_payload,
        "census": census.to_json(),
    }
    emit(args, payload)
    if worst > args.residual_tol * scale:
        print("FAIL: residual above bound", file=sys.stderr)
        return EXIT_VERIFY
    return EXIT_OK


def cmd_table(args):
    names = [p for p in _LIST_SPLIT.split(args.surfaces) if p.strip()]
    specs = [parse_surface(p) for p in names]
    seeds = distinct_seeds(args.seed, 2 * len(specs))
    rows = []
    status = EXIT_OK
    for i, spec in enumerate(specs):
        form_seed, enum_seed = seeds[2 * i], seeds[2 * i + 1]
        form = random_positive_form(spec, seed=form_seed)
        if spec.kind == CONE_RNC:
            report = enumerate_cone(form, spec)
        else:
            space = build_gram_space(form, spec)
            report = enumerate_rank(space, rank=3, seed=enum_seed)
        expected = expected_counts(spec)
        got = report.counts
        flags = []
        if expected is not None:
            for key in ("psd", "real", "complex"):
                if got[key] != expected[key]:
                    flags.append("%s=%d (expected %d)" % (key, got[key], expected[key]))
        line = "%-14s psd %-4d real %-4d complex %-5d" % (
            str(spec),
            got["psd"],
            got["real"],
            got["complex"],
        )
        line += "  OK" if not flags else "  MISMATCH: " + "; ".join(flags)
        print(line)
        if report.warning:
            print("  warning: " + report.warning)
        rows.append(
            {
                "surface": str(spec),
                "formSeed": form_seed,
                "enumSeed": enum_seed,
                "counts": dict(got),
                "expected": dict(expected) if expected else None,
                "deviations": flags,
                "warning": report.warning,
            }
        )
    payload = {"kind": "table", "seed": args.seed, "rows": rows}
    emit(args, payload)
    return status


def _verify_enumeration(data, tol):
    raw = data.get("form") or {}
    if "degST" in raw:
        form = Biform.from_json(raw)
    elif "nvars" in raw:
        form = TermPoly.from_json(raw)
    else:
        raise ValueError("enumeration certificate is missing its form")
    failures = []
    checked = 0
    for idx, entry in enumerate(data["report"]["entries"]):
        rep_json = entry.get("representation")
        if rep_json is None:
            continue
        rep = Representation.from_json(rep_json)
        resid = float(verify_representation(form, rep))
        checked += 1
        scale = 1.0
        if hasattr(form, "max_abs_coeff"):
            scale = max(1.0, float(abs(form.max_abs_coeff())))
        ok = resid <= tol * scale
        if entry.get("psd") and any(s != 1 for s in rep.signs):
            ok = False
        print(
            "entry %d: residual %.3e  %s" % (idx, resid, "PASS" if ok else "FAIL")
        )
        if not ok:
            failures.append(idx)
    if checked == 0:
        print("certificate holds no representations to verify")
    return failures


def _verify_two_squares(data, tol):
    form = BinaryForm.from_json(data["form"])
    scale = max(1.0, float(abs(form.max_abs_coeff())))
    failures = []
    for idx, item in enumerate(data["representations"]):
        rep = Representation.from_json(item["representation"])
        resid = two_squares_residual(form, rep)
        ok = resid <= tol * scale
        print(
            "rep %d: residual %.3e  %s" % (idx, resid, "PASS" if ok else "FAIL")
        )
        if not ok:
            failures.append(idx)
    return failures


def _verify_factorization(data, tol):
    A = SymMatrixPoly.from_json(data["matrix"])
    result_json = data["result"]
    heights = tuple(int(h) for h in result_json["heights"])
    columns = [
        [BinaryForm.from_json(f) for f in col] for col in result_json["columns"]
    ]
    result = FactorResult(
        heights=heights,
        columns=columns,
        residual=0.0,
        rank=int(result_json["rank"]),
    )
    from .factorization import _residual

    resid = _residual(A, result)
    scale = max(1.0, A.max_abs_coeff())
    ok = resid <= tol * scale
    print("factorization residual %.3e  %s" % (resid, "PASS" if ok else "FAIL"))
    return [] if ok else [0]


def cmd_verify(args):
    data = load_json(args.certificate)
    kind = data.get("kind")
    tol = args.residual_tol
    if kind == "enumeration":
        failures = _verify_enumeration(data, tol)
    elif kind == "twoSquares":
        failures = _verify_two_squares(data, tol)
    elif kind == "factorization":
        failures = _verify_factorization(data, tol)
    else:
        raise ValueError("certificate kind %r is not verifiable" % (kind,))
    if failures:
        print("verification FAILED (%d item(s))" % len(failures), file=sys.stderr)
        return EXIT_VERIFY
    print("verification passed")
    return EXIT_OK


# -- parser -----------------------------------------------------------------


def _add_common(p, seed=True):
    if seed:
        p.add_argument("--seed", type=int, default=0, help="master seed (uint64)")
    group = p.add_mutually_exclusive_group()
    group.add_argument(
        "--exact",
        dest="as_float",
        action="store_false",
        help="keep rational input coefficients exact (default)",
    )
    group.add_argument(
        "--float",
        dest="as_float",
        action="store_true",
        help="convert input coefficients to floating point on load",
    )
    p.set_defaults(as_float=False)
    p.add_argument(
        "--residual-tol",
        type=float,
        default=1e-8,
        help="relative residual bound for filtering and verification",
    )
    p.add_argument("--json-out", metavar="PATH", help="write the full JSON report")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="minsos",
        description="Low-rank sum-of-squares certificates on surfaces of minimal degree.",
    )
    parser.add_argument("--version", action="version", version="minsos " + __version__)
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gram-space", help="build and print the Gram family of a form")
    p.add_argument("form", help="form JSON file")
    p.add_argument("--surface", required=True, help="scroll(d,e), cone_rnc(d), veronese")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_gram_space)

    p = sub.add_parser("enumerate", help="enumerate rank-r Gram matrices of a form")
    p.add_argument("form", help="form JSON file")
    p.add_argument("--surface", required=True, help="scroll(d,e), cone_rnc(d), veronese")
    p.add_argument("--rank", type=int, default=3, help="target Gram rank (default 3)")
    p.add_argument(
        "--cluster-radius",
        type=float,
        default=None,
        help="endpoint clustering radius (default 1e-6)",
    )
    p.add_argument(
        "--paths-parallel",
        type=int,
        default=1,
        metavar="N",
        help="worker count; results are merged deterministically regardless",
    )
    p.add_argument(
        "--dump-curve-samples",
        metavar="CSV",
        help="write real points of the curve f = 0 as CSV samples",
    )
    _add_common(p)
    p.set_defaults(func=cmd_enumerate)

    p = sub.add_parser("factor", help="factor a psd matrix polynomial as B B^T")
    p.add_argument("matrix", help="symmetric matrix JSON file")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_factor)

    p = sub.add_parser("two-squares", help="all two-squares representations of a binary form")
    p.add_argument("form", help="binary form JSON file")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_two_squares)

    p = sub.add_parser("table", help="reproduce the representation-count table")
    p.add_argument(
        "--surfaces",
        default=DEFAULT_TABLE_SURFACES,
        help="comma-separated surface list (veronese is opt-in; default: %(default)s)",
    )
    _add_common(p)
    p.set_defaults(func=cmd_table)

    p = sub.add_parser("verify", help="re-verify an emitted certificate file")
    p.add_argument("certificate", help="JSON report from enumerate/factor/two-squares")
    _add_common(p, seed=False)
    p.set_defaults(func=cmd_verify)

    return parser


def main(argv=None):
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except SOLVER_ERRORS as exc:
        print("solver failure: %s" % exc, file=sys.stderr)
        return EXIT_SOLVER
    except MinsosError as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT
    except (OSError, json.JSONDecodeError, ValueError, KeyError) as exc:
        print("input error: %s" % exc, file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
