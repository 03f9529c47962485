"""Command-line interface.

Subcommands: classify, analyze, curves, mesh, blowup, contour.  The germ is
read from a file path argument or standard input ('-').  Global flags:
--order N, --tolerance T, --format {json,csv}.

Exit codes: 0 success, 2 parse error, 3 precondition/class error,
4 numerical degeneracy.
"""

from __future__ import annotations

import argparse
import json
import sys
from concurrent.futures import ThreadPoolExecutor

from .errors import DegenerateDataError, GermParseError, PreconditionError
from .germio import parse_germ
from .normalize import classify_2jet, corank_at_origin, to_monge_form
from .parabola import asymptotic_directions, curvature_parabola, point_type
from .report import AnalysisOptions, analyze, export_curves

EXIT_OK = 0
EXIT_PARSE = 2
EXIT_PRECONDITION = 3
EXIT_DEGENERATE = 4


def _read_source(path):
    if path == "-":
        return sys.stdin.read()
    with open(path, "r", encoding="utf-8") as fh:
        return fh.read()


def _emit(payload, fmt):
    if fmt == "json":
        print(json.dumps(payload, sort_keys=True, separators=(",", ":")))
    else:  # flat key,value CSV
        print("key,value")
        for key, value in sorted(_flatten(payload)):
            print(f"{key},{value}")


def _flatten(obj, prefix=""):
    if isinstance(obj, dict):
        for k, v in obj.items():
            yield from _flatten(v, f"{prefix}{k}." if prefix else f"{k}.")
    elif isinstance(obj, (list, tuple)):
        for idx, v in enumerate(obj):
            yield from _flatten(v, f"{prefix}{idx}.")
    else:
        yield prefix.rstrip("."), repr(obj) if isinstance(obj, float) else obj


def _cmd_classify(args, options):
    germ = parse_germ(_read_source(args.germ), options.order)
    corank = corank_at_origin(germ, options.tolerance)
    if corank != 1:
        raise PreconditionError(f"classification requires corank 1, got corank {corank}")
    m = to_monge_form(germ, options.tolerance)
    cp = curvature_parabola(m, options.tolerance)
    payload = {
        "corank": corank,
        "parabola_class": classify_2jet(m, options.tolerance),
        "point_type": point_type(asymptotic_directions(cp, options.tolerance)),
    }
    _emit(payload, args.format)


def _cmd_analyze(args, options):
    if args.batch:
        lines = [ln for ln in _read_source(args.germ).splitlines() if ln.strip()]
        with ThreadPoolExecutor() as pool:
            reports = list(pool.map(lambda ln: analyze(ln, options), lines))
        for report in reports:
            print(report.to_json())
    else:
        report = analyze(_read_source(args.germ), options)
        if args.format == "json":
            print(report.to_json())
        else:
            _emit(report.to_dict(), "csv")


def _cmd_curves(args, options):
    kind = args.kind
    print(export_curves(_read_source(args.germ), kind, options,
                        samples=args.samples, t_max=args.t_max), end="")


def _cmd_mesh(args, options):
    print(export_curves(_read_source(args.germ), "mesh", options,
                        extent=args.extent, samples=args.samples), end="")


def _cmd_blowup(args, options):
    print(export_curves(_read_source(args.germ), "blowup-grid", options,
                        rs=tuple(args.r), samples=args.samples,
                        cos_margin=args.cos_margin), end="")


def _cmd_contour(args, options):
    print(export_curves(_read_source(args.germ), "contour", options,
                        phi=args.phi, samples=args.samples, u_max=args.u_max), end="")


def build_parser():
    parser = argparse.ArgumentParser(
        prog="singsurf",
        description="Second-order geometry of corank-1 singular surface germs in R^3.",
    )
    parser.add_argument("--order", type=int, default=5, help="jet truncation order (default 5)")
    parser.add_argument("--tolerance", type=float, default=None,
                        help="override the scaled degeneracy tolerance")
    parser.add_argument("--format", choices=("json", "csv"), default="json")
    sub = parser.add_subparsers(dest="command", required=True)

    def germ_arg(p):
        p.add_argument("germ", nargs="?", default="-",
                       help="germ file path, or '-' for standard input (default)")

    p = sub.add_parser("classify", help="corank, parabola class and point type")
    germ_arg(p)
    p.set_defaults(func=_cmd_classify)

    p = sub.add_parser("analyze", help="full curvature report")
    germ_arg(p)
    p.add_argument("--batch", action="store_true",
                   help="treat input as one germ per line; emit NDJSON reports")
    p.set_defaults(func=_cmd_analyze)

    p = sub.add_parser("curves", help="intersection branches or curvature parabola samples")
    germ_arg(p)
    p.add_argument("--kind", choices=("branches", "parabola"), default="branches")
    p.add_argument("--samples", type=int, default=33)
    p.add_argument("--t-max", dest="t_max", type=float, default=0.05)
    p.set_defaults(func=_cmd_curves)

    p = sub.add_parser("mesh", help="surface mesh samples")
    germ_arg(p)
    p.add_argument("--extent", type=float, default=0.5)
    p.add_argument("--samples", type=int, default=25)
    p.set_defaults(func=_cmd_mesh)

    p = sub.add_parser("blowup", help="blown-up Gaussian curvature grid")
    germ_arg(p)
    p.add_argument("--r", type=float, nargs="+", default=[1e-1, 1e-2, 1e-3])
    p.add_argument("--samples", type=int, default=13)
    p.add_argument("--cos-margin", dest="cos_margin", type=float, default=0.1)
    p.set_defaults(func=_cmd_blowup)

    p = sub.add_parser("contour", help="apparent contour of a normal projection")
    germ_arg(p)
    p.add_argument("--phi", type=float, default=1.5707963267948966)
    p.add_argument("--samples", type=int, default=41)
    p.add_argument("--u-max", dest="u_max", type=float, default=0.05)
    p.set_defaults(func=_cmd_contour)
    return parser


def _error_payload(kind, exc):
    return json.dumps({"error": {"type": kind, "message": str(exc)}})


def main(argv=None):
    args = build_parser().parse_args(argv)
    options = AnalysisOptions(order=args.order, tolerance=args.tolerance)
    try:
        args.func(args, options)
    except GermParseError as exc:
        print(_error_payload("parse-error", exc), file=sys.stderr)
        return EXIT_PARSE
    except PreconditionError as exc:
        print(_error_payload("precondition-error", exc), file=sys.stderr)
        return EXIT_PRECONDITION
    except DegenerateDataError as exc:
        print(_error_payload("numerical-degeneracy", exc), file=sys.stderr)
        return EXIT_DEGENERATE
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
