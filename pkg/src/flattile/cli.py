"""Command-line interface: ``flattile <subcommand> ...``.

Exit codes: 0 success, 2 invalid input, 3 budget exceeded, 4 internal
invariant failure.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction

from .errors import FlatTileError, InvalidInput

EXIT_OK = 0
EXIT_INVALID = 2
EXIT_BUDGET = 3
EXIT_INVARIANT = 4


def _global_flags(suppress: bool = False) -> argparse.ArgumentParser:
    # subcommands repeat the flags with suppressed defaults so a value given
    # before the subcommand is not overwritten
    g = argparse.ArgumentParser(add_help=False, argument_default=argparse.SUPPRESS if suppress else None)
    d = (lambda v: argparse.SUPPRESS) if suppress else (lambda v: v)
    g.add_argument("--threads", type=int, default=d(1), help="worker processes")
    g.add_argument("--seed", type=int, default=d(0), help="seed for randomized choices")
    g.add_argument("--budget-darts", type=int, default=d(None), help="refuse searches with more darts")
    g.add_argument("--orientation", choices=("preserving", "both"), default=d("preserving"))
    g.add_argument("--format", choices=("csv", "json"), default=d(None), dest="fmt")
    return g


def build_parser() -> argparse.ArgumentParser:
    common = _global_flags()
    parser = argparse.ArgumentParser(prog="flattile", parents=[common], description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    def add(name, help_text):
        return sub.add_parser(name, parents=[_global_flags(suppress=True)], help=help_text)

    p = add("census", "count tilings with a given profile")
    p.add_argument("--kind", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--max-faces", type=int, required=True)
    p.add_argument("--no-classify", action="store_true")
    p.add_argument("--out")

    p = add("origami-count", "count square-tiled surfaces in a stratum")
    p.add_argument("--stratum", required=True, help='zero orders, e.g. "2" or "1,1"')
    p.add_argument("--max-squares", type=int, required=True)
    p.add_argument("--brute-force", action="store_true")
    p.add_argument("--out")

    p = add("cover", "build the canonical cyclic cover of a tiling")
    p.add_argument("--in", dest="infile", required=True)
    p.add_argument("--out")

    p = add("classify", "fill the per-k columns of a census CSV")
    p.add_argument("--census", required=True)
    p.add_argument("--out")

    p = add("lattice-count", "count lattice points in a cone slice")
    p.add_argument("--subspace", required=True)
    p.add_argument("--s", required=True)
    p.add_argument("--box", type=float)
    p.add_argument("--out")

    p = add("verify-volume-forms", "check the local volume-form identities")
    p.add_argument("--p", type=int, required=True)
    p.add_argument("--q", type=int, required=True)
    p.add_argument("--points", type=int, default=100)
    p.add_argument("--method", choices=("closed", "fd"), default="closed")
    p.add_argument("--out")

    p = add("fit", "fit the growth exponent of a census")
    p.add_argument("--census", required=True)
    p.add_argument("--k", type=int, default=1, help="holonomy order used for normalization")
    p.add_argument("--column", default="total", help='"total" or a k value')
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.add_argument("--q-max", type=int, default=10**6)
    p.add_argument("--out")

    p = add("report", "census, classification, cover checks, fit and recognition")
    p.add_argument("--kind", required=True)
    p.add_argument("--profile", required=True)
    p.add_argument("--max-faces", type=int, required=True)
    p.add_argument("--tail-fraction", type=float, default=0.5)
    p.add_argument("--q-max", type=int, default=10**6)
    p.add_argument("--out-prefix")
    return parser


def _opt(args, name, default=None):
    return getattr(args, name, default)


def _emit(text: str, out: str | None) -> None:
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text if text.endswith("\n") else text + "\n")
    else:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")


def _budget(args) -> int:
    from .enumeration import DEFAULT_BUDGET_DARTS

    return args.budget_darts if args.budget_darts is not None else DEFAULT_BUDGET_DARTS


def _census_json(rec) -> str:
    return json.dumps(
        {
            "kind": rec.kind,
            "profile": list(rec.profile),
            "orientation": rec.orientation,
            "rows": [
                {"m": r.m, "count_total": r.total, "per_k": {str(k): v for k, v in r.per_k.items()}}
                for r in rec.rows
            ],
        },
        indent=2,
    )


def cmd_census(args) -> int:
    from .cmap import parse_profile
    from .enumeration import census

    rec = census(
        args.kind,
        parse_profile(args.profile),
        args.max_faces,
        orientation=args.orientation,
        workers=args.threads,
        budget_darts=_budget(args),
        classify=not _opt(args, "no_classify", False),
    )
    _emit(_census_json(rec) if args.fmt == "json" else rec.to_csv(), _opt(args, "out"))
    return EXIT_OK


def cmd_origami(args) -> int:
    from .enumeration import StratumSignature, brute_force_square_tiled, count_square_tiled

    orders = tuple(int(x) for x in args.stratum.replace(" ", "").split(",") if x)
    stratum = StratumSignature(orders)
    count_fn = brute_force_square_tiled if _opt(args, "brute_force", False) else count_square_tiled
    rows = [(m, count_fn(stratum, m)) for m in range(1, args.max_squares + 1)]
    if args.fmt == "json":
        text = json.dumps(
            {"stratum": list(stratum.k_vector), "counts": [{"m": m, "count": c} for m, c in rows]},
            indent=2,
        )
    else:
        text = "stratum,m,count\n" + "".join(
            f"\"{','.join(map(str, stratum.k_vector))}\",{m},{c}\n" for m, c in rows
        )
    _emit(text, _opt(args, "out"))
    return EXIT_OK


def cmd_cover(args) -> int:
    from .cmap import load_tiling
    from .cover import build_cover, check_cover, holonomy, verify_periods
    from .errors import InternalInconsistency

    tiling = load_tiling(args.infile)
    cov = build_cover(tiling, holonomy(tiling, seed=args.seed))
    check_cover(cov)
    if not verify_periods(cov):
        raise InternalInconsistency("cover periods are not in the lattice")
    _emit(json.dumps(cov.to_dict()), _opt(args, "out"))
    return EXIT_OK


def cmd_classify(args) -> int:
    from .cover import classify_census
    from .enumeration import CensusRecord, enumerate_tilings

    with open(args.census, encoding="utf-8") as fh:
        rec = CensusRecord.from_csv(fh.read())
    m_max = max(r.m for r in rec.rows)
    tilings = enumerate_tilings(
        rec.kind, rec.profile, m_max, orientation=args.orientation, workers=args.threads,
        budget_darts=_budget(args),
    )
    for row in rec.rows:
        if sum(1 for t in tilings if t.num_faces <= row.m) != row.total:
            raise InvalidInput(f"census total at m={row.m} does not match a fresh enumeration")
    rec.orientation = args.orientation
    rec = classify_census(rec, tilings)
    _emit(_census_json(rec) if args.fmt == "json" else rec.to_csv(), _opt(args, "out"))
    return EXIT_OK


def cmd_lattice(args) -> int:
    from .lattice import INF, count_cone_points, intersect_lattice, load_subspace

    V, h = load_subspace(args.subspace)
    lat = intersect_lattice(V)
    R = INF if _opt(args, "box") is None else args.box
    s = Fraction(args.s)
    count = count_cone_points(lat, h, s, R, workers=args.threads)
    result = {
        "lattice": V.lattice_kind,
        "ambient": V.ambient,
        "dim": V.dim,
        "s": str(s),
        "box": None if R == INF else R,
        "count": count,
        "count_over_s_d": count / float(s) ** V.dim,
    }
    if args.fmt == "csv":
        text = "lattice,ambient,dim,s,box,count\n" + (
            f"{V.lattice_kind},{V.ambient},{V.dim},{s},{result['box'] or ''},{count}\n"
        )
    else:
        text = json.dumps(result, indent=2)
    _emit(text, _opt(args, "out"))
    return EXIT_OK


def cmd_volume(args) -> int:
    from .volume import density_report

    rep = density_report(args.p, args.q, args.points, args.seed, _opt(args, "method", "closed"))
    _emit(json.dumps(rep.to_dict()), _opt(args, "out"))
    sys.stderr.write(
        f"max relative deviation from {rep.expected_constant:.12g}: {rep.max_relative_deviation:.3e}\n"
    )
    return EXIT_OK


def cmd_fit(args) -> int:
    from .asymptotics import RECOGNITION_WARNING, fit_growth
    from .enumeration import CensusRecord, profile_genus

    with open(args.census, encoding="utf-8") as fh:
        rec = CensusRecord.from_csv(fh.read())
    column = _opt(args, "column", "total")
    k = _opt(args, "k", 1)
    if column == "total":
        pts = rec.counts()
    else:
        k = int(column)
        pts = [(r.m, r.per_k.get(k, 0)) for r in rec.rows]
    fit = fit_growth(
        pts,
        profile_genus(rec.kind, rec.profile),
        len(rec.profile),
        kind=rec.kind,
        k=k,
        tail_fraction=_opt(args, "tail_fraction", 0.5),
        q_max=_opt(args, "q_max", 10**6),
    )
    out = fit.to_dict()
    out["warning"] = RECOGNITION_WARNING
    if args.fmt == "csv":
        text = "D_expected,slope,constant_raw,constant_normalized,area_factor,k\n" + (
            f"{fit.D_expected},{fit.slope_estimate},{fit.constant_raw},"
            f"{fit.constant_estimate},{fit.normalization},{fit.k}\n"
        )
    else:
        text = json.dumps(out, indent=2)
    _emit(text, _opt(args, "out"))
    sys.stderr.write(
        f"slope {fit.slope_estimate:.4f} (expected {fit.D_expected}); raw constant "
        f"{fit.constant_raw:.6g}; area factor {fit.normalization:.6g} per face\n"
    )
    return EXIT_OK


def cmd_report(args) -> int:
    from .asymptotics import ReportOptions, end_to_end_report
    from .cmap import parse_profile

    opts = ReportOptions(
        orientation=args.orientation,
        workers=args.threads,
        budget_darts=args.budget_darts,
        seed=args.seed,
        q_max=_opt(args, "q_max", 10**6),
        tail_fraction=_opt(args, "tail_fraction", 0.5),
    )
    bundle = end_to_end_report(args.kind, parse_profile(args.profile), args.max_faces, opts)
    prefix = _opt(args, "out_prefix")
    if prefix:
        _emit(bundle.to_csv(), prefix + ".csv")
        _emit(bundle.to_json(), prefix + ".json")
    else:
        _emit(bundle.to_csv() if args.fmt == "csv" else bundle.to_json(), None)
    for failure in bundle.invariant_failures:
        sys.stderr.write(f"[canonical_cover] {failure}\n")
    return bundle.exit_code


COMMANDS = {
    "census": cmd_census,
    "origami-count": cmd_origami,
    "cover": cmd_cover,
    "classify": cmd_classify,
    "lattice-count": cmd_lattice,
    "verify-volume-forms": cmd_volume,
    "fit": cmd_fit,
    "report": cmd_report,
}


VALUE_FLAGS = ("--profile", "--stratum", "--s")


def _attach_negative_values(argv: list[str]) -> list[str]:
    # "--profile -3,-3" would otherwise read "-3,-3" as an option
    out = []
    i = 0
    while i < len(argv):
        tok = argv[i]
        if tok in VALUE_FLAGS and i + 1 < len(argv) and argv[i + 1].startswith("-"):
            out.append(f"{tok}={argv[i + 1]}")
            i += 2
            continue
        out.append(tok)
        i += 1
    return out


def main(argv=None) -> int:
    parser = build_parser()
    argv = _attach_negative_values(list(sys.argv[1:] if argv is None else argv))
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INVALID
    if args.threads < 1:
        sys.stderr.write("error: --threads must be positive\n")
        return EXIT_INVALID
    try:
        return COMMANDS[args.command](args)
    except FlatTileError as exc:
        sys.stderr.write(f"error: {exc}\n")
        return exc.exit_code
    except (ValueError, KeyError, OSError, json.JSONDecodeError, ZeroDivisionError) as exc:
        sys.stderr.write(f"error: invalid input: {exc}\n")
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
