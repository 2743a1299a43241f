"""Command-line interface: ``selfaffine <subcommand> [flags]``.

Exit codes: 0 success or pass, 1 usage error or unsupported input,
2 condition fails, 3 condition inconclusive, 4 enumeration budget exceeded.
"""

import argparse
import json
import sys

from . import carpets, conditions, covers, dimension, estimators, export
from .errors import BudgetExceededError, InvalidInputError
from .ifs import bounding_radius, dumps_ifs, load_ifs

EXIT_OK, EXIT_USAGE, EXIT_FAIL, EXIT_INCONCLUSIVE, EXIT_BUDGET = 0, 1, 2, 3, 4
VERDICT_EXIT = {conditions.PASS: EXIT_OK, conditions.FAIL: EXIT_FAIL, conditions.INCONCLUSIVE: EXIT_INCONCLUSIVE}
# slack allowed to a sampled box-count slope in the inequality chain
ESTIMATOR_SLACK = 0.05


class UsageError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        raise UsageError(message)


def _scales(text):
    try:
        j0, j1 = (int(v) for v in text.split(".."))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected j0..j1, got {text!r}") from None
    if not 0 <= j0 < j1 or j1 - j0 < 2:
        raise argparse.ArgumentTypeError("need 0 <= j0 and at least 3 scales")
    return j0, j1


def _rect(text):
    try:
        vals = tuple(float(v) for v in text.split(","))
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected x0,y0,x1,y1, got {text!r}") from None
    if len(vals) != 4:
        raise argparse.ArgumentTypeError(f"expected 4 numbers, got {len(vals)}")
    return vals


def _int_list(text):
    try:
        vals = [int(v) for v in text.split(",")]
    except ValueError:
        raise argparse.ArgumentTypeError(f"expected comma-separated integers, got {text!r}") from None
    if any(v < 1 for v in vals):
        raise argparse.ArgumentTypeError("depths must be positive")
    return vals


def _seed(text):
    v = int(text)
    if not 0 <= v < 2**64:
        raise argparse.ArgumentTypeError("seed must be an unsigned 64-bit integer")
    return v


def _positive_int(text):
    v = int(text)
    if v < 1:
        raise argparse.ArgumentTypeError("must be a positive integer")
    return v


def build_parser():
    parser = _Parser(prog="selfaffine", description="Dimensions of self-affine sets.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def common(p, seed=True):
        src = p.add_mutually_exclusive_group(required=True)
        src.add_argument("--ifs", help="IFS definition JSON")
        src.add_argument("--carpet", help="carpet definition JSON")
        if seed:
            p.add_argument("--seed", type=_seed, default=0)
        p.add_argument("--out", help="output path (default: stdout where text)")

    p = sub.add_parser("dims", help="dimension report")
    common(p)
    p.add_argument("--depth", type=_positive_int, default=6, help="largest pressure depth")
    p.add_argument("--depths", type=_int_list, help="explicit comma-separated depths")
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--scales", type=_scales, default=(3, 8), help="dyadic exponents j0..j1")
    p.add_argument("--tol", type=float, default=1e-10)
    p.add_argument("--json", action="store_true", help="machine-readable report")
    p.add_argument("--pressure-out", help="CSV of P_n(s) at the largest depth")
    p.add_argument("--boxcount-out", help="CSV of box counts")

    p = sub.add_parser("render", help="P6 raster of a chaos-game cloud")
    common(p)
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--width", type=_positive_int, default=512)
    p.add_argument("--height", type=_positive_int, default=512)
    p.add_argument("--cover-delta", type=float, help="overlay cylinder ellipses of Z(delta)")

    p = sub.add_parser("cover", help="CSV of the Z(delta) ellipse cover")
    common(p, seed=False)
    p.add_argument("--delta", type=float, required=True)
    p.add_argument("--ball-radius", type=float, help="also cover each ellipse by balls of this radius")

    p = sub.add_parser("points", help="sample the attractor")
    common(p)
    p.add_argument("--mode", choices=("chaos", "depth", "random"), default="chaos")
    p.add_argument("--points", type=_positive_int, default=100_000)
    p.add_argument("--depth", type=int, default=8)
    p.add_argument("--sigma", type=float, default=0.0)
    p.add_argument("--burn-in", type=int, default=100)

    p = sub.add_parser("check", help="sufficient-condition checks")
    common(p, seed=False)
    p.add_argument("--condition", choices=("osc", "hueter-lalley"), default="osc")
    p.add_argument("--rect", type=_rect, help="candidate open rectangle x0,y0,x1,y1 for osc")
    p.add_argument("--json", action="store_true")

    p = sub.add_parser("carpet", help="carpet grid and closed-form dimensions")
    p.add_argument("--carpet", required=True)
    p.add_argument("--depth", type=_positive_int, default=4)
    p.add_argument("--out", help="write the carpet's IFS JSON here")
    return parser


def _load(args):
    spec = None
    if getattr(args, "carpet", None):
        spec = carpets.load_carpet(args.carpet)
        ifs = carpets.carpet_to_ifs(spec)
    else:
        ifs = load_ifs(args.ifs)
    ifs.require_valid()
    return ifs, spec


def _config(args):
    return {k: v for k, v in sorted(vars(args).items()) if k != "func"}


def _emit(args, text, binary=False):
    out = getattr(args, "out", None)
    if out:
        with open(out, "wb" if binary else "w") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _depth_list(args):
    if args.depths:
        return sorted(set(args.depths))
    out, n = [], 1
    while n < args.depth:
        out.append(n)
        n *= 2
    return out + [args.depth]


def cmd_dims(args):
    ifs, spec = _load(args)
    ratios = ifs.ratios()
    sim = dimension.similarity_dimension(ratios)
    depths = _depth_list(args)
    curves = {n: dimension.affinity_dimension(ifs, n, args.tol, grid=41 if n == max(depths) else 0) for n in depths}
    s_last = curves[max(depths)].zero
    j0, j1 = args.scales
    fit, series = estimators.estimate_box_dimension(ifs, args.points, args.seed, estimators.dyadic_scales(j0, j1))
    warnings = []
    if series.counts[-1] > 0.5 * series.n_points:
        warnings.append(
            f"N(delta_min)={series.counts[-1]} exceeds half of the {series.n_points} points; "
            "the finest scales are saturated and bias the slope down"
        )
    report = {
        "config": _config(args),
        "maps": ifs.k,
        "ratios": ratios.tolist(),
        "similarity_dimension": sim,
        "affinity_dimension": {str(n): c.zero for n, c in curves.items()},
        "affinity_flags": {str(n): {"clamped": c.clamped, "above_d": c.above_dimension} for n, c in curves.items()},
        "box_estimate": {"slope": fit.slope, "intercept": fit.intercept, "max_residual": fit.max_residual},
        "box_counts": {"delta": series.scales.tolist(), "count": series.counts.tolist()},
        "warnings": warnings,
    }
    chain = []
    if spec is not None:
        haus = carpets.carpet_hausdorff_dimension(spec)
        box = carpets.carpet_box_dimension(spec)
        report["carpet"] = {"hausdorff": haus, "box": box, "grid": spec.ascii()}
        chain.append(("dim_H (closed form)", haus, "<=", "dim_B (closed form)", box, haus <= box + 1e-12))
        chain.append(("dim_B (closed form)", box, "<=", f"s_{max(depths)}", s_last, box <= s_last + 1e-9))
    chain.append(
        ("dim_B (estimate)", fit.slope, "<=", f"s_{max(depths)}", s_last, fit.slope <= s_last + ESTIMATOR_SLACK)
    )
    report["chain"] = [
        {"lhs": a, "lhs_value": av, "rhs": b, "rhs_value": bv, "holds": bool(ok)} for a, av, _, b, bv, ok in chain
    ]
    if args.pressure_out:
        export.write_pressure(args.pressure_out, curves[max(depths)])
    if args.boxcount_out:
        export.write_box_counts(args.boxcount_out, series, fit)

    if args.json:
        _emit(args, json.dumps(report, indent=2) + "\n")
        return EXIT_OK
    lines = ["# selfaffine dims", "config: " + json.dumps(report["config"], sort_keys=True)]
    lines.append(f"maps: {ifs.k}  d: {ifs.d}  ratios: {', '.join(f'{r:.6g}' for r in ratios)}")
    if spec is not None:
        lines.append("carpet:")
        lines.extend("  " + row for row in spec.ascii().splitlines())
        lines.append(f"hausdorff dimension (closed form): {report['carpet']['hausdorff']:.7f}")
        lines.append(f"box dimension (closed form):       {report['carpet']['box']:.7f}")
    lines.append(f"similarity dimension of norms:     {sim:.10f}")
    for n, c in curves.items():
        flag = " (clamped at 2d)" if c.clamped else (" (above d)" if c.above_dimension else "")
        lines.append(f"{f'affinity dimension s_{n}:':<35}{c.zero:.10f}{flag}")
    lines.append(f"box-count estimate:                {fit.slope:.6f}  (max residual {fit.max_residual:.3g})")
    lines.append("delta, N(delta): " + ", ".join(f"{d:g}:{c}" for d, c in zip(series.scales, series.counts)))
    lines.append("inequality chain:")
    for a, av, op, b, bv, ok in chain:
        status = "holds" if ok else "VIOLATED"
        if ok and av > bv:
            status = f"holds within {ESTIMATOR_SLACK} sampling slack"
        lines.append(f"  {a} {av:.6f} {op} {b} {bv:.6f}  [{status}]")
    lines.extend("warning: " + w for w in warnings)
    _emit(args, "\n".join(lines) + "\n")
    for w in warnings:
        print("warning: " + w, file=sys.stderr)
    return EXIT_OK


def cmd_render(args):
    ifs, _ = _load(args)
    if ifs.d != 2:
        raise InvalidInputError("render needs a planar system")
    if not args.out:
        raise UsageError("render needs --out")
    if not (args.width <= export.MAX_RASTER_SIDE and args.height <= export.MAX_RASTER_SIDE):
        raise UsageError(f"width and height must be at most {export.MAX_RASTER_SIDE}")
    cloud = estimators.chaos_game(ifs, args.points, args.seed)
    ellipses = []
    if args.cover_delta is not None:
        ellipses = covers.cylinder_cover(ifs, covers.stopping_set(ifs, args.cover_delta))
    img, _ = export.rasterize(cloud, args.width, args.height, ellipses)
    _emit(args, export.ppm_bytes(img), binary=True)
    return EXIT_OK


def cmd_cover(args):
    ifs, _ = _load(args)
    Z = covers.stopping_set(ifs, args.delta)
    R = bounding_radius(ifs)
    ellipses = covers.cylinder_cover(ifs, Z, R)
    balls = None
    if args.ball_radius is not None:
        balls = covers.ball_cover_from_ellipses(ellipses, args.ball_radius)
    target = args.out or sys.stdout
    export.write_cover(target, ellipses, balls, args.ball_radius)
    return EXIT_OK


def cmd_points(args):
    ifs, _ = _load(args)
    if args.mode == "chaos":
        cloud = estimators.chaos_game(ifs, args.points, args.seed, args.burn_in)
    elif args.mode == "depth":
        cloud = estimators.deterministic_points(ifs, args.depth)
    else:
        cloud = estimators.randomized_attractor(ifs, args.depth, args.sigma, args.seed)
    export.write_points(args.out or sys.stdout, cloud)
    return EXIT_OK


def cmd_check(args):
    ifs, spec = _load(args)
    if args.condition == "osc":
        rect = args.rect
        if rect is None:
            if spec is None:
                raise UsageError("osc needs --rect for --ifs inputs")
            rect = (0.0, 0.0, 1.0, 1.0)
        report = conditions.check_osc_rectangle(ifs, rect)
    else:
        report = conditions.check_hueter_lalley(ifs)
    if args.json:
        doc = report.to_dict()
        doc["config"] = _config(args)
        _emit(args, json.dumps(doc, indent=2) + "\n")
    else:
        _emit(args, "config: " + json.dumps(_config(args), sort_keys=True) + "\n" + report.to_text() + "\n")
    return VERDICT_EXIT[report.verdict]


def cmd_carpet(args):
    spec = carpets.load_carpet(args.carpet)
    ifs = carpets.carpet_to_ifs(spec)
    s = dimension.affinity_dimension(ifs, args.depth, grid=0).zero
    haus = carpets.carpet_hausdorff_dimension(spec)
    box = carpets.carpet_box_dimension(spec)
    lines = [
        "config: " + json.dumps(_config(args), sort_keys=True),
        spec.ascii(),
        f"p={spec.p} q={spec.q} cells={len(spec.cells)}" + (" (transposed to q >= p)" if spec.transposed else ""),
        f"hausdorff dimension: {haus:.7f}",
        f"box dimension:       {box:.7f}",
        f"{f'affinity s_{args.depth}:':<21}{s:.7f}",
    ]
    if s - box > 1e-9:
        lines.append(f"gap: s - dim_B = {s - box:.6f}")
    print("\n".join(lines))
    if args.out:
        with open(args.out, "w") as fh:
            fh.write(dumps_ifs(ifs) + "\n")
    return EXIT_OK


COMMANDS = {
    "dims": cmd_dims,
    "render": cmd_render,
    "cover": cmd_cover,
    "points": cmd_points,
    "check": cmd_check,
    "carpet": cmd_carpet,
}


def main(argv=None):
    try:
        args = build_parser().parse_args(argv)
        return COMMANDS[args.command](args)
    except UsageError as exc:
        print(f"selfaffine: usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except BudgetExceededError as exc:
        print(f"selfaffine: budget exceeded: {exc}", file=sys.stderr)
        return EXIT_BUDGET
    except (InvalidInputError, OSError) as exc:
        print(f"selfaffine: error: {exc}", file=sys.stderr)
        return EXIT_USAGE


if __name__ == "__main__":
    sys.exit(main())
