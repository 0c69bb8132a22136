"""Command-line front end: ``tropmob <subcommand> [options]``.

Every subcommand writes a JSON run report (to ``--output`` or stdout).  Exit
codes: 0 success, 2 domain error (the error class name is reported verbatim),
1 I/O or parse error.  Exact numbers are strings "p/q" or "a+b*sqrt(d)";
floats appear only in amoeba artifacts (17 significant digits).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time
from fractions import Fraction

from . import __version__
from .errors import TropMobError
from .field import format_scalar, parse_scalar

EXIT_OK, EXIT_IO, EXIT_DOMAIN = 0, 1, 2

# ---------------------------------------------------------------------------
# helpers
# ---------------------------------------------------------------------------


def _read_json(path) -> dict:
    with open(path, encoding="utf-8") as fh:
        return json.load(fh)


def _poly_file(path):
    from .lattice import LiftedLaurentPolynomial

    return LiftedLaurentPolynomial.from_json(_read_json(path))


def _pencil_file(path):
    from .mobility import LinearSystemSpec

    return LinearSystemSpec.from_json(_read_json(path))


def _resolve(path: str) -> str:
    """Accept shipped fixture names (``cubic.json``) as well as real paths."""
    if os.path.exists(path):
        return path
    from .fixtures import data_path

    shipped = data_path(os.path.basename(path))
    if shipped.exists():
        return str(shipped)
    raise FileNotFoundError(path)


def _box(args):
    return (float(args.box[0]), float(args.box[1]))


def _seed(args) -> int:
    if args.seed is not None:
        return int(args.seed)
    return int(os.environ.get("TROP_SEED", "0"))


# ---------------------------------------------------------------------------
# subcommands: each returns (result dict, warnings list)
# ---------------------------------------------------------------------------


def cmd_polytope(args):
    from .lattice import support_polytope

    return support_polytope(_poly_file(_resolve(args.input))).to_json(), []


def cmd_subdivide(args):
    from .lattice import is_unimodular_triangulation, lower_hull_subdivision

    s = lower_hull_subdivision(_poly_file(_resolve(args.input)))
    v = is_unimodular_triangulation(s)
    warnings = [] if v.ok else [f"subdivision is not a unimodular triangulation: {v.message}"]
    return dict(s.to_json(), unimodular=v.ok), warnings


def cmd_dual(args):
    from .lattice import check_balancing, dual_complex

    p = dual_complex(_poly_file(_resolve(args.input)))
    bal = check_balancing(p)
    result = dict(
        p.to_json(),
        balanced=bal.ok,
        counts={"vertices": len(p.vertices), "bounded_edges": len(p.bounded_edges()), "rays": len(p.rays())},
    )
    if args.plot:
        from .svg import emit_svg

        emit_svg(args.plot, _box(args), locus=p)
        result["plot"] = os.path.basename(args.plot)
    return result, []


def cmd_tropicalize(args):
    from .pl import corner_locus, tropicalize

    ell = tropicalize(_poly_file(_resolve(args.input)))
    return {"pl_function": ell.to_json(), "corner_locus": corner_locus(ell).to_json()}, []


def cmd_amoeba(args):
    from .amoeba import convergence_profile, hausdorff_to_tropical, sample_amoeba, write_csv
    from .pl import corner_locus, tropicalize

    f = _poly_file(_resolve(args.input))
    seed, box = _seed(args), _box(args)
    warnings = ["amoeba distances are empirical floating-point estimates (one-sided: sample -> locus)"]
    if args.ts:
        prof = convergence_profile(f, args.ts, args.count, seed, box)
        return dict(prof.to_json(), non_increasing_10pct=prof.non_increasing(0.1)), warnings
    s = sample_amoeba(f, args.t, args.count, seed, box)
    locus = corner_locus(tropicalize(f))
    result = {
        "t": format(args.t, ".17g"),
        "count": args.count,
        "seed": seed,
        "points": int(len(s.points)),
        "rejected_roots": s.rejected,
        "hausdorff": format(hausdorff_to_tropical(s, locus, box), ".17g"),
    }
    if args.csv:
        write_csv(s, args.csv)
        result["csv"] = os.path.basename(args.csv)
    if args.plot:
        from .svg import emit_svg

        emit_svg(args.plot, box, locus=locus, points=s.points)
        result["plot"] = os.path.basename(args.plot)
    return result, warnings


def cmd_order(args):
    from .measures import Undetermined, local_order

    sys_ = _pencil_file(_resolve(args.fixture))
    D = args.truncation if args.truncation is not None else sys_.degree
    orders = [local_order(sys_.chart, g, D) for g in sys_.generators]
    warnings = [f"generator {i}: order undetermined at truncation {D}" for i, k in enumerate(orders) if isinstance(k, Undetermined)]
    return {"truncation": D, "orders": [str(k) for k in orders]}, warnings


def cmd_mobility(args):
    from .mobility import certificate

    cert = certificate(_pencil_file(_resolve(args.fixture)), args.convention, args.trials, _seed(args))
    warnings = [n for n in cert.notes if n.startswith("convention discrepancy")]
    return cert.to_json(), warnings


def _ell_line():
    from .pl import PLFunction

    return PLFunction.of(2, [((0, 0), 0), ((1, 0), 0), ((0, 1), 0)])


def cmd_entropy(args):
    from .entropy import MeasureFamily, entropy_constant, mobility_family
    from .mobility import certificate

    if args.family:
        fam = MeasureFamily.from_json(_read_json(_resolve(args.family)))
    elif args.fixture:
        certs = [certificate(_pencil_file(_resolve(p)), args.convention, args.trials, _seed(args)) for p in args.fixture]
        fam, _ = mobility_family(certs, [(0, 0)] * len(certs), [_ell_line()] * len(certs))
    else:
        raise ValueError("entropy needs --family or --fixture")
    res = entropy_constant(fam)
    return dict(res.to_json(), M=format_scalar(fam.M), members=len(fam.members)), []


def _bound_arg(text: str, convention: str, trials: int, seed: int):
    try:
        return Fraction(parse_scalar(text))
    except ValueError:
        from .mobility import certificate

        return certificate(_pencil_file(_resolve(text)), convention, trials, seed)


def cmd_check_nf(args):
    from .mobility import noether_fano_check
    from .pl import PLMap, dilation_factor

    seed = _seed(args)
    phi = PLMap.from_json(_read_json(_resolve(args.map)))
    delta = dilation_factor(phi)
    rep = noether_fano_check(
        _bound_arg(args.Y, args.convention, args.trials, seed),
        _bound_arg(args.X, args.convention, args.trials, seed),
        delta,
    )
    return rep.to_json(), [rep.caveat]


def cmd_segre(args):
    from .mobility import segre_cone_check, segre_section

    rep = segre_section()
    w = segre_cone_check(args.samples, _seed(args))
    return dict(rep.to_json(), cone_check={"verified": w.verified, "samples": len(w.samples), "witness": w.to_json()}), []


def cmd_plot(args):
    from .lattice import dual_complex, lower_hull_subdivision
    from .svg import emit_svg

    f = _poly_file(_resolve(args.input))
    box = _box(args)
    points = None
    if args.amoeba_t is not None:
        from .amoeba import sample_amoeba

        points = sample_amoeba(f, args.amoeba_t, args.count, _seed(args), box).points
    locus = dual_complex(f) if f.n == 2 else None
    if f.n != 2:
        from .errors import DimensionUnsupported

        raise DimensionUnsupported(f"plots need n = 2, got n = {f.n}")
    sub = lower_hull_subdivision(f) if args.subdivision else None
    text = emit_svg(args.svg, box, locus=locus, points=points, subdivision=sub)
    return {
        "svg": os.path.basename(args.svg),
        "lines": text.count("<line"),
        "markers": text.count('r="4"'),
        "points": text.count('r="1.2"'),
    }, []


COMMANDS = {
    "polytope": cmd_polytope,
    "subdivide": cmd_subdivide,
    "dual": cmd_dual,
    "tropicalize": cmd_tropicalize,
    "amoeba": cmd_amoeba,
    "order": cmd_order,
    "mobility": cmd_mobility,
    "entropy": cmd_entropy,
    "check-nf": cmd_check_nf,
    "segre": cmd_segre,
    "plot": cmd_plot,
}


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="tropmob", description=__doc__.splitlines()[0])
    p.add_argument("--version", action="version", version=f"tropmob {__version__}")
    sub = p.add_subparsers(dest="command", required=True)

    def common(sp):
        sp.add_argument("--output", "-o", default="-", help="report JSON path ('-' = stdout)")
        sp.add_argument("--seed", type=int, default=None, help="random seed (default: $TROP_SEED or 0)")
        return sp

    def box(sp, default=(-4.0, 4.0)):
        sp.add_argument("--box", nargs=2, type=float, default=list(default), metavar=("LO", "HI"))

    for name in ("polytope", "subdivide", "tropicalize"):
        common(sub.add_parser(name)).add_argument("--input", "-i", required=True)
    sp = common(sub.add_parser("dual"))
    sp.add_argument("--input", "-i", required=True)
    sp.add_argument("--plot", help="also write an SVG of the dual complex")
    box(sp)
    sp = common(sub.add_parser("amoeba"))
    sp.add_argument("--input", "-i", required=True)
    sp.add_argument("--t", type=float, default=0.1)
    sp.add_argument("--ts", type=float, nargs="+", help="decreasing t values: emit a convergence profile")
    sp.add_argument("--count", type=int, default=2000)
    sp.add_argument("--csv")
    sp.add_argument("--plot")
    box(sp)
    sp = common(sub.add_parser("order"))
    sp.add_argument("--fixture", required=True)
    sp.add_argument("--truncation", type=int)
    for name in ("mobility", "entropy", "check-nf"):
        sp = common(sub.add_parser(name))
        sp.add_argument("--convention", choices=("generic-member", "family-average"), default="family-average")
        sp.add_argument("--trials", type=int, default=3)
        if name == "mobility":
            sp.add_argument("--fixture", required=True)
        elif name == "entropy":
            sp.add_argument("--fixture", nargs="+")
            sp.add_argument("--family")
        else:
            sp.add_argument("--Y", required=True, help="exact bound or pencil fixture for Y")
            sp.add_argument("--X", required=True, help="exact bound or pencil fixture for X")
            sp.add_argument("--map", required=True, help="PL map JSON (matrix + shift)")
    sp = common(sub.add_parser("segre"))
    sp.add_argument("--samples", type=int, default=20)
    sp = common(sub.add_parser("plot"))
    sp.add_argument("--input", "-i", required=True)
    sp.add_argument("--svg", required=True)
    sp.add_argument("--amoeba-t", type=float)
    sp.add_argument("--count", type=int, default=2000)
    sp.add_argument("--subdivision", action="store_true")
    box(sp)
    return p


def dispatch(args) -> dict:
    start = time.perf_counter()
    result, warnings = COMMANDS[args.command](args)
    return {
        "subcommand": args.command,
        "result": result,
        "warnings": warnings,
        "wall_time": round(time.perf_counter() - start, 6),
    }


def _emit(report: dict, output: str) -> None:
    text = json.dumps(report, indent=2) + "\n"
    if output == "-":
        sys.stdout.write(text)
    else:
        from .svg import write_atomic

        write_atomic(output, text)


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        report = dispatch(args)
    except TropMobError as err:
        sys.stderr.write(json.dumps({"error": type(err).__name__, "module": err.module, "message": str(err)}) + "\n")
        return EXIT_DOMAIN
    except (OSError, ValueError, KeyError, TypeError, json.JSONDecodeError) as err:
        sys.stderr.write(json.dumps({"error": type(err).__name__, "message": str(err)}) + "\n")
        return EXIT_IO
    _emit(report, args.output)
    return EXIT_OK


if __name__ == "__main__":
    raise SystemExit(main())
