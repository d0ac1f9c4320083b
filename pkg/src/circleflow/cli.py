"""Command-line interface.

Exit codes: 0 success, 1 invalid input, 2 a verification failed.
Set ``CIRCLEFLOW_LOG`` (e.g. ``INFO`` or ``DEBUG``) for log output on stderr.
"""
from __future__ import annotations

import argparse
import json
import logging
import os
import sys
from fractions import Fraction
from pathlib import Path

from . import serialize
from .flows import FAMILIES, INDEXED, make_family
from .metric import d, d_tilde1, quad_oracle_d_tilde1
from .pac import PacMap, UnsupportedComposition, bp0, compose, delta_f, invert, sharp, validate

log = logging.getLogger("circleflow")

EXIT_OK, EXIT_INVALID, EXIT_VERIFY = 0, 1, 2


class UsageError(ValueError):
    pass


def rational(text: str) -> Fraction:
    try:
        return Fraction(text)
    except (ValueError, ZeroDivisionError):
        raise argparse.ArgumentTypeError(f"not a rational number: {text!r}")


def rational_list(text: str) -> tuple:
    return tuple(rational(x) for x in text.split(","))


def _emit(text: str, out: str | None):
    if out:
        Path(out).write_text(text + "\n")
    else:
        print(text)


def _need(args, *names):
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise UsageError("missing " + ", ".join("--" + n.replace("_", "-") for n in missing))


def _family_map(args) -> PacMap:
    if args.family in INDEXED:
        _need(args, "n")
        return INDEXED[args.family](args.n)
    _need(args, "t")
    return make_family(args.family, lam=args.lam, alpha=args.alpha)(args.t)


def cmd_eval(args):
    _need(args, "f", "x")
    f = serialize.load_map(args.f)
    comp, y = (f.left_limit_at if args.left else f.at)(args.comp, args.x)
    print(serialize.num_to_json(y) if len(f.target) == 1 else f"{comp} {serialize.num_to_json(y)}")


def cmd_compose(args):
    _need(args, "f", "g")
    _emit(serialize.dumps_map(compose(serialize.load_map(args.f), serialize.load_map(args.g))), args.out)


def cmd_invert(args):
    _need(args, "f")
    _emit(serialize.dumps_map(invert(serialize.load_map(args.f))), args.out)


def cmd_bp0(args):
    _need(args, "f")
    f = serialize.load_map(args.f)
    pts = [serialize.num_to_json(p) for p in bp0(f)]
    _emit(json.dumps({"bp0": pts, "sharp": sharp(f), "delta_f": serialize.num_to_json(delta_f(f))}), args.out)


def cmd_dist(args):
    _need(args, "f", "g")
    f, g = serialize.load_map(args.f), serialize.load_map(args.g)
    val = d_tilde1(f, g) if args.tilde else d(f, g)
    print(val)
    print(f"{float(val.value):.17g}")
    if args.oracle:
        est = quad_oracle_d_tilde1(f, g, args.samples)
        if not args.tilde:
            est += quad_oracle_d_tilde1(invert(f), invert(g), args.samples)
        gap = abs(est - float(val.value))
        print(f"oracle {est:.17g} (difference {gap:.2e})")
        if gap > args.oracle_tol:
            return EXIT_VERIFY


def cmd_flow(args):
    _emit(serialize.dumps_map(_family_map(args)), args.out)


def _straighten_cfg(args):
    from .straighten import StraightenConfig

    return StraightenConfig(q_max=args.q_max, tol=args.tol)


def cmd_straighten(args):
    from .straighten import straighten

    if args.family in INDEXED:
        raise UsageError(f"{args.family} is a single map, not a family")
    fam = make_family(args.family, lam=args.lam, alpha=args.alpha)
    res = straighten(fam, _straighten_cfg(args))
    _emit(json.dumps(serialize.result_to_json(res), indent=2), args.out)
    if not res.report.ok:
        print(f"verification failed: max residual {res.report.max_residual:.2e}", file=sys.stderr)
        return EXIT_VERIFY


def cmd_verify(args):
    if args.result:
        from .straighten import verify_conjugate_continuity, StraighteningResult

        _need(args, "family")
        obj = json.loads(Path(args.result).read_text())
        f = serialize.map_from_json(obj["f"])
        fam = make_family(args.family, lam=args.lam, alpha=args.alpha)
        ts = [args.t] if args.t is not None else [Fraction(s, k) for k in (32, 8, 2) for s in (1, -1)]
        shell = StraighteningResult(None, None, None, f.target, f, None)
        rep = verify_conjugate_continuity(shell, fam, ts, args.tol)
        for c in rep.checks:
            print(f"t={c.t} invariant={c.invariant} residuals={[f'{r:.1e}' for r in c.residuals]}")
        print("ok" if rep.ok else "FAILED")
        return EXIT_OK if rep.ok else EXIT_VERIFY
    _need(args, "f")
    obj = json.loads(Path(args.f).read_text())
    f = serialize.map_from_json(obj, normalize=False)
    rep = validate(f)
    for v in rep.violations:
        print(f"{v.kind}: {v.detail}")
    print("valid" if rep.ok else "invalid")
    return EXIT_OK if rep.ok else EXIT_VERIFY


def cmd_plot(args):
    from .plotting import write_csv, write_svg

    _need(args, "out")
    if args.f:
        f, title = serialize.load_map(args.f), Path(args.f).stem
    else:
        _need(args, "family")
        f = _family_map(args)
        title = f"{args.family} t={args.t}" if args.t is not None else f"{args.family} n={args.n}"
    base = Path(args.out)
    write_csv(f, base.with_suffix(".csv"))
    write_svg(f, base.with_suffix(".svg"), title)
    print(f"wrote {base.with_suffix('.csv')} and {base.with_suffix('.svg')}")


def cmd_selftest(args):
    from . import acceptance

    failed = 0
    for crit in acceptance.CRITERIA:
        kw = {}
        if crit is acceptance.criterion_6:
            kw = {"seed": args.seed, "count": 50 if args.quick else 500}
        elif crit is acceptance.criterion_7:
            kw = {"seed": args.seed + 1, "count": 10 if args.quick else 100}
        res = crit(**kw)
        print(res.line(), flush=True)
        failed += not res.passed
    print(f"{len(acceptance.CRITERIA) - failed}/{len(acceptance.CRITERIA)} criteria passed")
    return EXIT_OK if not failed else EXIT_VERIFY


COMMANDS = {
    "eval": (cmd_eval, "evaluate a map (or its left limit) at a point"),
    "compose": (cmd_compose, "write f o g"),
    "invert": (cmd_invert, "write the inverse map"),
    "bp0": (cmd_bp0, "list discontinuities, their count and minimal spacing"),
    "dist": (cmd_dist, "distance between two maps"),
    "flow": (cmd_flow, "emit a member of a named family"),
    "straighten": (cmd_straighten, "run the straightening pipeline on a family"),
    "verify": (cmd_verify, "validate a map, or re-check a straightening result"),
    "plot": (cmd_plot, "write CSV samples and an SVG graph"),
    "selftest": (cmd_selftest, "run the acceptance criteria"),
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="circleflow", description=__doc__.splitlines()[0])
    sub = parser.add_subparsers(dest="command", required=True)
    for name, (_, help_text) in COMMANDS.items():
        p = sub.add_parser(name, help=help_text)
        p.add_argument("--f", help="map JSON file")
        p.add_argument("--g", help="second map JSON file")
        p.add_argument("--out", help="output path (stdout when omitted)")
        p.add_argument("--seed", type=int, default=0)
        if name == "eval":
            p.add_argument("--x", type=rational)
            p.add_argument("--comp", type=int, default=0)
            p.add_argument("--left", action="store_true", help="left limit instead of value")
        if name == "dist":
            p.add_argument("--oracle", action="store_true", help="cross-check with midpoint quadrature")
            p.add_argument("--samples", type=int, default=1_000_000)
            p.add_argument("--oracle-tol", type=float, default=1e-8)
            p.add_argument("--tilde", action="store_true", help="plain L1 distance without the inverse term")
        if name in ("flow", "straighten", "verify", "plot"):
            p.add_argument("--family", choices=FAMILIES + tuple(INDEXED))
            p.add_argument("--t", type=rational)
            p.add_argument("--n", type=int)
            p.add_argument("--lam", type=rational_list, help="comma-separated block lengths")
            p.add_argument("--alpha", type=rational_list, help="comma-separated angles")
        if name in ("straighten", "verify"):
            p.add_argument("--q-max", type=int, default=12)
            p.add_argument("--tol", type=float, default=1e-9)
        if name == "verify":
            p.add_argument("--result", help="straightening result JSON")
        if name == "selftest":
            p.add_argument("--quick", action="store_true", help="smaller random suites")
    return parser


def run(argv=None) -> int:
    level = os.environ.get("CIRCLEFLOW_LOG", "WARNING").upper()
    logging.basicConfig(level=getattr(logging, level, logging.WARNING), stream=sys.stderr,
                        format="%(levelname)s %(name)s: %(message)s")
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as e:
        return EXIT_OK if e.code == 0 else EXIT_INVALID
    func = COMMANDS[args.command][0]
    try:
        code = func(args)
    except (serialize.FormatError, UsageError, UnsupportedComposition, ValueError, KeyError,
            FileNotFoundError, json.JSONDecodeError) as e:
        print(f"error: {e}", file=sys.stderr)
        return EXIT_INVALID
    return EXIT_OK if code is None else code


def main():
    sys.exit(run())
