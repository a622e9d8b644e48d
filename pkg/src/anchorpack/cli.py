"""Command-line interface: ``anchorpack <command> ...``.

Exit codes: 0 success, 1 validation failure, 2 usage error.
"""

from __future__ import annotations

import argparse
import json
import sys
from fractions import Fraction
from pathlib import Path

from . import bounds, exact, generators
from .geometry import GeometryError, PointSet
from .greedy import greedy_packing
from .serialization import (
    FormatError,
    Instance,
    Result,
    dumps,
    parse_scalar,
    read_instance,
    read_result,
)
from .svg import render_svg
from .tiling import (
    VerificationReport,
    compute_tiling,
    tile_packing,
    verify_packing,
    verify_tiling,
)


class UsageError(Exception):
    pass


def _emit(text: str, out) -> None:
    if out is None or out == "-":
        sys.stdout.write(text)
    else:
        Path(out).write_text(text)


def _scalar(text: str) -> Fraction:
    try:
        return parse_scalar(text)
    except FormatError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from exc


# --------------------------------------------------------------------------
# generate


def cmd_generate(args) -> int:
    kind = args.kind
    params = args.params
    inst: Instance
    try:
        if kind == "diagonal":
            (n,) = params
            inst = Instance(generators.diagonal(int(n)))
        elif kind == "permutation":
            perm = [int(v) for p in params for v in p.split(",") if v != ""]
            inst = Instance(generators.permutation_grid(perm)[0])
        elif kind == "random":
            (n,) = params
            inst = Instance(generators.uniform_random(int(n), args.seed))
        elif kind == "adversary":
            (eps,) = params
            adv = generators.adversarial_sequence(
                parse_scalar(eps),
                beta=args.beta,
                steps=args.steps,
                max_staircases=args.max_staircases,
                target_area=args.target_area,
            )
            inst = Instance(adv.point_set, adv.order, online=True)
        elif kind == "hyperbola":
            beta, m = params
            t = generators.hyperbola_staircase(parse_scalar(beta), args.height, args.width, int(m))
            # the origin plus the reflex vertices: the origin's tile is the staircase
            inst = Instance(PointSet([t.anchor, *t.reflex_vertices]))
        elif kind == "densify":
            if args.input is None:
                raise UsageError("densify needs --in")
            (eps,) = params
            base = read_instance(args.input)
            inst = Instance(generators.densify(base.points, parse_scalar(eps)))
        else:  # pragma: no cover - argparse restricts choices
            raise UsageError(f"unknown kind {kind}")
    except ValueError as exc:
        if isinstance(exc, (GeometryError, FormatError)):
            raise
        if "unpack" in str(exc):
            raise UsageError(f"wrong number of parameters for {kind}") from exc
        raise
    _emit(dumps(inst.to_dict()), args.out)
    return 0


# --------------------------------------------------------------------------
# pack


def _resolve_order(inst: Instance, mode: str):
    if mode == "file":
        if inst.order is None:
            raise UsageError("--order file requested but the instance has no 'order'")
        return inst.order
    return None


def cmd_pack(args) -> int:
    inst = read_instance(args.input)
    order = _resolve_order(inst, args.order)
    if args.algo == "tile":
        tl, pk = tile_packing(inst.points, order)
        res = Result.from_packing("tile", pk, tl)
    else:
        online = args.online or inst.online
        pk = greedy_packing(inst.points, order, avoid_points=not online)
        res = Result.from_packing("greedy-online" if online else "greedy", pk)
    if args.out:
        Path(args.out).write_text(dumps(res.to_dict()))
    print(f"coverage {res.coverage} ({float(res.coverage):.10g})")
    return 0


# --------------------------------------------------------------------------
# verify


def verify_pair(inst: Instance, res: Result) -> VerificationReport:
    ps = inst.points
    rep = VerificationReport()
    pk = res.to_packing(ps)
    for c in verify_packing(pk).checks:
        rep.checks.append(c)
    if ps.contains_origin:
        tl = compute_tiling(ps)
        for c in verify_tiling(tl).checks:
            c.name = f"tiling_{c.name}"
            rep.checks.append(c)
        for c in bounds.verify_empty_triangles(ps, tl).checks:
            rep.checks.append(c)
        theirs = res.to_tiling(ps)
        if theirs is not None:
            same = [t for t in theirs.tiles] == [tl.tile(i) for i in range(len(tl))]
            rep.add("tiles_match", same, "" if same else "result tiles differ from a fresh tiling")
        _, tpk = tile_packing(ps)
        tile_area = {i: r.area for i, r in tpk.by_point().items()}
        mine = {i: r.area for i, r in pk.by_point().items()}
        if res.algorithm == "tile":
            bad = [i for i in mine if mine[i] != tile_area[i]]
            rep.add("max_rect_per_tile", not bad, "" if not bad else f"{len(bad)} anchors differ", bad[:10])
        elif res.algorithm == "greedy":
            bad = [i for i in mine if mine[i] < tile_area[i]]
            rep.add("greedy_ge_tile", not bad, "" if not bad else f"{len(bad)} anchors below tile area", bad[:10])
    return rep


def cmd_verify(args) -> int:
    if args.dir:
        reports = {}
        ok = True
        for inst_path in sorted(Path(args.dir).glob("*.json")):
            if inst_path.name.endswith(".result.json"):
                continue
            res_path = inst_path.with_name(inst_path.stem + ".result.json")
            if not res_path.exists():
                continue
            rep = verify_pair(read_instance(inst_path), read_result(res_path))
            reports[inst_path.name] = rep.to_dict()
            ok = ok and rep.ok
        print(json.dumps({"ok": ok, "files": reports}, indent=1, sort_keys=True))
        return 0 if ok else 1
    if not args.input or not args.result:
        raise UsageError("verify needs --in and --result (or --dir)")
    rep = verify_pair(read_instance(args.input), read_result(args.result))
    print(json.dumps(rep.to_dict(), indent=1, sort_keys=True))
    return 0 if rep.ok else 1


# --------------------------------------------------------------------------
# optimal


def cmd_optimal(args) -> int:
    inst = read_instance(args.input)
    ps = inst.points
    opt = exact.optimal_packing(ps, max_n=args.max_n)
    rows = [("optimal", opt.value)]
    if len(ps) <= exact.PERMUTATION_MAX_N:
        rows.append(("best_permutation", exact.best_permutation(ps)[1].coverage))
    rows.append(("greedy", greedy_packing(ps).coverage))
    if ps.contains_origin:
        rows.append(("tile", tile_packing(ps)[1].coverage))
    width = max(len(name) for name, _ in rows)
    for name, v in rows:
        print(f"{name:<{width}}  {str(v):>12}  {float(v):.10f}")
    if args.out:
        Path(args.out).write_text(dumps(Result.from_packing("optimal", opt.packing).to_dict()))
    return 0


# --------------------------------------------------------------------------
# bounds


def cmd_bounds(args) -> int:
    if args.mode == "simple":
        if args.beta is None or args.lam is None:
            raise UsageError("simple mode needs --beta and --lambda")
        doc = {
            "mode": "simple",
            "beta": args.beta,
            "lambda": args.lam,
            "F": bounds.F(args.beta, args.lam),
            "value": bounds.simple_lower_bound(args.beta, args.lam),
        }
    elif args.mode == "integrated":
        if args.beta0 is None or args.lam is None:
            raise UsageError("integrated mode needs --beta0 and --lambda")
        doc = {
            "mode": "integrated",
            "beta0": args.beta0,
            "lambda": args.lam,
            "E1": bounds.exp_integral_E1(args.beta0),
            "value": bounds.integrated_lower_bound(args.beta0, args.lam),
        }
    else:
        best = bounds.optimize_bounds()
        doc = {
            "mode": "optimize",
            **{
                k: {"beta": round(v.beta, 6), "lambda": round(v.lam, 6), "value": v.value}
                for k, v in best.items()
            },
        }
    if args.json:
        print(json.dumps(doc, sort_keys=True))
    elif args.mode == "optimize":
        for k in ("simple", "integrated"):
            d = doc[k]
            print(f"{k}: value={d['value']:.8f} beta={d['beta']} lambda={d['lambda']}")
    else:
        print(f"{doc['value']:.8f}")
    return 0


# --------------------------------------------------------------------------
# render


def cmd_render(args) -> int:
    inst = read_instance(args.input)
    rects, tiles = [], None
    if args.result:
        res = read_result(args.result)
        res.to_packing(inst.points)
        rects = res.rects
        tiles = res.tiles
    if tiles is None and inst.points.contains_origin and not args.no_tiles:
        tiles = compute_tiling(inst.points).tiles
    _emit(render_svg(inst.points, rects, tiles), args.out)
    return 0


# --------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(prog="anchorpack", description="Anchored rectangle packing in the unit square.")
    sub = p.add_subparsers(dest="command", required=True)

    g = sub.add_parser("generate", help="write an instance file")
    g.add_argument(
        "kind", choices=["diagonal", "permutation", "random", "adversary", "hyperbola", "densify"]
    )
    g.add_argument("params", nargs="*", help="n | perm | n | eps | beta m | eps")
    g.add_argument("--seed", type=int, default=0)
    g.add_argument("--out")
    g.add_argument("--in", dest="input", help="base instance for densify")
    g.add_argument("--beta", type=_scalar, help="adversary staircase ratio (default 2/eps)")
    g.add_argument("--steps", type=int, help="adversary steps per staircase (default ceil(8/eps))")
    g.add_argument("--max-staircases", type=int, default=128)
    g.add_argument("--target-area", type=_scalar)
    g.add_argument("--height", type=_scalar, default=Fraction(1))
    g.add_argument("--width", type=_scalar, default=Fraction(1))
    g.set_defaults(func=cmd_generate)

    k = sub.add_parser("pack", help="run a packing algorithm")
    k.add_argument("--algo", choices=["tile", "greedy"], required=True)
    k.add_argument("--in", dest="input", required=True)
    k.add_argument("--out")
    k.add_argument("--order", choices=["file", "sweep"], default="sweep")
    k.add_argument("--online", action="store_true", help="greedy: only earlier rectangles block")
    k.set_defaults(func=cmd_pack)

    v = sub.add_parser("verify", help="check a result against its instance")
    v.add_argument("--in", dest="input")
    v.add_argument("--result")
    v.add_argument("--dir", help="verify every X.json with a matching X.result.json")
    v.set_defaults(func=cmd_verify)

    o = sub.add_parser("optimal", help="exact optimum for a small instance")
    o.add_argument("--in", dest="input", required=True)
    o.add_argument("--max-n", type=int, default=None)
    o.add_argument("--out")
    o.set_defaults(func=cmd_optimal)

    b = sub.add_parser("bounds", help="evaluate or optimize the coverage lower bounds")
    b.add_argument("--mode", choices=["simple", "integrated", "optimize"], required=True)
    b.add_argument("--beta", type=float)
    b.add_argument("--beta0", type=float)
    b.add_argument("--lambda", dest="lam", type=float)
    b.add_argument("--json", action="store_true")
    b.set_defaults(func=cmd_bounds)

    r = sub.add_parser("render", help="draw an SVG figure")
    r.add_argument("--in", dest="input", required=True)
    r.add_argument("--result")
    r.add_argument("--out")
    r.add_argument("--no-tiles", action="store_true")
    r.set_defaults(func=cmd_render)
    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except UsageError as exc:
        parser.print_usage(sys.stderr)
        print(f"anchorpack: error: {exc}", file=sys.stderr)
        return 2
    except (ValueError, OSError) as exc:
        # GeometryError, FormatError and InstanceTooLarge are ValueErrors
        print(f"anchorpack: error: {exc}", file=sys.stderr)
        return 1


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
