"""planelab command line.

Every command reads JSON, writes a JSON report to stdout (or --out) and an
SVG figure only when --svg is given. Exit codes: 0 verified, 1 the check came
out negative, 2 usage or I/O error, 3 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import sys
from fractions import Fraction
from importlib import resources
from pathlib import Path

import mpmath
import numpy as np

from . import __version__

EXIT_OK, EXIT_NEGATIVE, EXIT_USAGE, EXIT_NUMERIC = 0, 1, 2, 3


class UsageError(Exception):
    pass


def _jsonable(obj):
    if isinstance(obj, dict):
        return {str(k): _jsonable(v) for k, v in obj.items()}
    if isinstance(obj, (list, tuple)):
        return [_jsonable(v) for v in obj]
    if isinstance(obj, (bool, np.bool_)):
        return bool(obj)
    if isinstance(obj, (int, np.integer)):
        return int(obj)
    if isinstance(obj, Fraction):
        return obj.numerator if obj.denominator == 1 else f"{obj.numerator}/{obj.denominator}"
    if isinstance(obj, mpmath.mpf):
        return mpmath.nstr(obj, 30)
    if isinstance(obj, (float, np.floating)):
        v = float(obj)
        return v if math.isfinite(v) else None
    if isinstance(obj, np.ndarray):
        return _jsonable(obj.tolist())
    return obj


def _read_json(path: str):
    try:
        if path == "-":
            return json.load(sys.stdin)
        with open(path, encoding="utf-8") as fh:
            return json.load(fh)
    except OSError as exc:
        raise UsageError(f"cannot read {path}: {exc.strerror}") from exc
    except json.JSONDecodeError as exc:
        raise UsageError(f"{path} is not valid JSON: {exc}") from exc


def _emit(args, report: dict) -> None:
    from .jsonio import dumps

    text = dumps(_jsonable(report))
    if args.out:
        try:
            Path(args.out).write_text(text, encoding="utf-8")
        except OSError as exc:
            raise UsageError(f"cannot write {args.out}: {exc.strerror}") from exc
    else:
        sys.stdout.write(text)


def _vertices(data) -> np.ndarray:
    if isinstance(data, dict):
        data = data.get("vertices", data.get("points"))
    if data is None:
        raise UsageError("input has no 'vertices'")
    try:
        return np.array([[float(x), float(y)] for x, y in data], dtype=float)
    except (TypeError, ValueError) as exc:
        raise UsageError(f"bad vertex list: {exc}") from exc


def _polygon(pts: np.ndarray):
    from .geom import Point, Polygon

    return Polygon(tuple(Point(*p) for p in pts))


# kobon

def _ctx(args):
    from .geom import Context

    return Context(args.precision_bits)


def _draw_lines(fig, lines, arr):
    pts = np.array([v.point.as_float() if hasattr(v.point, "as_float") else v.point for v in arr.vertices])
    if len(pts) == 0:
        pts = np.array([[-1.0, -1.0], [1.0, 1.0]])
    lo, hi = pts.min(axis=0), pts.max(axis=0)
    span = max(float((hi - lo).max()), 1.0)
    c = (lo + hi) / 2
    for line in lines:
        a, b, cc = line.as_float()
        d = np.array([b, -a]) / math.hypot(a, b)
        p0 = np.array([a, b]) * (-cc) / (a * a + b * b)
        p0 = p0 + d * float(np.dot(c - p0, d))
        fig.polyline([p0 - d * span, p0 + d * span], stroke="#555")
    for tri in _triangles(arr):
        fig.polygon(tri, stroke="none", fill="#e0a030", opacity=0.7)


def _triangles(arr):
    from .arrangements import triangles

    return [np.array([p.as_float() for p in t]) for t in triangles(arr)]


def cmd_kobon_count(args):
    from .arrangements import build_arrangement, load_fixture, verify_configuration
    from .jsonio import decode_lines

    if args.fixture is not None:
        lines = load_fixture(args.fixture)
    elif args.input:
        lines = decode_lines(_read_json(args.input))
    else:
        raise UsageError("give --in FILE or --fixture N")
    report = verify_configuration(lines, _ctx(args))
    if args.svg:
        from .svg import Figure

        fig = Figure()
        _draw_lines(fig, lines, build_arrangement(lines, _ctx(args)))
        fig.save(args.svg)
    _emit(args, report)
    return EXIT_OK


def cmd_kobon_fp(args):
    from .arrangements import build_arrangement, count_triangles, furedi_palasti, kobon_bounds
    from .jsonio import encode_line

    lines = furedi_palasti(args.n, _ctx(args))
    arr = build_arrangement(lines, _ctx(args))
    count = count_triangles(arr)
    b = kobon_bounds(args.n)
    report = {"n": args.n, "triangle_count": count, "lower": b.lower, "meets_lower": count >= b.lower,
              "lines": [encode_line(l) for l in lines] if args.lines else None}
    if report["lines"] is None:
        del report["lines"]
    if args.svg:
        from .svg import Figure

        fig = Figure()
        _draw_lines(fig, lines, arr)
        fig.save(args.svg)
    _emit(args, report)
    return EXIT_OK if count >= b.lower else EXIT_NEGATIVE


def cmd_kobon_bounds(args):
    from .arrangements import kobon_bounds

    _emit(args, kobon_bounds(args.n, args.mod6).to_json())
    return EXIT_OK


# packing

def _packing_svg(path, inst):
    from .packing import SQRT3
    from .svg import Figure

    s = inst.side
    fig = Figure().polygon([[0, 0], [s, 0], [s / 2, s * SQRT3 / 2]])
    a = np.linspace(0, 2 * math.pi, 64, endpoint=False)
    for x, y in inst.centers:
        fig.polygon(np.column_stack([x + np.cos(a), y + np.sin(a)]), stroke="#2060c0")
    fig.save(path)


def cmd_pack_verify(args):
    from .packing import PackingInstance, verify_packing

    data = _read_json(args.input)
    try:
        inst = PackingInstance.from_json(data)
    except (KeyError, TypeError, ValueError) as exc:
        raise UsageError(f"bad packing instance: {exc}") from exc
    tol = args.tol if args.tol is not None else 1e-7
    report = {"n": inst.n, "side": inst.side, **verify_packing(inst, tol), "tol": tol}
    if args.svg:
        _packing_svg(args.svg, inst)
    _emit(args, report)
    return EXIT_OK if report["valid"] else EXIT_NEGATIVE


def cmd_pack_optimize(args):
    from .packing import optimize_packing, verify_packing

    inst = optimize_packing(args.n, args.seed, args.budget)
    report = {**inst.to_json(), "n": inst.n, **verify_packing(inst), "seed": args.seed, "budget": args.budget}
    if args.svg:
        _packing_svg(args.svg, inst)
    _emit(args, report)
    return EXIT_OK if report["valid"] else EXIT_NEGATIVE


def cmd_pack_erdos_oler(args):
    from .packing import erdos_oler_check

    report = erdos_oler_check(args.k, args.seed, args.budget)
    tol = args.tol if args.tol is not None else 5e-3
    report["tol"] = tol
    report["consistent"] = abs(report["gap"]) <= tol
    _emit(args, report)
    return EXIT_OK if report["consistent"] else EXIT_NEGATIVE


# worms

def _cage(args):
    from .cages import Cage

    kind = args.cage
    if kind == "disk":
        return Cage.disk(args.diameter if args.diameter is not None else 1.0)
    if kind == "rhombus":
        return Cage.rhombus(args.d1 if args.d1 is not None else 1.0,
                            args.d2 if args.d2 is not None else 1 / math.sqrt(3))
    if kind == "sector":
        return Cage.sector(math.radians(args.angle if args.angle is not None else 30.0),
                           args.radius if args.radius is not None else 1.0)
    if kind == "square":
        return Cage.square(args.side if args.side is not None else 1.0)
    if not args.polygon:
        raise UsageError("--cage polygon needs --polygon FILE")
    return Cage.from_polygon(_polygon(_vertices(_read_json(args.polygon))))


def cmd_worm_fit(args):
    from .cages import Worm, fit, placed_worm

    cage = _cage(args)
    worm = Worm.from_points(_vertices(_read_json(args.input)))
    budget = args.budget if args.budget_set else 720
    f = fit(worm, cage, budget)
    report = {"cage": cage.to_json(), "found": f.found, "certified": f.certified, "margin": f.margin,
              "budget": budget}
    if f.found:
        m = f.motion
        report["motion"] = {"theta": m.theta, "tx": float(m.tx), "ty": float(m.ty)}
        report["placed"] = placed_worm(worm, m).array()
    if args.svg:
        from .svg import Figure

        fig = Figure().polygon(cage.outline())
        pts = placed_worm(worm, f.motion).array() if f.found else worm.array()
        fig.polyline(pts, stroke="#c03020", width=2)
        fig.save(args.svg)
    _emit(args, report)
    return EXIT_OK if f.found else EXIT_NEGATIVE


def cmd_worm_sweep(args):
    from .cages import random_worm, sweep, three_segment_worms

    cage = _cage(args)
    if args.family == "three-seg":
        family = three_segment_worms(args.grid)
    else:
        family = [random_worm(args.seed + i, args.segments) for i in range(args.count)]
    budget = args.budget if args.budget_set else 720
    report = sweep(cage, family, budget)
    report.update({"family": args.family, "budget": budget})
    _emit(args, report)
    return EXIT_OK if report["accommodated"] == report["worms"] else EXIT_NEGATIVE


def cmd_worm_area(args):
    from .cages import cage_area

    cage = _cage(args)
    _emit(args, {"cage": cage.to_json(), "area": float(cage_area(cage))})
    return EXIT_OK


# sofa

def _sofa_frames(directory, shape, plan, frames):
    from .svg import Figure

    out = Path(directory)
    out.mkdir(parents=True, exist_ok=True)
    hall = np.array([[1, 1], [-3, 1], [-3, 0], [0, 0], [0, -3], [1, -3]], dtype=float)
    idx = np.linspace(0, len(plan.samples) - 1, max(2, frames)).round().astype(int)
    for k, i in enumerate(idx):
        m = plan.samples[i][1]
        fig = Figure().polygon(hall, stroke="#333")
        fig.polygon(m.apply_array(shape.array()), stroke="#2060c0", fill="#a0c0f0", opacity=0.8)
        fig.save(out / f"frame_{k:03d}.svg")


def cmd_sofa_verify(args):
    from .sofa import MotionPlan, SofaShape, sofa_report

    shape = SofaShape.from_json(_read_json(args.shape))
    plan = MotionPlan.from_json(_read_json(args.plan))
    report = sofa_report(shape, plan, args.step)
    if args.svg:
        _sofa_frames(args.svg, shape, plan, args.frames)
    _emit(args, report)
    return EXIT_OK if report["valid"] and report["traversal"] else EXIT_NEGATIVE


def cmd_sofa_hammersley(args):
    from .sofa import hammersley_sofa, sofa_report

    shape, plan = hammersley_sofa(args.tess, args.samples)
    report = sofa_report(shape, plan, args.step)
    report["tess"] = args.tess
    if args.save_shape:
        Path(args.save_shape).write_text(json.dumps(_jsonable(shape.to_json())) + "\n")
    if args.save_plan:
        Path(args.save_plan).write_text(json.dumps(_jsonable(plan.to_json())) + "\n")
    if args.svg:
        _sofa_frames(args.svg, shape, plan, args.frames)
    _emit(args, report)
    return EXIT_OK if report["valid"] and report["traversal"] else EXIT_NEGATIVE


# forest

def _path(args_path):
    from .forest import EscapePath

    return EscapePath.from_points(_vertices(_read_json(args_path)))


def _forest(data):
    from .forest import Forest

    if isinstance(data, dict) and data.get("kind") == "strip":
        return Forest.strip(float(data["width"]))
    return Forest.from_polygon(_polygon(_vertices(data)))


def cmd_forest_certify_strip(args):
    from .forest import strip_escape_certifies
    from .geom import Point, min_width
    from .placement import densify

    p = _path(args.path)
    ok = strip_escape_certifies(p, args.width)
    width = min_width([Point(*q) for q in densify(p.array(), 4)])
    _emit(args, {"width": args.width, "min_width": width, "certified": ok, "length": p.length})
    return EXIT_OK if ok else EXIT_NEGATIVE


def cmd_forest_fat(args):
    from .forest import is_fat_forest

    f = _forest(_read_json(args.input))
    tol = args.tol if args.tol is not None else 1e-9
    L = is_fat_forest(f, tol)
    _emit(args, {"fat": L is not None, "L": L, "tol": tol})
    return EXIT_OK if L is not None else EXIT_NEGATIVE


def cmd_forest_falsify(args):
    from .forest import escape_falsify

    f = _forest(_read_json(args.forest))
    p = _path(args.path)
    trap = escape_falsify(f, p, args.samples)
    report = {"trapped": trap is not None, "samples": args.samples, "length": p.length}
    if trap is not None:
        report["motion"] = {"theta": trap.motion.theta, "tx": float(trap.motion.tx), "ty": float(trap.motion.ty)}
        report["margin"] = trap.margin
    if args.svg:
        from .svg import Figure

        fig = Figure()
        if f.kind == "polygon":
            fig.polygon(f.polygon.array())
        pts = trap.motion.apply_array(p.array()) if trap else p.array()
        if f.kind == "strip":
            lo, hi = pts[:, 0].min() - 1, pts[:, 0].max() + 1
            fig.polyline([[lo, 0], [hi, 0]]).polyline([[lo, f.width], [hi, f.width]])
        fig.polyline(pts, stroke="#c03020", width=2)
        fig.save(args.svg)
    _emit(args, report)
    return EXIT_NEGATIVE if trap is not None else EXIT_OK


# squares

def cmd_square_find(args):
    from .inscribed_square import ClosedCurve, square_search, verify_candidate

    curve = ClosedCurve(_vertices(_read_json(args.input)))
    tol = args.tol if args.tol is not None else 1e-6
    budget = args.budget
    res = square_search(curve, args.grid, tol, budget)
    cands = res.candidates
    report = {
        "grid": args.grid,
        "tol": tol,
        "found": len(cands),
        "family_detected": res.family_detected,
        "passing_offsets": res.passing_offsets,
        "verified": all(verify_candidate(curve, c, tol) for c in cands),
        "candidates": [c.to_json() for c in cands[:args.limit]],
    }
    if args.svg:
        from .svg import Figure

        fig = Figure().polygon(curve.vertices)
        for c in cands[:args.limit]:
            fig.polygon(np.array(c.vertices), stroke="#c03020")
        fig.save(args.svg)
    _emit(args, report)
    return EXIT_OK if cands else EXIT_NEGATIVE


def cmd_fixtures_path(args):
    print(str(resources.files("planelab.data")))
    return EXIT_OK


def cmd_fixtures_list(args):
    names = sorted(p.name for p in resources.files("planelab.data").iterdir() if p.name.endswith(".json"))
    _emit(args, {"fixtures": names})
    return EXIT_OK


class _Parser(argparse.ArgumentParser):
    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_USAGE, f"{self.prog}: error: {message}\n")


def _common() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(add_help=False)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--tol", type=float, default=None, help="tolerance (default depends on the command; 1e-9 base)")
    p.add_argument("--budget", type=int, default=None)
    p.add_argument("--out", help="write the JSON report here instead of stdout")
    p.add_argument("--svg", help="also write an SVG figure (a directory for sofa frames)")
    p.add_argument("--precision-bits", type=int, default=128)
    return p


def _cage_flags(p):
    p.add_argument("--cage", choices=["disk", "rhombus", "sector", "square", "polygon"], default="rhombus")
    p.add_argument("--diameter", type=float)
    p.add_argument("--d1", type=float)
    p.add_argument("--d2", type=float)
    p.add_argument("--angle", type=float, help="sector angle in degrees (default 30)")
    p.add_argument("--radius", type=float)
    p.add_argument("--side", type=float)
    p.add_argument("--polygon", help="JSON polygon for --cage polygon")


def build_parser() -> argparse.ArgumentParser:
    common = _common()
    ap = _Parser(prog="planelab", description="Verify/search pipelines for open plane-geometry problems.")
    ap.add_argument("--version", action="version", version=f"planelab {__version__}")
    top = ap.add_subparsers(dest="command", required=True, parser_class=_Parser)

    def leaf(group, name, fn, help_text):
        p = group.add_parser(name, parents=[common], help=help_text)
        p.set_defaults(fn=fn)
        return p

    kobon = top.add_parser("kobon", help="line arrangements and Kobon triangles").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = leaf(kobon, "count", cmd_kobon_count, "count Kobon triangles of a line set")
    p.add_argument("--in", dest="input")
    p.add_argument("--fixture", type=int, help="use the bundled configuration with N lines")
    p = leaf(kobon, "fp", cmd_kobon_fp, "Furedi-Palasti construction")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--lines", action="store_true", help="include the line coefficients")
    p = leaf(kobon, "bounds", cmd_kobon_bounds, "lower and upper bounds for K(n)")
    p.add_argument("--n", type=int, required=True)
    p.add_argument("--mod6", action="store_true", help="apply the n = 0, 2 mod 6 refinement")

    pack = top.add_parser("pack", help="unit circles in equilateral triangles").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = leaf(pack, "verify", cmd_pack_verify, "check a packing instance")
    p.add_argument("--in", dest="input", required=True)
    p = leaf(pack, "optimize", cmd_pack_optimize, "search for a small triangle")
    p.add_argument("--n", type=int, required=True)
    p = leaf(pack, "erdos-oler", cmd_pack_erdos_oler, "compare sides for T(k) and T(k) - 1 circles")
    p.add_argument("--k", type=int, required=True)

    worm = top.add_parser("worm", help="worms and cages").add_subparsers(dest="sub", required=True,
                                                                        parser_class=_Parser)
    p = leaf(worm, "fit", cmd_worm_fit, "place one worm in a cage")
    p.add_argument("--in", dest="input", required=True)
    _cage_flags(p)
    p = leaf(worm, "sweep", cmd_worm_sweep, "fit a family of worms")
    _cage_flags(p)
    p.add_argument("--family", choices=["three-seg", "random"], default="three-seg")
    p.add_argument("--grid", type=int, default=10)
    p.add_argument("--count", type=int, default=200)
    p.add_argument("--segments", type=int, default=20)
    p = leaf(worm, "area", cmd_worm_area, "cage area")
    _cage_flags(p)

    sofa = top.add_parser("sofa", help="moving sofas").add_subparsers(dest="sub", required=True,
                                                                     parser_class=_Parser)
    p = leaf(sofa, "verify", cmd_sofa_verify, "check a motion plan")
    p.add_argument("--shape", required=True)
    p.add_argument("--plan", required=True)
    p.add_argument("--step", type=float)
    p.add_argument("--frames", type=int, default=40)
    p = leaf(sofa, "hammersley", cmd_sofa_hammersley, "build and check Hammersley's sofa")
    p.add_argument("--tess", type=float, default=1e-4)
    p.add_argument("--samples", type=int, default=1000)
    p.add_argument("--step", type=float)
    p.add_argument("--frames", type=int, default=40)
    p.add_argument("--save-shape")
    p.add_argument("--save-plan")

    forest = top.add_parser("forest", help="escape paths from forests").add_subparsers(
        dest="sub", required=True, parser_class=_Parser)
    p = leaf(forest, "certify-strip", cmd_forest_certify_strip, "min-width certificate for a strip")
    p.add_argument("--path", required=True)
    p.add_argument("--width", type=float, required=True)
    p = leaf(forest, "fat", cmd_forest_fat, "fat-forest test")
    p.add_argument("--in", dest="input", required=True)
    p = leaf(forest, "falsify", cmd_forest_falsify, "search for a trapping placement")
    p.add_argument("--forest", required=True)
    p.add_argument("--path", required=True)
    p.add_argument("--samples", type=int, default=360)

    square = top.add_parser("square", help="inscribed squares").add_subparsers(dest="sub", required=True,
                                                                              parser_class=_Parser)
    p = leaf(square, "find", cmd_square_find, "find squares inscribed in a closed polygon")
    p.add_argument("--in", dest="input", required=True)
    p.add_argument("--grid", type=int, default=64)
    p.add_argument("--limit", type=int, default=50, help="candidates listed in the report")

    fixtures = top.add_parser("fixtures", help="bundled data").add_subparsers(dest="sub", required=True,
                                                                             parser_class=_Parser)
    leaf(fixtures, "path", cmd_fixtures_path, "print the fixture directory")
    leaf(fixtures, "list", cmd_fixtures_list, "list bundled fixtures")
    return ap


def run(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if isinstance(exc.code, int) else EXIT_USAGE
    args.budget_set = args.budget is not None
    if args.budget is None:
        args.budget = 100000
    if args.precision_bits < 64:
        print("planelab: error: --precision-bits must be >= 64", file=sys.stderr)
        return EXIT_USAGE
    try:
        return args.fn(args)
    except UsageError as exc:
        print(f"planelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (KeyError, TypeError) as exc:
        print(f"planelab: error: malformed input: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except ValueError as exc:
        print(f"planelab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (ArithmeticError, RuntimeError, np.linalg.LinAlgError) as exc:
        print(f"planelab: numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except Exception as exc:  # noqa: BLE001  any other fault is reported as internal
        print(f"planelab: internal failure: {type(exc).__name__}: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
