"""The fqincidence command line.

Exit codes: 0 success, 2 when the run only tripped hypothesis flags,
1 on errors or failed checks.  Every subcommand accepts --config FILE with
flat key=value lines mirroring its long flags; explicit flags win.
"""

import argparse
import sys
from pathlib import Path

from . import apps, bounds, fileio, harness, reductions, setsys
from .errors import ToolkitError
from .ffield import make_field
from .geom import count_incidences

EXIT_OK = 0
EXIT_ERROR = 1
EXIT_HYPOTHESIS = 2


def _read_config(path) -> dict[str, str]:
    out = {}
    for ln in Path(path).read_text(encoding="utf-8").splitlines():
        ln = ln.strip()
        if not ln or ln.startswith("#"):
            continue
        if "=" not in ln:
            raise ToolkitError(f"config line without '=': {ln!r}")
        key, val = ln.split("=", 1)
        out[key.strip()] = val.strip()
    return out


def _merge_config(args: argparse.Namespace) -> argparse.Namespace:
    if not getattr(args, "config", None):
        return args
    file_vals = _read_config(args.config)
    for key, raw in file_vals.items():
        attr = key.replace("-", "_")
        if not hasattr(args, attr):
            raise ToolkitError(f"config key {key!r} does not match a flag")
        if getattr(args, attr) is None:
            typ = _ARG_TYPES.get(attr, str)
            setattr(args, attr, typ(raw))
    return args


_ARG_TYPES = {
    "p": int,
    "n": int,
    "q": int,
    "max_d": int,
    "trials": int,
    "seed": int,
    "alpha": float,
}


def _require(args, *names) -> None:
    missing = [n for n in names if getattr(args, n) is None]
    if missing:
        raise ToolkitError(f"missing required option(s): {', '.join(missing)}")


def cmd_field_info(args) -> int:
    _require(args, "p", "n")
    fs = make_field(args.p, args.n)
    poly = " + ".join(
        (f"x^{i}" if c == 1 else f"{c}*x^{i}") if i else str(c)
        for i, c in enumerate(fs.modulus)
        if c
    )
    print(f"q = {fs.q} = {fs.p}^{fs.n}")
    print(f"modulus = {list(fs.modulus)}  ({poly})")
    print(f"q mod 4 = {fs.q_mod4}")
    return EXIT_OK


def cmd_count(args) -> int:
    _require(args, "points")
    fs, pts = fileio.load_points(args.points)
    if bool(args.lines) == bool(args.planes):
        raise ToolkitError("pass exactly one of --lines or --planes")
    if args.lines:
        fs2, flats = fileio.load_lines(args.lines)
    else:
        fs2, flats = fileio.load_planes(args.planes)
    if fs != fs2:
        raise ToolkitError("point and flat files use different fields")
    res = count_incidences(fs, pts, flats, args.method)
    print(f"incidences = {res.count}  (method={res.method}, "
          f"points={len(pts)}, flats={len(flats)})")
    return EXIT_OK


def cmd_vcdim(args) -> int:
    _require(args, "points", "planes")
    fs, pts = fileio.load_points(args.points)
    fs2, planes = fileio.load_planes(args.planes)
    if fs != fs2:
        raise ToolkitError("point and plane files use different fields")
    system = setsys.neighborhood_system(fs, pts, planes, args.side)
    res = setsys.vc_dimension(system, args.max_d)
    suffix = " (saturated: a max-size shattered set exists)" if res.saturated else ""
    print(f"vc_dimension = {res.dimension}{suffix}")
    print(f"ground = {system.ground_size}, members = {len(system.family)}")
    return EXIT_OK


def cmd_reduce(args) -> int:
    _require(args, "lines", "a")
    fs, lines = fileio.load_lines(args.lines)
    fs2, a_pts = fileio.load_points(args.a)
    if fs != fs2:
        raise ToolkitError("line and A files use different fields")
    a_set = [p[0] for p in a_pts]
    out = reductions.build_point_plane_sets(fs, lines, a_set)
    inc = count_incidences(fs, out.points3, out.planes3, "oracle").count
    print(f"lines = {len(lines)}, |A| = {len(a_set)}, k_bound = {out.k_bound}")
    print(f"energy = {out.solution_count}, incidence check = {inc}, "
          f"identity {'holds' if inc == out.solution_count else 'FAILS'}")
    if args.b:
        fs3, b_pts = fileio.load_points(args.b)
        if fs != fs3:
            raise ToolkitError("B file uses a different field")
        rep = reductions.cs_upper(fs, lines, a_set, [p[0] for p in b_pts])
        print(f"cs upper = {rep.value:.6g}, actual = {rep.actual}, "
              f"holds = {rep.holds}")
    return EXIT_OK


def cmd_distance(args) -> int:
    _require(args, "e", "f")
    fs, E = fileio.load_points(args.e)
    fs2, F = fileio.load_points(args.f)
    if fs != fs2:
        raise ToolkitError("E and F files use different fields")
    rep = apps.full_distance_report(fs, E, F)
    print(f"|distance set| = {len(rep.distance_set)}, zero pairs = {rep.zero_pairs}")
    print(f"T = {rep.T}, chain holds = {rep.chain_holds}")
    violated = not rep.zero_hypothesis_ok
    if violated:
        print("hypothesis violated: zero pairs exceed |E||F|/2")
    k = rep.k_bisector
    print(f"bisector collinear k = {k}")
    if args.alpha is not None:
        low = bounds.eval_distance_dot_lower(fs.q, args.alpha, len(E), k)
        size_ok = len(F) > 2 * k * fs.q**args.alpha
        print(f"lower-bound branch {low.bound_name}: value = {low.value:.6g}, "
              f"measured/value = {len(rep.distance_set) / low.value:.4g}")
        if k == 0:
            print("note: k = 0 leaves the size condition on |F| unconstrained")
        elif not size_ok:
            violated = True
            print(f"hypothesis violated: |F| = {len(F)} <= 2*k*q^alpha "
                  f"= {2 * k * fs.q ** args.alpha:.6g}")
    return EXIT_HYPOTHESIS if violated else EXIT_OK


def cmd_dotprod(args) -> int:
    _require(args, "e", "f")
    fs, E = fileio.load_points(args.e)
    fs2, F = fileio.load_points(args.f)
    if fs != fs2:
        raise ToolkitError("E and F files use different fields")
    rep = apps.dot_product_set(fs, E, F)
    print(f"|dot set| = {len(rep.dot_set)}, orthogonal pairs = {rep.orthogonal_pairs}")
    print(f"best nonzero value = {rep.best_lambda} "
          f"(count {rep.lambda_counts.get(rep.best_lambda, 0)})")
    if not rep.orthogonal_hypothesis_ok:
        print("hypothesis violated: orthogonal pairs exceed |E||F|/2")
        return EXIT_HYPOTHESIS
    return EXIT_OK


def cmd_traces(args) -> int:
    _require(args, "u", "uprime")
    fs, U = fileio.load_points(args.u)
    fs2, Up = fileio.load_points(args.uprime)
    if fs != fs2:
        raise ToolkitError("U and U' files use different fields")
    rep = apps.trace_pairs(fs, U, Up)
    print(f"classes = {rep.classes}, pair count = {rep.pair_count}")
    print(f"cs floor = {rep.cs_lower:.6g}, bound |U|^2/|U'|^3 = {rep.bound_value:.6g}, "
          f"ratio = {rep.ratio_vs_bound:.6g}")
    return EXIT_OK


def cmd_suite(args) -> int:
    _require(args, "name", "q")
    p, n = harness.split_prime_power(args.q)
    cfg = harness.ExperimentConfig(
        p=p,
        n=n,
        suite=args.name,
        alpha=args.alpha if args.alpha is not None else 0.5,
        trials=args.trials if args.trials is not None else 10,
        seed=args.seed if args.seed is not None else 0,
        out=args.out,
    )
    result = harness.run_suite(cfg)
    print(f"suite {result.suite}: {len(result.rows)} rows, "
          f"{result.failures} failures, {result.violations} hypothesis violations")
    if args.out:
        print(f"wrote {args.out}")
    return result.exit_code


def cmd_preset(args) -> int:
    _require(args, "name", "q", "out")
    pc = harness.preset(args.name, args.q, seed=args.seed or 0)
    fs = harness.field_for_order(args.q)
    outdir = Path(args.out)
    outdir.mkdir(parents=True, exist_ok=True)
    meta = [f"name={pc.name}", f"q={pc.q}", f"alpha={pc.alpha}", f"seed={pc.seed}"]
    for key, val in sorted(pc.sizes.items()):
        meta.append(f"size_{key}={val}")
    if pc.kind == "line":
        fileio.save_lines(outdir / "lines.txt", fs, pc.lines)
        fileio.save_points(outdir / "a.txt", fs, pc.a_set)
        fileio.save_points(outdir / "b.txt", fs, pc.b_set)
    else:
        fileio.save_points(outdir / "points.txt", fs, pc.points)
        fileio.save_planes(outdir / "planes.txt", fs, pc.planes)
    (outdir / "meta.txt").write_text("\n".join(meta) + "\n", encoding="utf-8")
    print(f"preset {pc.name} at q = {pc.q}: wrote {outdir}")
    for key, val in sorted(pc.sizes.items()):
        print(f"  {key} = {val}")
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="fqincidence",
        description="incidence experiments over finite fields",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def add(name, fn, /, **flags):
        sp = sub.add_parser(name)
        sp.set_defaults(fn=fn)
        sp.add_argument("--config", help="key=value file mirroring the flags")
        for flag, kw in flags.items():
            sp.add_argument(f"--{flag.replace('_', '-')}", **kw)
        return sp

    add("field-info", cmd_field_info, p={"type": int}, n={"type": int})
    add(
        "count",
        cmd_count,
        points={},
        lines={},
        planes={},
        method={"choices": ["oracle", "fast"], "default": "fast"},
    )
    add(
        "vcdim",
        cmd_vcdim,
        points={},
        planes={},
        side={"choices": ["by_point", "by_plane"], "default": "by_point"},
        max_d={"type": int, "default": 4},
    )
    add("reduce", cmd_reduce, lines={}, a={}, b={})
    add("distance", cmd_distance, e={}, f={}, alpha={"type": float})
    add("dotprod", cmd_dotprod, e={}, f={})
    add("traces", cmd_traces, u={}, uprime={})
    add(
        "suite",
        cmd_suite,
        name={"choices": list(harness.SUITE_NAMES)},
        q={"type": int},
        alpha={"type": float},
        trials={"type": int},
        seed={"type": int},
        out={},
    )
    add(
        "preset",
        cmd_preset,
        name={"choices": list(harness.PRESET_NAMES)},
        q={"type": int},
        seed={"type": int},
        out={},
    )
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        args = _merge_config(args)
        return args.fn(args)
    except ToolkitError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_ERROR


if __name__ == "__main__":
    sys.exit(main())
