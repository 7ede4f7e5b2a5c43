"""Command-line interface.

Subcommands
-----------
eval    evaluate the heat kernel at one point (one row per time value)
grid    evaluate over a coordinate lattice (header + one row per point)
verify  run the verification suite; exit 0 iff every residual passes
popp    growth vector / Popp density / Laplacian coefficients from a frame file
info    print the eigenvalue tables of the group duals

Exit codes: 0 success, 1 numeric/accuracy failure (JSON error on stderr),
2 usage error.  ``HYPOHEAT_THREADS`` caps the grid worker-thread count.
All floating-point output uses 17 significant digits and a fixed evaluation
order, so repeated runs are byte-identical.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import verify as verify_mod
from .frameio import load_frame_file
from .groups import GROUP_TAGS, element_from_point
from .kernels import kernel
from .lie import growth_vector, laplacian_coeffs_fd, popp_density
from .policy import DEFAULT_POLICY, AccuracyError, InputError
from .specfun import mathieu_spectrum

_POINT_DIMS = {"h2": 3, "su2": 4, "so3": 3, "sl2": 4, "se2": 3}


def _fmt(v):
    return f"{float(v):.17g}"


def _policy_from_args(args):
    policy = DEFAULT_POLICY
    if getattr(args, "tol", None) is not None:
        policy = policy.with_(abs_tol=args.tol)
    if getattr(args, "lambda_max", None) is not None:
        policy = policy.with_(spectral_box=args.lambda_max)
    if getattr(args, "series_cut", None) is not None:
        policy = policy.with_(series_cut=args.series_cut)
    return policy


def _parse_point(text, tag=None):
    coords = [float(c) for c in text.replace(",", " ").split()]
    if tag is not None and len(coords) != _POINT_DIMS[tag]:
        raise InputError(f"{tag} point needs {_POINT_DIMS[tag]} coordinates, "
                         f"got {len(coords)}")
    return coords


def _parse_times(text):
    ts = [float(t) for t in text.split(",")]
    if not ts or any(t <= 0 for t in ts):
        raise InputError("--time values must be positive")
    return ts


def _parse_range(text):
    parts = text.split(":")
    if len(parts) != 4:
        raise InputError("--range must be DIM:LO:HI:N")
    dim = int(parts[0])
    lo, hi = float(parts[1]), float(parts[2])
    n = int(parts[3])
    if dim < 1 or n < 1:
        raise InputError("--range needs DIM >= 1 and N >= 1")
    return dim - 1, np.linspace(lo, hi, n)


def _emit(text, out):
    if out:
        with open(out, "w", encoding="utf-8") as fh:
            fh.write(text)
    else:
        sys.stdout.write(text)


def _cmd_eval(args):
    policy = _policy_from_args(args)
    coords = _parse_point(args.point, args.group)
    g = element_from_point(args.group, coords)
    rows = []
    for t in _parse_times(args.time):
        res = kernel(args.group, g, t, policy)
        rows.append({"group": args.group, "coords": coords, "t": t,
                     "value": res.value, "imag_residual": res.imag_residual,
                     "tail_estimate": res.tail_estimate})
    if args.format == "json":
        text = json.dumps(rows if len(rows) > 1 else rows[0],
                          indent=2, sort_keys=True) + "\n"
    else:
        header = ["group"] + [f"c{i+1}" for i in range(len(coords))] \
            + ["t", "value", "imag_residual", "tail_estimate"]
        lines = [",".join(header)]
        for r in rows:
            lines.append(",".join([r["group"]] + [_fmt(c) for c in r["coords"]]
                                  + [_fmt(r["t"]), _fmt(r["value"]),
                                     _fmt(r["imag_residual"]),
                                     _fmt(r["tail_estimate"])]))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _thread_count():
    env = os.environ.get("HYPOHEAT_THREADS")
    if env:
        n = int(env)
        if n < 1:
            raise InputError("HYPOHEAT_THREADS must be >= 1")
        return n
    return min(8, os.cpu_count() or 1)


def _cmd_grid(args):
    policy = _policy_from_args(args)
    base = _parse_point(args.point, args.group) if args.point \
        else [0.0] * _POINT_DIMS[args.group]
    if len(base) != _POINT_DIMS[args.group]:
        raise InputError(f"base point needs {_POINT_DIMS[args.group]} coordinates")
    axes = [_parse_range(r) for r in args.range]
    for dim, _ in axes:
        if dim >= len(base):
            raise InputError(f"--range dimension {dim + 1} out of bounds")
    ts = _parse_times(args.time)
    if len(ts) != 1:
        raise InputError("grid takes a single --time value")
    t = ts[0]

    grids = [vals for _, vals in axes]
    shape = [v.size for v in grids]
    npts = int(np.prod(shape)) if grids else 1
    points = []
    for flat in range(npts):
        coords = list(base)
        if grids:
            idx = np.unravel_index(flat, shape)
            for (dim, vals), i in zip(axes, idx):
                coords[dim] = float(vals[i])
        points.append(coords)

    def work(coords):
        g = element_from_point(args.group, coords)
        res = kernel(args.group, g, t, policy)
        return res.value, res.tail_estimate

    with ThreadPoolExecutor(max_workers=_thread_count()) as pool:
        results = list(pool.map(work, points))

    header = ["group"] + [f"c{i+1}" for i in range(len(base))] \
        + ["t", "value", "tail_estimate"]
    if args.format == "json":
        rows = [{"group": args.group, "coords": c, "t": t,
                 "value": v, "tail_estimate": tail}
                for c, (v, tail) in zip(points, results)]
        text = json.dumps(rows, indent=2, sort_keys=True) + "\n"
    else:
        lines = [",".join(header)]
        for c, (v, tail) in zip(points, results):
            lines.append(",".join([args.group] + [_fmt(x) for x in c]
                                  + [_fmt(t), _fmt(v), _fmt(tail)]))
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def _cmd_verify(args):
    policy = _policy_from_args(args)
    reports = verify_mod.run_suite(policy, quick=not args.full)
    lines = []
    for r in reports:
        status = "PASS" if r.passed else "FAIL"
        lines.append(f"{status}  {r.name}  value={_fmt(r.value)}  "
                     f"tol={_fmt(r.tolerance)}")
    text = "\n".join(lines) + "\n"
    if args.format == "json":
        text = verify_mod.reports_to_json(reports) + "\n"
    _emit(text, args.out)
    return 0 if all(r.passed for r in reports) else 1


def _cmd_popp(args):
    if not args.frame_file:
        raise InputError("popp requires --frame-file")
    ff = load_frame_file(args.frame_file)
    coords = _parse_point(args.point)
    if len(coords) != ff.dim:
        raise InputError(f"point needs {ff.dim} coordinates for this frame file")
    policy = _policy_from_args(args)
    data = ff.frame_at(coords)
    gv = growth_vector(data)
    rho = popp_density(data)
    coeffs = laplacian_coeffs_fd(ff.frame_at, coords, step=policy.fd_step)
    payload = {"frame_file": args.frame_file, "point": coords,
               "growth_vector": list(gv), "popp_density": rho,
               "laplacian_coefficients": [float(c) for c in coeffs]}
    if args.format == "json":
        text = json.dumps(payload, indent=2, sort_keys=True) + "\n"
    else:
        text = (f"growth_vector: {' '.join(str(d) for d in gv)}\n"
                f"popp_density: {_fmt(rho)}\n"
                "laplacian_coefficients: "
                + " ".join(_fmt(c) for c in coeffs) + "\n")
    _emit(text, args.out)
    return 0


def _info_tables(tags):
    out = {}
    for tag in tags:
        if tag == "h2":
            out[tag] = {
                "dual": "lambda > 0 (Plancherel lambda dlambda / (2 pi^2))",
                "eigenvalues": "continuous; harmonic-oscillator levels "
                               "-(2k+1)|lambda|, k = 0, 1, ...",
            }
        elif tag == "su2":
            table = {str(n): [k * k - k * n - n / 2.0 for k in range(n + 1)]
                     for n in range(5)}
            out[tag] = {"dual": "level n = 0, 1, ... (multiplicity n+1)",
                        "eigenvalues k^2 - k n - n/2": table}
        elif tag == "so3":
            table = {str(r): [s * s - r * (r + 1.0) for s in range(-r, r + 1)]
                     for r in range(4)}
            out[tag] = {"dual": "integer spin r = 0, 1, ...",
                        "eigenvalues s^2 - r(r+1)": table}
        elif tag == "sl2":
            table = {str(n): [-(n + 2 * m * n + m * m) for m in range(5)]
                     for n in (1.0, 1.5, 2.0)}
            out[tag] = {
                "dual": "principal series (j, v) and discrete series n >= 1",
                "principal eigenvalues": "-((m+j)^2 + v^2 + 1/4)",
                "discrete eigenvalues -(n + 2mn + m^2)": table,
            }
        elif tag == "se2":
            lams = (1.0, 2.0, 5.0)
            table = {}
            for lam in lams:
                basis = mathieu_spectrum(0.25 * lam * lam, 4)
                evs = [-0.5 * lam * lam - basis.eigenvalue("ce", n)
                       for n in range(5)]
                table[_fmt(lam)] = evs
            out[tag] = {"dual": "lambda > 0 (Plancherel lambda dlambda)",
                        "eigenvalues -lambda^2/2 - a_n(lambda^2/4)": table}
    return out


def _cmd_info(args):
    tags = [args.group] if args.group else list(GROUP_TAGS)
    tables = _info_tables(tags)
    if args.format == "json":
        text = json.dumps(tables, indent=2, sort_keys=True) + "\n"
    else:
        lines = []
        for tag, info in tables.items():
            lines.append(f"[{tag}]")
            for k, v in info.items():
                if isinstance(v, dict):
                    lines.append(f"  {k}:")
                    for key in sorted(v):
                        lines.append("    " + key + ": "
                                     + " ".join(_fmt(x) for x in v[key]))
                else:
                    lines.append(f"  {k}: {v}")
        text = "\n".join(lines) + "\n"
    _emit(text, args.out)
    return 0


def build_parser():
    parser = argparse.ArgumentParser(
        prog="hypoheat",
        description="Hypoelliptic heat kernels on unimodular 3D Lie groups.")
    sub = parser.add_subparsers(dest="command", required=True)

    def common(p, group=True):
        if group:
            p.add_argument("--group", required=True, choices=GROUP_TAGS)
        p.add_argument("--tol", type=float, help="absolute truncation tolerance")
        p.add_argument("--lambda-max", type=float, dest="lambda_max",
                       help="cut for the continuous duals")
        p.add_argument("--series-cut", type=int, dest="series_cut",
                       help="cut for the discrete duals")
        p.add_argument("--format", choices=("csv", "json"), default="csv")
        p.add_argument("--out", help="output path (default stdout)")

    p = sub.add_parser("eval", help="evaluate the kernel at one point")
    common(p)
    p.add_argument("--point", required=True,
                   help="comma-separated element coordinates")
    p.add_argument("--time", required=True, help="t or comma-separated t list")
    p.set_defaults(fn=_cmd_eval)

    p = sub.add_parser("grid", help="evaluate the kernel over a lattice")
    common(p)
    p.add_argument("--point", help="base point (unswept coordinates)")
    p.add_argument("--time", required=True)
    p.add_argument("--range", action="append", required=True,
                   metavar="DIM:LO:HI:N",
                   help="sweep coordinate DIM (1-based) over N points")
    p.set_defaults(fn=_cmd_grid)

    p = sub.add_parser("verify", help="run the verification suite")
    common(p, group=False)
    p.add_argument("--full", action="store_true",
                   help="include the slow checks")
    p.set_defaults(fn=_cmd_verify)

    p = sub.add_parser("popp", help="Popp density and Laplacian coefficients")
    common(p, group=False)
    p.add_argument("--frame-file", required=True, dest="frame_file")
    p.add_argument("--point", required=True)
    p.set_defaults(fn=_cmd_popp)

    p = sub.add_parser("info", help="eigenvalue tables of the group duals")
    common(p, group=False)
    p.add_argument("--group", choices=GROUP_TAGS)
    p.set_defaults(fn=_cmd_info)
    return parser


def main(argv=None):
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.fn(args)
    except InputError as exc:
        sys.stderr.write(json.dumps(
            {"error": "input", "message": str(exc)}) + "\n")
        return 2
    except AccuracyError as exc:
        sys.stderr.write(json.dumps(
            {"error": "accuracy", "message": str(exc),
             "tail_estimate": exc.tail_estimate}) + "\n")
        return 1
    except (FloatingPointError, np.linalg.LinAlgError) as exc:
        sys.stderr.write(json.dumps(
            {"error": "numeric", "message": str(exc)}) + "\n")
        return 1


if __name__ == "__main__":
    sys.exit(main())
