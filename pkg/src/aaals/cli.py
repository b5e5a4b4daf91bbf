"""Command-line front end.

Subcommands
-----------
solve    run the scattering pipeline; writes diagnostics.json, solution.json,
         field.csv and residual.txt into --out
laplace  run a Laplace problem (modes: support, double)
study    source-count convergence sweep; writes study.csv and study.json
oracle   exact unit-disk scattered field on a grid, for cross-checking

Exit codes: 0 success, 2 solved with degraded accuracy (residual > 1e-4),
1 failure, 64 usage error.  All outputs are deterministic for fixed flags
and seed; timestamps go only into diagnostics.json.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
import time

import numpy as np

from .curves import CurveError, make_curve
from .conformal import ConformalMap, fit_map
from .mfs import IncidentField, eval_field
from .pipeline import (
    DEGRADED_RESIDUAL,
    LaplaceOptions,
    LaplaceProblem,
    ScatteringProblem,
    SolverOptions,
    convergence_study,
    exact_disk_scatter,
    fit_decay_rate,
    solve_laplace,
    solve_scattering,
)

EXIT_OK = 0
EXIT_FAIL = 1
EXIT_DEGRADED = 2
EXIT_USAGE = 64

_FMT = "%.17g"  # lossless decimal round-trip for doubles


class UsageError(Exception):
    pass


def _parse_incident(text: str, k: float) -> IncidentField:
    kind, _, rest = text.partition(":")
    kind = kind.strip().lower()
    params = {}
    if rest:
        for item in rest.split(","):
            key, sep, val = item.partition("=")
            if not sep:
                raise UsageError(f"malformed incident parameter {item!r}")
            params.setdefault(key.strip(), []).append(float(val))
    if kind == "plane":
        angle = params.get("angle", [0.0])[0]
        return IncidentField(k=k, kind="plane", angle=angle)
    if kind == "point":
        xs = params.get("x", [])
        ys = params.get("y", [])
        amps = params.get("amp", [])
        if not xs or len(xs) != len(ys):
            raise UsageError("point incident field needs matching x=,y= pairs")
        locs = tuple(complex(x, y) for x, y in zip(xs, ys))
        if amps and len(amps) != len(locs):
            raise UsageError("amp= count must match the x=,y= pairs")
        return IncidentField(
            k=k, kind="points", locations=locs, amplitudes=tuple(amps) or ()
        )
    raise UsageError(f"unknown incident kind {kind!r} (use plane: or point:)")


def _parse_grid(text: str, curve=None):
    """'nx,ny,xmin,xmax,ymin,ymax' or 'nx,ny,auto' (bounding box + 50%)."""
    parts = [p.strip() for p in str(text).split(",")]
    if len(parts) == 3 and parts[2] == "auto":
        nx, ny = int(parts[0]), int(parts[1])
        if curve is None:
            box = (-3.0, 3.0, -3.0, 3.0)
        else:
            p = curve.points(512)
            w = max(p.real.max() - p.real.min(), p.imag.max() - p.imag.min())
            pad = 0.5 * w
            box = (
                p.real.min() - pad,
                p.real.max() + pad,
                p.imag.min() - pad,
                p.imag.max() + pad,
            )
    elif len(parts) == 6:
        nx, ny = int(parts[0]), int(parts[1])
        box = tuple(float(v) for v in parts[2:])
    else:
        raise UsageError("grid must be 'nx,ny,auto' or 'nx,ny,xmin,xmax,ymin,ymax'")
    if nx < 2 or ny < 2:
        raise UsageError("grid resolution must be at least 2x2")
    return nx, ny, box


def _write_field_csv(path, nx, ny, box, values, mask):
    xmin, xmax, ymin, ymax = box
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    with open(path, "w") as fh:
        fh.write("x,y,re,im,mask\n")
        for iy, y in enumerate(ys):
            for ix, x in enumerate(xs):
                v = values[iy, ix]
                m = int(mask[iy, ix])
                if m:
                    fh.write((_FMT + "," + _FMT + ",nan,nan,1\n") % (x, y))
                else:
                    fh.write(
                        (_FMT + "," + _FMT + "," + _FMT + "," + _FMT + ",0\n")
                        % (x, y, v.real, v.imag)
                    )


def _field_grid(curve, nx, ny, box, evaluate):
    """Evaluate a field on the grid; interior cells masked with a sentinel."""
    xmin, xmax, ymin, ymax = box
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    flat = Z.ravel()
    if curve is not None:
        inside = curve.contains(flat).reshape(ny, nx)
    else:
        inside = (np.abs(Z) < 1.0).reshape(ny, nx)
    values = np.zeros((ny, nx), dtype=complex)
    ext = ~inside
    if ext.any():
        values[ext] = evaluate(Z[ext])
    return values, inside


def _json_default(o):
    if isinstance(o, (np.floating, np.integer)):
        return o.item()
    if isinstance(o, np.ndarray):
        return o.tolist()
    raise TypeError(f"cannot serialize {type(o)}")


def _cache_dir(args):
    path = args.cache or os.environ.get("AAALS_CACHE")
    return path


def _cached_map(curve, tol, cache_dir):
    if not cache_dir:
        return None, None
    os.makedirs(cache_dir, exist_ok=True)
    key = f"{curve.fingerprint()}-map-{tol:.3e}.json"
    path = os.path.join(cache_dir, key)
    if os.path.exists(path):
        with open(path) as fh:
            return ConformalMap.from_dict(json.load(fh)), path
    return None, path


def cmd_solve(args) -> int:
    curve = make_curve(args.curve)
    incident = _parse_incident(args.incident, args.k)
    options = SolverOptions(
        tol_circle=args.tol_circle,
        tol_map=args.tol_map,
        multipole_order=args.order,
        shrink=args.shrink,
    )
    cmap, cache_path = _cached_map(curve, args.tol_map, _cache_dir(args))
    if cmap is None and cache_path is not None:
        cmap = fit_map(curve, tol=args.tol_map)
        with open(cache_path, "w") as fh:
            json.dump(cmap.to_dict(), fh)
    t0 = time.time()
    sol, diag = solve_scattering(
        ScatteringProblem(curve, incident, options), cmap=cmap
    )
    if args.log_level != "quiet":
        print(
            f"solved: J={diag.source_count} N={diag.sample_count} "
            f"residual={diag.boundary_residual:.3e} ({time.time() - t0:.2f}s)"
        )
    os.makedirs(args.out, exist_ok=True)
    rec = diag.to_dict()
    rec["k"] = incident.k
    rec["incident"] = incident.to_dict()
    rec["curve"] = args.curve
    rec["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    with open(os.path.join(args.out, "diagnostics.json"), "w") as fh:
        json.dump(rec, fh, indent=1, default=_json_default)
    with open(os.path.join(args.out, "solution.json"), "w") as fh:
        json.dump(sol.to_dict(), fh, default=_json_default)
    nx, ny, box = _parse_grid(args.grid, curve)
    evaluate = lambda z: eval_field(sol, z, total=args.total)
    values, inside = _field_grid(curve, nx, ny, box, evaluate)
    _write_field_csv(os.path.join(args.out, "field.csv"), nx, ny, box, values, inside)
    with open(os.path.join(args.out, "residual.txt"), "w") as fh:
        fh.write((_FMT + "\n") % diag.boundary_residual)
    return EXIT_OK if diag.boundary_residual <= DEGRADED_RESIDUAL else EXIT_DEGRADED


_LAPLACE_DATA = {
    "resq": lambda z: np.real(z) ** 2,
    "zero": lambda z: np.zeros(np.shape(z)),
    "rez": lambda z: np.real(z),
    "harmonic2": lambda z: np.real(z**2),
}


def _sqrt_singular(z):
    # branch point just outside the unit circle; the cut runs radially outward
    z0 = 0.95 - 0.55j
    beta = -z0 / abs(z0)
    return np.real(np.sqrt((z - z0) / beta) * np.sqrt(beta))


_LAPLACE_DATA["sqrt_singular"] = _sqrt_singular


def cmd_laplace(args) -> int:
    curve = make_curve(args.curve)
    if args.data not in _LAPLACE_DATA:
        raise UsageError(
            f"unknown data {args.data!r}; known: {sorted(_LAPLACE_DATA)}"
        )
    mode = {"support": "support", "double": "double"}.get(args.mode)
    if mode is None:
        raise UsageError("mode must be 'support' or 'double'")
    problem = LaplaceProblem(
        curve=curve,
        boundary_data=_LAPLACE_DATA[args.data],
        side=args.side,
        mode=mode,
        options=LaplaceOptions(tol=args.tol),
    )
    sol, diag = solve_laplace(problem)
    if args.log_level != "quiet":
        print(f"laplace {args.mode}: residual={diag.boundary_residual:.3e}")
    os.makedirs(args.out, exist_ok=True)
    rec = diag.to_dict()
    rec["mode"] = args.mode
    rec["side"] = args.side
    rec["data"] = args.data
    rec["curve"] = args.curve
    rec["timestamp"] = time.strftime("%Y-%m-%dT%H:%M:%S")
    with open(os.path.join(args.out, "diagnostics.json"), "w") as fh:
        json.dump(rec, fh, indent=1, default=_json_default)
    with open(os.path.join(args.out, "solution.json"), "w") as fh:
        json.dump(
            {
                "poles": [[p.real, p.imag] for p in sol.poles],
                "coeffs": list(map(float, sol.coeffs)),
                "anchor": [sol.anchor.real, sol.anchor.imag],
                "side": sol.side,
                "double_poles": sol.double_poles,
                "poly_degree": sol.poly_degree,
            },
            fh,
            default=_json_default,
        )
    nx, ny, box = _parse_grid(args.grid, curve)
    mask_interior = args.side == "exterior"

    def evaluate(z):
        return np.asarray(sol(z), dtype=complex)

    xmin, xmax, ymin, ymax = box
    xs = np.linspace(xmin, xmax, nx)
    ys = np.linspace(ymin, ymax, ny)
    X, Y = np.meshgrid(xs, ys)
    Z = X + 1j * Y
    inside = curve.contains(Z.ravel()).reshape(ny, nx)
    masked = inside if mask_interior else ~inside
    values = np.zeros((ny, nx), dtype=complex)
    if (~masked).any():
        values[~masked] = evaluate(Z[~masked])
    _write_field_csv(os.path.join(args.out, "field.csv"), nx, ny, box, values, masked)
    with open(os.path.join(args.out, "residual.txt"), "w") as fh:
        fh.write((_FMT + "\n") % diag.boundary_residual)
    return EXIT_OK if diag.boundary_residual <= DEGRADED_RESIDUAL else EXIT_DEGRADED


def cmd_study(args) -> int:
    if not args.J_list.strip():
        raise UsageError("empty J list")
    try:
        J_list = [int(v) for v in args.J_list.split(",") if v.strip()]
    except ValueError as exc:
        raise UsageError(f"malformed J list: {exc}")
    if not J_list:
        raise UsageError("empty J list")
    curve = make_curve(args.curve)
    incident = _parse_incident(args.incident, args.k)
    rows = convergence_study(curve, incident, J_list)
    os.makedirs(args.out, exist_ok=True)
    with open(os.path.join(args.out, "study.csv"), "w") as fh:
        fh.write("J,residual\n")
        for J, res in rows:
            fh.write(("%d," + _FMT + "\n") % (J, res))
    summary = fit_decay_rate(rows)
    summary["rows"] = [[J, res] for J, res in rows]
    with open(os.path.join(args.out, "study.json"), "w") as fh:
        json.dump(summary, fh, indent=1, default=_json_default)
    if args.log_level != "quiet":
        print(f"study: slope={summary['slope']:.4f} r2={summary['r2']:.4f}")
    return EXIT_OK


def cmd_oracle(args) -> int:
    nx, ny, box = _parse_grid(args.grid)
    values, inside = _field_grid(
        None, nx, ny, box, lambda z: exact_disk_scatter(args.k, args.angle, z)
    )
    os.makedirs(args.out, exist_ok=True)
    _write_field_csv(os.path.join(args.out, "field.csv"), nx, ny, box, values, inside)
    with open(os.path.join(args.out, "oracle.json"), "w") as fh:
        json.dump(
            {"k": args.k, "angle": args.angle, "grid": [nx, ny, *box]},
            fh,
            default=_json_default,
        )
    return EXIT_OK


def _build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="aaals",
        description="Meshless sound-soft scattering and Laplace solvers with "
        "adaptive rational source placement",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    def common(p):
        p.add_argument("--out", default="out", help="output directory")
        p.add_argument("--cache", default=None, help="stage cache directory")
        p.add_argument(
            "--log-level", choices=("quiet", "info", "debug"), default="info"
        )
        p.add_argument("--grid", default="100,100,auto", help="nx,ny,box for field.csv")

    ps = sub.add_parser("solve", help="solve a scattering problem")
    ps.add_argument("--curve", required=True)
    ps.add_argument("--k", type=float, required=True)
    ps.add_argument("--incident", default="plane:angle=0")
    ps.add_argument("--order", type=int, default=2)
    ps.add_argument("--tol-circle", type=float, default=1e-6)
    ps.add_argument("--tol-map", type=float, default=1e-8)
    ps.add_argument("--shrink", type=float, default=0.3)
    group = ps.add_mutually_exclusive_group()
    group.add_argument("--total", action="store_true", help="write u_s - u_inc")
    group.add_argument("--scattered", dest="total", action="store_false")
    ps.set_defaults(total=False, func=cmd_solve)
    common(ps)

    pl = sub.add_parser("laplace", help="solve a Laplace problem")
    pl.add_argument("--curve", required=True)
    pl.add_argument("--mode", choices=("support", "double"), default="support")
    pl.add_argument("--side", choices=("interior", "exterior"), default="exterior")
    pl.add_argument("--data", required=True)
    pl.add_argument("--tol", type=float, default=3e-13)
    pl.set_defaults(func=cmd_laplace)
    common(pl)

    pt = sub.add_parser("study", help="convergence study over source counts")
    pt.add_argument("--curve", required=True)
    pt.add_argument("--k", type=float, required=True)
    pt.add_argument("--incident", default="plane:angle=0")
    pt.add_argument("--J-list", dest="J_list", default="")
    pt.set_defaults(func=cmd_study)
    common(pt)

    po = sub.add_parser("oracle", help="exact disk field on a grid")
    po.add_argument("--k", type=float, required=True)
    po.add_argument("--angle", type=float, default=0.0)
    po.set_defaults(func=cmd_oracle)
    common(po)
    return ap


def main(argv=None) -> int:
    ap = _build_parser()
    try:
        args = ap.parse_args(argv)
    except SystemExit as exc:
        return EXIT_USAGE if exc.code not in (0, None) else 0
    try:
        return args.func(args)
    except UsageError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        ap.print_usage(sys.stderr)
        return EXIT_USAGE
    except CurveError as exc:
        print(f"usage error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except Exception as exc:  # solver failure
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_FAIL


if __name__ == "__main__":
    sys.exit(main())
