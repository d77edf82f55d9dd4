"""Command-line front end.

Subcommands: profile, height, mesh, stc, decay, sweep, check.  All numeric
output uses 17 significant digits so files round-trip losslessly; identical
configurations produce byte-identical files.

Exit codes: 0 success, 2 parameter-domain error, 3 numerical
non-convergence, 4 check-suite failure.
"""

import argparse
import csv
import json
import sys

import numpy as np

from . import barrier as barrier_mod
from . import curvature, profile, stc
from .heights import height as height_of
from .heights import height_derivative, height_limit
from .ambient import BallPoint, Hyperplane
from .errors import DomainError, NonConvergedError
from .quadrature import QuadratureConfig

EXIT_OK = 0
EXIT_DOMAIN = 2
EXIT_NONCONVERGED = 3
EXIT_CHECK_FAILED = 4

SCHEMA_VERSION = 1


def _fmt(x: float) -> str:
    return f"{float(x):.17g}"


def _emit_json(payload: dict, out: str | None) -> None:
    payload = {"schema_version": SCHEMA_VERSION, **payload}
    text = json.dumps(payload, indent=2, sort_keys=True)
    if out is None or out == "-":
        sys.stdout.write(text + "\n")
    else:
        with open(out, "w") as fh:
            fh.write(text + "\n")


def _quad_config(args) -> QuadratureConfig:
    return QuadratureConfig(rel_tol=args.rel_tol, abs_tol=args.abs_tol)


def _add_quad_args(p: argparse.ArgumentParser) -> None:
    p.add_argument("--rel-tol", type=float, default=1e-10)
    p.add_argument("--abs-tol", type=float, default=1e-12)


# ---------------------------------------------------------------------------


def cmd_profile(args) -> int:
    cfg = _quad_config(args)
    grid = profile.default_grid(args.n, args.r, args.d, args.rho_max,
                                args.samples, rho_min=args.rho_min)
    curve = profile.sample_profile(
        args.n, args.r, args.d, grid, cfg,
        vertical_offset=args.offset, branch_sign=args.branch,
        half_graph_base=args.base,
    )
    tab = curvature.curvature_table(curve)
    meta = (
        f"# hrzero-profile n={curve.n} r={curve.r} d={_fmt(curve.d)} "
        f"regime={curve.regime.value} offset={_fmt(curve.vertical_offset)} "
        f"branch={curve.branch_sign}"
    )
    header = (
        ["rho", "lambda", "lambda_dot", "lambda_ddot", "k1", "k2"]
        + [f"H_{j}" for j in range(1, curve.n + 1)]
        + ["shape_norm", "N_vertical"]
    )
    with open(args.out, "w", newline="") as fh:
        fh.write(meta + "\n")
        writer = csv.writer(fh)
        writer.writerow(header)
        for i in range(len(curve)):
            row = [curve.rho[i], curve.lam[i], curve.lam_dot[i],
                   curve.lam_ddot[i], tab["k1"][i], tab["k2"][i],
                   *tab["H"][i], tab["shape_norm"][i], tab["N_vertical"][i]]
            writer.writerow([_fmt(v) for v in row])
    return EXIT_OK


def cmd_height(args) -> int:
    cfg = _quad_config(args)
    if args.d is None and args.a is None:
        raise DomainError("give --d or --a")
    if args.r >= args.n:
        raise DomainError("height requires r < n")
    if args.a is None and args.d is not None and args.d <= 1.0:
        _emit_json(
            {
                "n": args.n, "r": args.r, "d": args.d,
                "h": None, "total_height": None,
                "note": "infinite (d <= 1): the member is unbounded vertically",
            },
            args.out,
        )
        return EXIT_OK
    res = height_of(args.n, args.r, args.d, a=args.a, cfg=cfg)
    dh = height_derivative(args.n, args.r, res.a, cfg=cfg)
    _emit_json(
        {
            "n": res.n, "r": res.r, "d": res.d, "a": res.a,
            "h": res.h, "total_height": 2.0 * res.h,
            "dh_da": dh,
            "limit": height_limit(args.n, args.r),
            "quadrature_error_estimate": res.error_estimate,
        },
        args.out,
    )
    return EXIT_OK


def _mesh_from_args(args, cfg) -> stc.FermiMesh:
    rho_min = args.rho_min
    if rho_min is None:
        regime = profile.classify_regime(args.n, args.r, args.d)
        if regime is profile.Regime.TWO_SHEETS:
            a = profile.waist_radius(args.n, args.r, args.d)
            rho_min = a + 1e-6 * (1.0 + a)
        elif regime is profile.Regime.HALF_GRAPH:
            rho_min = 1e-4
        elif regime is profile.Regime.ENTIRE_GRAPH:
            rho_min = -args.rho_max
        else:
            rho_min = -args.rho_max
    return stc.build_fermi_mesh(
        args.n, args.r, args.d, (rho_min, args.rho_max), args.orbit_radius,
        (args.res_rho, args.res_orbit), cfg,
    )


def cmd_mesh(args) -> int:
    cfg = _quad_config(args)
    if args.format is None:
        args.format = "obj" if args.n == 2 else "csv"
    if args.format == "obj" and args.n != 2:
        raise DomainError("OBJ export is only defined for n = 2 surfaces")
    if args.res_rho < 2 or args.res_orbit < 2:
        raise DomainError("degenerate mesh resolution")
    if args.format == "obj":
        _write_obj(args, cfg)
        return EXIT_OK
    mesh = _mesh_from_args(args, cfg)
    vpath, epath = stc.dump_mesh_csv(mesh, args.out)
    sys.stdout.write(f"{vpath}\n{epath}\n")
    return EXIT_OK


def _write_obj(args, cfg) -> None:
    """Two-sheet strip surface for n = 2, watertight across the shared waist."""
    n, r, d = args.n, args.r, args.d
    if profile.classify_regime(n, r, d) is not profile.Regime.TWO_SHEETS:
        raise DomainError("OBJ export targets the two-sheet members (d > 1)")
    a = profile.waist_radius(n, r, d)
    n_rho = max(args.res_rho, 2)
    n_eta = max(args.res_orbit, 2)
    if n_eta % 2 == 0:
        n_eta += 1
    rho = np.concatenate(
        [[a], profile.default_grid(n, r, d, args.rho_max, n_rho - 1,
                                   rho_min=a + 1e-6 * (1.0 + a))]
    )
    lam = np.array(
        [0.0] + [profile.profile_two_sheets(n, r, d, float(v), cfg) for v in rho[1:]]
    )
    eta = np.linspace(-args.orbit_radius, args.orbit_radius, n_eta)
    xs, _ = stc._profile_ball_points(rho, lam, eta, n)

    lines = []
    index = {}

    def vid(i, j, sign):
        key = (i, j, sign if i > 0 else 0)  # waist ring shared by both sheets
        if key not in index:
            x = xs[i * n_eta + j]
            t = sign * lam[i]
            lines.append(f"v {_fmt(x[0])} {_fmt(x[1])} {_fmt(t)}")
            index[key] = len(index) + 1
        return index[key]

    faces = []
    for sign in (1, -1):
        for i in range(len(rho) - 1):
            for j in range(n_eta - 1):
                v00 = vid(i, j, sign)
                v01 = vid(i, j + 1, sign)
                v10 = vid(i + 1, j, sign)
                v11 = vid(i + 1, j + 1, sign)
                if sign > 0:
                    faces.append(f"f {v00} {v10} {v11}")
                    faces.append(f"f {v00} {v11} {v01}")
                else:
                    faces.append(f"f {v00} {v11} {v10}")
                    faces.append(f"f {v00} {v01} {v11}")
    with open(args.out, "w") as fh:
        fh.write("\n".join(lines + faces) + "\n")


def cmd_stc(args) -> int:
    cfg = _quad_config(args)
    if args.mesh is not None:
        mesh = stc.load_mesh_csv(args.mesh)
    else:
        mesh = _mesh_from_args(args, cfg)
    est = stc.strong_total_curvature(mesh, args.q)
    caps = np.linspace(0.25, 1.0, 4) * est.truncation_R
    _emit_json(
        {
            "n": mesh.n, "r": mesh.r, "d": mesh.d,
            "q": est.q, "weight": est.s,
            "value": est.value,
            "truncation_R": est.truncation_R,
            "tail_flag": est.tail_flag,
            "truncation_profile": [
                {"R": R, "value": v}
                for R, v in stc.truncation_profile(mesh, args.q, caps)
            ],
            "vertices": mesh.vertex_count,
        },
        args.out,
    )
    return EXIT_OK


def cmd_decay(args) -> int:
    cfg = _quad_config(args)
    grid = [float(v) for v in args.radii.split(",")]
    seq = stc.decay_check(args.n, args.r, args.d, grid, cfg)
    vals = [v for _, v in seq]
    _emit_json(
        {
            "n": args.n, "r": args.r, "d": args.d,
            "sequence": [{"R": R, "value": v} for R, v in seq],
            "strictly_decreasing": all(b < a for a, b in zip(vals, vals[1:])),
        },
        args.out,
    )
    return EXIT_OK


def cmd_sweep(args) -> int:
    cfg = _quad_config(args)
    if args.fixture is not None:
        maker = {
            "containment": barrier_mod.containment_fixture,
            "violation": barrier_mod.violation_fixture,
        }[args.fixture]
        target, plane, side, n, r, d, schedule = maker()
    else:
        if args.target is None:
            raise DomainError("give --target CSV or --fixture")
        target = barrier_mod.load_target_csv(args.target)
        n, r, d = args.n, args.r, args.d
        normal = np.array([float(v) for v in args.normal.split(",")])
        normal /= np.linalg.norm(normal)
        plane = Hyperplane.through_origin(normal)
        side = args.side
        schedule = np.linspace(args.s_start, 0.0, args.s_steps)
    if args.vertical:
        t_schedule = np.linspace(args.t_start, 0.0, args.s_steps)
        report = barrier_mod.vertical_sweep(
            target, plane, n, r, d, t_schedule, side=side,
            contact_tol=args.contact_tol, cfg=cfg,
        )
    else:
        report = barrier_mod.sweep(
            target, plane, side, n, r, d, schedule, t=args.t_offset,
            contact_tol=args.contact_tol, cfg=cfg,
        )
    _emit_json(report.to_dict(), args.out)
    return EXIT_OK


# ---------------------------------------------------------------------------
# invariant check suite


def _check_first_integral(quick: bool):
    cases = [(3, 1, 2.0), (4, 2, 1.5)] if quick else [
        (3, 1, 2.0), (3, 2, 1.5), (4, 2, 1.5), (4, 3, 2.0), (5, 3, 3.0),
    ]
    worst = 0.0
    for n, r, d in cases:
        a = profile.waist_radius(n, r, d)
        grid = profile.default_grid(n, r, d, a + 4.0, 96 if quick else 256)
        curve = profile.sample_profile(n, r, d, grid)
        fi = profile.first_integral(n, r, curve.rho, curve.lam_dot)
        err = float(np.max(np.abs(fi ** (1.0 / r) - d))) / max(d, 1.0)
        res = curvature.hr_ode_residual(curve)
        worst = max(worst, err, res)
    return worst < 1e-6, f"max deviation {worst:.3e}"


def _check_sign_pattern(quick: bool):
    cases = [(4, 2, 3.0)] if quick else [(3, 1, 3.0), (4, 2, 3.0), (5, 3, 1.5)]
    for n, r, d in cases:
        a = profile.waist_radius(n, r, d)
        rho = np.linspace(a + 0.05, a + 5.0, 50)
        for j in range(1, n + 1):
            h = np.asarray(curvature.hj_on_family(n, r, d, j, rho))
            if j < r and not np.all(h > 0):
                return False, f"H_{j} not positive for ({n},{r},{d})"
            if j == r and float(np.max(np.abs(h))) > 1e-12:
                return False, f"H_r nonzero for ({n},{r},{d})"
            if j > r and not np.all(h < 0):
                return False, f"H_{j} not negative for ({n},{r},{d})"
    return True, "signs as predicted"


def _check_height_monotone(quick: bool):
    grids = [(3, 1)] if quick else [(3, 1), (4, 2), (5, 3)]
    for n, r in grids:
        hs = [height_of(n, r, a=a).h for a in (0.5, 1.0, 2.0)]
        if not all(b < a for a, b in zip(hs, hs[1:])):
            return False, f"height not decreasing for ({n},{r})"
        if height_derivative(n, r, 1.0) >= 0.0:
            return False, f"derivative not negative for ({n},{r})"
    return True, "strictly decreasing in the waist radius"


def _check_christoffel(quick: bool):
    from .ambient import christoffel

    rng = np.random.default_rng(20240817)
    npts = 10 if quick else 40
    n = 3
    hstep = 1e-4
    worst = 0.0
    for _ in range(npts):
        x = rng.uniform(-0.5, 0.5, size=n)
        if np.linalg.norm(x) > 0.85:
            continue
        gam = christoffel(BallPoint(x))
        gam_fd = _christoffel_fd(x, hstep)
        worst = max(worst, float(np.max(np.abs(gam[:n, :n, :n] - gam_fd))))
    return worst < 1e-6, f"max |analytic - finite difference| = {worst:.3e}"


def _christoffel_fd(x, h):
    n = x.shape[0]

    def metric(y):
        f = 0.5 * (1.0 - float(np.dot(y, y)))
        return np.eye(n) / (f * f)

    dg = np.empty((n, n, n))
    for k in range(n):
        e = np.zeros(n)
        e[k] = h
        gp2 = metric(x + 2 * e)
        gp1 = metric(x + e)
        gm1 = metric(x - e)
        gm2 = metric(x - 2 * e)
        dg[k] = (-gp2 + 8.0 * gp1 - 8.0 * gm1 + gm2) / (12.0 * h)
    ginv = np.linalg.inv(metric(x))
    gam = np.empty((n, n, n))
    for k in range(n):
        for i in range(n):
            for j in range(n):
                gam[k, i, j] = 0.5 * sum(
                    ginv[k, m] * (dg[i][j, m] + dg[j][i, m] - dg[m][i, j])
                    for m in range(n)
                )
    return gam


def _check_dilation(quick: bool):
    a = profile.waist_radius(3, 1, 2.0)
    mesh = stc.build_fermi_mesh(
        3, 1, 2.0, (a + 1e-6, a + 3.0), 1.5, (48, 10) if quick else (96, 16)
    )
    base = stc.strong_total_curvature(mesh, 4.0).value
    for c in (0.5, 2.0, 10.0):
        scaled = stc.strong_total_curvature(stc.dilation_transform(mesh, c), 4.0).value
        if abs(scaled - base) > 1e-12 * abs(base):
            return False, f"norm moved under dilation {c}"
    return True, "norm invariant under dilations"


def cmd_check(args) -> int:
    checks = [
        ("first-integral constancy", _check_first_integral),
        ("sign pattern of the H_j", _check_sign_pattern),
        ("height monotonicity", _check_height_monotone),
        ("Christoffel finite differences", _check_christoffel),
        ("dilation invariance", _check_dilation),
    ]
    failed = 0
    results = []
    for name, fn in checks:
        ok, detail = fn(args.quick)
        results.append({"check": name, "passed": bool(ok), "detail": detail})
        print(f"{'PASS' if ok else 'FAIL'}: {name} ({detail})")
        if not ok:
            failed += 1
    if args.out:
        _emit_json({"results": results, "failed": failed}, args.out)
    return EXIT_OK if failed == 0 else EXIT_CHECK_FAILED


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    p = argparse.ArgumentParser(
        prog="hrzero",
        description=(
            "Generate and verify translation-invariant zero-H_r hypersurfaces "
            "in hyperbolic space cross a line"
        ),
    )
    sub = p.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("profile", help="sample a generating curve to CSV")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--d", type=float, required=True)
    sp.add_argument("--rho-max", type=float, default=6.0)
    sp.add_argument("--rho-min", type=float, default=None)
    sp.add_argument("--samples", type=int, default=512)
    sp.add_argument("--offset", type=float, default=0.0)
    sp.add_argument("--branch", type=int, default=1, choices=(1, -1))
    sp.add_argument("--base", type=float, default=1.0,
                    help="zero crossing for the d = 1 half graph")
    sp.add_argument("--out", required=True)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_profile)

    sp = sub.add_parser("height", help="half-height report as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--d", type=float, default=None)
    sp.add_argument("--a", type=float, default=None)
    sp.add_argument("--out", default=None)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_height)

    sp = sub.add_parser("mesh", help="mesh a member (OBJ for n=2, CSV dump otherwise)")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--d", type=float, required=True)
    sp.add_argument("--rho-max", type=float, default=4.0)
    sp.add_argument("--rho-min", type=float, default=None)
    sp.add_argument("--orbit-radius", type=float, default=2.0)
    sp.add_argument("--res-rho", type=int, default=128)
    sp.add_argument("--res-orbit", type=int, default=32)
    sp.add_argument("--format", choices=("obj", "csv"), default=None)
    sp.add_argument("--out", required=True)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_mesh)

    sp = sub.add_parser("stc", help="strong-total-curvature estimate as JSON")
    sp.add_argument("--n", type=int)
    sp.add_argument("--r", type=int)
    sp.add_argument("--d", type=float)
    sp.add_argument("--rho-max", type=float, default=5.0)
    sp.add_argument("--rho-min", type=float, default=None)
    sp.add_argument("--orbit-radius", type=float, default=2.0)
    sp.add_argument("--res-rho", type=int, default=192)
    sp.add_argument("--res-orbit", type=int, default=32)
    sp.add_argument("--q", type=float, required=True)
    sp.add_argument("--mesh", default=None,
                    help="load a mesh dump prefix instead of building one")
    sp.add_argument("--out", default=None)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_stc)

    sp = sub.add_parser("decay", help="curvature decay profile as JSON")
    sp.add_argument("--n", type=int, required=True)
    sp.add_argument("--r", type=int, required=True)
    sp.add_argument("--d", type=float, required=True)
    sp.add_argument("--radii", default="2,4,6,8,10")
    sp.add_argument("--out", default=None)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_decay)

    sp = sub.add_parser("sweep", help="barrier sweep toward a target point set")
    sp.add_argument("--target", default=None, help="CSV with x_1..x_n,t[,boundary]")
    sp.add_argument("--fixture", choices=("containment", "violation"), default=None)
    sp.add_argument("--n", type=int, default=3)
    sp.add_argument("--r", type=int, default=1)
    sp.add_argument("--d", type=float, default=2.0)
    sp.add_argument("--normal", default="1,0,0",
                    help="base hyperplane normal (through the origin)")
    sp.add_argument("--side", type=int, default=1, choices=(1, -1))
    sp.add_argument("--s-start", type=float, default=4.0)
    sp.add_argument("--s-steps", type=int, default=41)
    sp.add_argument("--t-offset", type=float, default=0.0)
    sp.add_argument("--vertical", action="store_true")
    sp.add_argument("--t-start", type=float, default=4.0)
    sp.add_argument("--contact-tol", type=float, default=1e-6)
    sp.add_argument("--out", default=None)
    _add_quad_args(sp)
    sp.set_defaults(func=cmd_sweep)

    sp = sub.add_parser("check", help="run the invariant check suite")
    sp.add_argument("--quick", action="store_true")
    sp.add_argument("--out", default=None)
    sp.set_defaults(func=cmd_check)

    return p


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    try:
        return args.func(args)
    except DomainError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DOMAIN
    except NonConvergedError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NONCONVERGED


if __name__ == "__main__":
    sys.exit(main())
