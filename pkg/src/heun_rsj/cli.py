"""Command line front end.

Subcommands::

    spectrum        all spectral lambdas at (n, mu) with physical parameters
    poly            polynomial coefficients and residual summary at one root
    verify          full residual dashboard for one spectral point
    simulate        fixed-step integration of the phase or companion system
    phase-compare   closed-form phase against the integrated phase
    ortho           weighted pairing integral of two polynomials
    sweep           spectral surface over an (n, mu) grid as CSV

Exit status: 0 on success, 1 on a computational error (or failed
verification), 2 on a usage error.  Output is deterministic: identical
invocations produce identical bytes.
"""

from __future__ import annotations

import argparse
import math
import os
import sys
from concurrent.futures import ThreadPoolExecutor

import numpy as np

from . import dynamics, heun_poly, spectral, structure
from .errors import HeunRsjError, IndexOutOfRange, NonPositiveDiscriminant
from .model import DcheParams, dche_to_params
from .serialize import (
    SCHEMA,
    json_dumps,
    trajectory_to_csv,
    trajectory_to_json,
    write_csv,
)

TOL = {
    "master": 1e-9,
    "linear_system": 1e-10,
    "symmetry": 1e-9,
    "coeff_relations": 1e-10,
    "factorization": 1e-10,
    "det_product": 1e-9,
    "det_min": 1e-10,
    "phase": 1e-6,
}


def _thread_count() -> int:
    raw = os.environ.get("HEUN_RSJ_THREADS", "")
    cap = os.cpu_count() or 1
    if raw.strip():
        try:
            cap = min(cap, max(1, int(raw)))
        except ValueError:
            cap = 1
    return max(1, min(cap, 32))


def _physical_fields(d: DcheParams) -> dict:
    try:
        p = dche_to_params(d)
    except (NonPositiveDiscriminant, HeunRsjError) as exc:
        return {"error": type(exc).__name__}
    return {"omega": p.omega, "A": p.A, "B": p.B}


def _spectrum_rows(n: int, mu: float, refine_tol: float) -> list[dict]:
    rows = []
    for i, lam in enumerate(spectral.lambda_spectrum(n, mu, refine_tol).lambdas):
        row = {"index": i, "lambda": lam}
        row.update(_physical_fields(DcheParams(n=n, mu=mu, lam=lam)))
        rows.append(row)
    return rows


def cmd_spectrum(args) -> tuple[str, int]:
    rows = _spectrum_rows(args.n, args.mu, args.refine_tol)
    if args.format == "json":
        return (
            json_dumps(
                {
                    "schema": SCHEMA,
                    "command": "spectrum",
                    "n": args.n,
                    "mu": args.mu,
                    "roots": rows,
                }
            ),
            0,
        )
    table = [
        [
            row["index"],
            row["lambda"],
            *(
                ["", "", ""]
                if "error" in row
                else [row["omega"], row["A"], row["B"]]
            ),
        ]
        for row in rows
    ]
    return write_csv(["index", "lambda", "omega", "A", "B"], table), 0


def _root_params(n: int, mu: float, root: int) -> DcheParams:
    """Triplet at one spectral root, independent of whether it is physical."""
    spectrum = spectral.lambda_spectrum(n, mu)
    if not 0 <= root < len(spectrum.lambdas):
        raise IndexOutOfRange(
            f"root index {root} outside [0, {len(spectrum.lambdas) - 1}]"
        )
    return DcheParams(n=n, mu=mu, lam=spectrum.lambdas[root])


def cmd_poly(args) -> tuple[str, int]:
    d = _root_params(args.n, args.mu, args.root)
    poly = heun_poly.build_polynomial(d, tol_spec=args.tol_spec)
    master = max(
        abs(heun_poly.residual_master(poly, z))
        / max(heun_poly.residual_master_scale(poly, z), 1e-300)
        for z in heun_poly.SAMPLE_POINTS
    )
    rows = heun_poly.residual_linear_system(poly)
    linear = float(np.max(np.abs(rows))) / max(abs(c) for c in poly.coeffs)
    report = {
        "schema": SCHEMA,
        "command": "poly",
        "n": args.n,
        "mu": args.mu,
        "root_index": args.root,
        "lambda": d.lam,
    }
    report.update(_physical_fields(d))
    try:
        report["epsilon"] = structure.symmetry_sign(poly)
    except HeunRsjError as exc:
        report["epsilon_error"] = type(exc).__name__
    report["coeffs"] = list(poly.coeffs)
    report["residuals"] = {"master_rel_max": master, "linear_system_rel_max": linear}
    return json_dumps(report), 0


def cmd_verify(args) -> tuple[str, int]:
    d = _root_params(args.n, args.mu, args.root)
    poly = heun_poly.build_polynomial(d, tol_spec=args.tol_spec)
    checks: list[dict] = []
    skipped: list[dict] = []

    def add(name: str, value: float, tol: float) -> None:
        checks.append(
            {"name": name, "value": value, "tolerance": tol, "pass": value <= tol}
        )

    master = max(
        abs(heun_poly.residual_master(poly, z))
        / max(heun_poly.residual_master_scale(poly, z), 1e-300)
        for z in heun_poly.SAMPLE_POINTS
    )
    add("master_equation_rel", float(master), TOL["master"])

    amax = max(abs(c) for c in poly.coeffs)
    rows = heun_poly.residual_linear_system(poly)
    add("linear_system_rel", float(np.max(np.abs(rows))) / amax, TOL["linear_system"])

    disc = d.lam + d.mu**2
    if disc > spectral.DISC_MARGIN:
        add("reflection_symmetry", float(structure.symmetry_residual(poly)), TOL["symmetry"])
        rel = structure.coeff_relations_residual(poly)
        add("coeff_relations_rel", float(np.max(np.abs(rel))) / amax, TOL["coeff_relations"])

        dev, sign = spectral.check_factorization(d)
        prod_scale = max(
            1.0,
            float(
                np.max(np.abs(spectral.symmetry_matrix(1, d).entries
                              @ spectral.symmetry_matrix(-1, d).entries))
            ),
        )
        add("factorization_rel", dev / prod_scale, TOL["factorization"])
        checks.append(
            {
                "name": "factorization_sign",
                "value": sign,
                "tolerance": -1,
                "pass": sign == -1,
            }
        )
        det_p, det_m = spectral.spectral_condition(d)
        delta = heun_poly.spectral_det(d)
        scale = heun_poly.det_scale(d)
        add(
            "det_product_rel",
            abs(abs(det_p * det_m) - abs(delta)) / max(scale, 1.0),
            TOL["det_product"],
        )
        add("det_min_rel", min(abs(det_p), abs(det_m)) / max(scale, 1.0), TOL["det_min"])
    else:
        reason = (
            "NonPositiveDiscriminant"
            if disc <= 0
            else "DiscriminantBelowMargin"
        )
        for name in (
            "reflection_symmetry",
            "coeff_relations_rel",
            "factorization_rel",
            "factorization_sign",
            "det_product_rel",
            "det_min_rel",
        ):
            skipped.append({"name": name, "reason": reason})

    ok = all(c["pass"] for c in checks)
    report = {
        "schema": SCHEMA,
        "command": "verify",
        "n": args.n,
        "mu": args.mu,
        "root_index": args.root,
        "lambda": d.lam,
        "checks": checks,
        "skipped": skipped,
        "pass": ok,
    }
    return json_dumps(report), 0 if ok else 1


def cmd_simulate(args) -> tuple[str, int]:
    from .model import RsjParams

    p = RsjParams(A=args.a, B=args.b, omega=args.omega)
    if args.system == "phase":
        traj = dynamics.integrate_phase(p, args.phi0, args.t_end, args.h)
    else:
        traj = dynamics.integrate_xy(p, args.x0, args.y0, args.t_end, args.h)
    text = trajectory_to_json(traj) if args.format == "json" else trajectory_to_csv(traj)
    if args.out and args.out != "-":
        with open(args.out, "w", newline="") as fh:
            fh.write(text)
        return f"wrote {len(traj)} samples to {args.out}\n", 0
    return text, 0


def cmd_phase_compare(args) -> tuple[str, int]:
    _, d = spectral.physical_point(args.n, args.mu, args.root)
    poly = heun_poly.build_polynomial(d)
    p = dche_to_params(d)
    t_end = args.periods * p.period
    h = args.h if args.h else p.period / 2000.0

    traj = dynamics.integrate_phase(
        p, structure.phase_from_poly(poly, 0.0), t_end, h
    )
    closed = structure.phase_series(poly, traj.times)
    diff = closed - traj.values[:, 0]
    dev = float(np.max(np.abs((diff + np.pi) % (2.0 * np.pi) - np.pi)))

    # Central differences truncate at O(dt^2 * phi'''); 4e4 points per period
    # keeps that term safely below the phase tolerance.
    fine = np.linspace(0.0, t_end, int(round(40000 * args.periods)) + 1)
    phi = structure.phase_series(poly, fine)
    dphi = (phi[2:] - phi[:-2]) / (fine[2] - fine[0])
    resid = dphi + np.sin(phi[1:-1]) - dynamics.bias(p, fine[1:-1])
    ode_max = float(np.max(np.abs(resid)))

    ok = dev <= TOL["phase"] and ode_max <= TOL["phase"]
    report = {
        "schema": SCHEMA,
        "command": "phase-compare",
        "n": args.n,
        "mu": args.mu,
        "root_index": args.root,
        "lambda": d.lam,
        "omega": p.omega,
        "A": p.A,
        "B": p.B,
        "periods": args.periods,
        "h": h,
        "epsilon": structure.symmetry_sign(poly),
        "max_phase_dev_mod_2pi": dev,
        "ode_residual_max": ode_max,
        "tolerance": TOL["phase"],
        "pass": ok,
    }
    return json_dumps(report), 0 if ok else 1


def cmd_ortho(args) -> tuple[str, int]:
    _, d1 = spectral.physical_point(args.n1, args.mu, args.root1)
    _, d2 = spectral.physical_point(args.n2, args.mu, args.root2)
    p1 = heun_poly.build_polynomial(d1)
    p2 = heun_poly.build_polynomial(d2)
    value, scale = structure.orthogonality_integral(p1, p2)
    ratio = abs(value) / scale if scale > 0 else 0.0
    applies = args.n1 != args.n2
    report = {
        "schema": SCHEMA,
        "command": "ortho",
        "mu": args.mu,
        "p1": {"n": args.n1, "root_index": args.root1, "lambda": d1.lam},
        "p2": {"n": args.n2, "root_index": args.root2, "lambda": d2.lam},
        "value": value,
        "scale": scale,
        "ratio": ratio,
        "theorem_applies": applies,
        "pass": (ratio <= 1e-8) if applies else None,
    }
    return json_dumps(report), 0


def cmd_sweep(args) -> tuple[str, int]:
    if args.mu_points == 1:
        mus = [args.mu_start]
    else:
        mus = list(
            np.linspace(args.mu_start, args.mu_stop, args.mu_points)
        )
    grid = [(n, mu) for n in range(args.n_min, args.n_max + 1) for mu in mus]

    def point(item):
        n, mu = item
        out = []
        for lam in spectral.lambda_spectrum(n, float(mu)).lambdas:
            d = DcheParams(n=n, mu=float(mu), lam=lam)
            phys = _physical_fields(d)
            if "error" in phys:
                out.append([n, float(mu), lam, "", "", ""])
            else:
                out.append([n, float(mu), lam, phys["omega"], phys["A"], phys["B"]])
        return out

    threads = _thread_count()
    if threads > 1 and len(grid) > 1:
        with ThreadPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(point, grid))
    else:
        chunks = [point(g) for g in grid]
    rows = [row for chunk in chunks for row in chunk]
    rows.sort(key=lambda r: (r[0], r[1], r[2]))
    return write_csv(["n", "mu", "lambda", "omega", "A", "B"], rows), 0


def _positive(kind):
    def conv(text: str):
        value = kind(text)
        if value <= 0:
            raise argparse.ArgumentTypeError(f"must be positive, got {text}")
        return value

    return conv


def _non_negative_int(text: str) -> int:
    value = int(text)
    if value < 0:
        raise argparse.ArgumentTypeError(f"must be >= 0, got {text}")
    return value


def _finite_float(text: str) -> float:
    value = float(text)
    if not math.isfinite(value):
        raise argparse.ArgumentTypeError(f"must be finite, got {text}")
    return value


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="heun-rsj",
        description="Josephson phase dynamics via double confluent Heun polynomials",
    )
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("spectrum", help="spectral lambdas at (n, mu)")
    sp.add_argument("--n", type=_non_negative_int, required=True)
    sp.add_argument("--mu", type=_finite_float, required=True)
    sp.add_argument("--refine-tol", type=_positive(float), default=1e-10)
    sp.add_argument("--format", choices=("json", "csv"), default="json")
    sp.set_defaults(func=cmd_spectrum)

    pl = sub.add_parser("poly", help="polynomial at one spectral root")
    pl.add_argument("--n", type=_non_negative_int, required=True)
    pl.add_argument("--mu", type=_finite_float, required=True)
    pl.add_argument("--root", type=_non_negative_int, required=True)
    pl.add_argument("--tol-spec", type=_positive(float), default=1e-8)
    pl.set_defaults(func=cmd_poly)

    vf = sub.add_parser("verify", help="residual dashboard at one spectral root")
    vf.add_argument("--n", type=_non_negative_int, required=True)
    vf.add_argument("--mu", type=_finite_float, required=True)
    vf.add_argument("--root", type=_non_negative_int, required=True)
    vf.add_argument("--tol-spec", type=_positive(float), default=1e-8)
    vf.set_defaults(func=cmd_verify)

    sim = sub.add_parser("simulate", help="integrate the phase or companion system")
    sim.add_argument("--a", type=_finite_float, required=True, help="bias amplitude A")
    sim.add_argument("--b", type=_finite_float, required=True, help="bias offset B")
    sim.add_argument("--omega", type=_finite_float, required=True)
    sim.add_argument("--system", choices=("phase", "xy"), default="phase")
    sim.add_argument("--phi0", type=_finite_float, default=0.0)
    sim.add_argument("--x0", type=_finite_float, default=1.0)
    sim.add_argument("--y0", type=_finite_float, default=0.0)
    sim.add_argument("--t-end", type=_positive(float), required=True)
    sim.add_argument("--h", type=_positive(float), default=None)
    sim.add_argument("--format", choices=("csv", "json"), default="csv")
    sim.add_argument("--out", default="-")
    sim.set_defaults(func=cmd_simulate)

    pc = sub.add_parser("phase-compare", help="closed-form phase vs integration")
    pc.add_argument("--n", type=_non_negative_int, required=True)
    pc.add_argument("--mu", type=_finite_float, required=True)
    pc.add_argument("--root", type=_non_negative_int, required=True)
    pc.add_argument("--periods", type=_positive(int), default=10)
    pc.add_argument("--h", type=_positive(float), default=None)
    pc.set_defaults(func=cmd_phase_compare)

    orth = sub.add_parser("ortho", help="weighted pairing of two polynomials")
    orth.add_argument("--n1", type=_non_negative_int, required=True)
    orth.add_argument("--root1", type=_non_negative_int, required=True)
    orth.add_argument("--n2", type=_non_negative_int, required=True)
    orth.add_argument("--root2", type=_non_negative_int, required=True)
    orth.add_argument("--mu", type=_finite_float, required=True)
    orth.set_defaults(func=cmd_ortho)

    sw = sub.add_parser("sweep", help="spectral surface over an (n, mu) grid")
    sw.add_argument("--n-min", type=_non_negative_int, required=True)
    sw.add_argument("--n-max", type=_non_negative_int, required=True)
    sw.add_argument("--mu-start", type=_finite_float, required=True)
    sw.add_argument("--mu-stop", type=_finite_float, default=None)
    sw.add_argument("--mu-points", type=_positive(int), default=1)
    sw.set_defaults(func=cmd_sweep)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    if args.command == "sweep":
        if args.n_max < args.n_min:
            parser.error("--n-max must be >= --n-min")
        if args.mu_points > 1 and args.mu_stop is None:
            parser.error("--mu-stop is required when --mu-points > 1")
        if args.mu_stop is None:
            args.mu_stop = args.mu_start
    try:
        text, status = args.func(args)
    except HeunRsjError as exc:
        sys.stderr.write(f"error: {type(exc).__name__}: {exc}\n")
        return 1
    sys.stdout.write(text)
    return status


if __name__ == "__main__":
    sys.exit(main())
