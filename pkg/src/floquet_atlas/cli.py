"""Command-line front end.

Subcommands: monodromy, index, curves, bounds, atlas, robe, verify-all.
Exit codes: 0 success, 1 a verified invariant failed, 2 usage error,
3 numerical failure.  All outputs are deterministic: no randomness anywhere
in the pipeline, fixed float formatting, and sweep results ordered by grid
position rather than completion order.
"""

from __future__ import annotations

import argparse
import cmath
import os
import sys
from pathlib import Path

import numpy as np

from . import _output, atlas, curves as curves_mod, hamiltonian as ham
from . import spectral, traceformula as tf
from .config import default_e_max
from .errors import ConsistencyViolation, FloquetAtlasError

ATLAS_CSV_HEADER = ("beta", "e", "trace", "class", "i1", "nu1", "im1", "num1", "region")


def _parse_omega(text: str) -> complex:
    cleaned = text.strip().lower().replace("i", "j")
    if cleaned in {"j", "+j"}:
        cleaned = "1j"
    elif cleaned == "-j":
        cleaned = "-1j"
    return complex(cleaned)


def _parse_resolution(text: str) -> tuple[int, int]:
    try:
        nb, ne = text.lower().split("x")
        return int(nb), int(ne)
    except ValueError as exc:
        raise argparse.ArgumentTypeError(f"resolution must look like 101x50, got {text!r}") from exc


def _cell_row(cell: atlas.AtlasCell):
    return (cell.point.beta, cell.point.ecc, cell.trace, cell.normal_form.label(),
            cell.i1, cell.nu1, cell.im1, cell.num1, cell.region)


def _cell_json(cell: atlas.AtlasCell) -> dict:
    return {
        "beta": cell.point.beta,
        "e": cell.point.ecc,
        "trace": cell.trace,
        "class": cell.normal_form.label(),
        "i1": cell.i1,
        "nu1": cell.nu1,
        "im1": cell.im1,
        "num1": cell.num1,
        "region": cell.region,
        "spectrally_stable": cell.verdict.spectrally_stable,
        "linearly_stable": cell.verdict.linearly_stable,
    }


def _emit_table(args, header, rows, json_payload, svg_writer=None) -> None:
    if args.format == "svg":
        if not args.out:
            raise ValueError("--format svg requires --out")
        if svg_writer is None:
            raise ValueError("this command has no SVG form")
        svg_writer(args.out)
        return
    if args.format == "json":
        text = _output.json_text(json_payload)
    else:
        text = _output.csv_text(header, rows)
    if args.out:
        Path(args.out).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)


# ------------------------------------------------------------- commands ----

def cmd_monodromy(args) -> int:
    p = ham.ParamPoint(args.beta, args.e)
    M = ham.monodromy(p, args.tol)
    cls = ham.classify(M)
    verdict = ham.stability_verdict(M)
    ev = M.eigenvalues()
    if args.json:
        payload = {
            "beta": p.beta, "e": p.ecc,
            "matrix": [[M.m11, M.m12], [M.m21, M.m22]],
            "trace": M.trace, "det": M.det,
            "class": cls.label(),
            "eigenvalues": [[ev[0].real, ev[0].imag], [ev[1].real, ev[1].imag]],
            "spectrally_stable": verdict.spectrally_stable,
            "linearly_stable": verdict.linearly_stable,
        }
        sys.stdout.write(_output.json_text(payload))
        return 0
    print(f"monodromy at beta={p.beta:g}, e={p.ecc:g}:")
    print(f"  [{M.m11: .12e}  {M.m12: .12e}]")
    print(f"  [{M.m21: .12e}  {M.m22: .12e}]")
    print(f"  trace = {M.trace:.12g}   det = {M.det:.12g}")
    print(f"  class = {cls.label()}")
    print(f"  eigenvalues = {ev[0]:.6g}, {ev[1]:.6g}")
    print(f"  spectrally stable: {verdict.spectrally_stable}")
    print(f"  linearly stable:   {verdict.linearly_stable}")
    return 0


def cmd_index(args) -> int:
    p = ham.ParamPoint(args.beta, args.e)
    omega = _parse_omega(args.omega)
    pair = spectral.index_and_nullity(p, omega, args.truncation, args.zero_tol)
    M = ham.monodromy(p, args.tol)
    kernel_dim = ham.kernel_dimension(M, omega)
    checks = {"kernel_dim": kernel_dim == pair.nullity}
    if abs(omega + 1.0) < 1e-12:
        i1 = spectral.index_and_nullity(p, 1.0, args.truncation, args.zero_tol).index
        checks["jump_identity"] = ham.index_jump_check(i1, M) == pair.index
    status = "ok" if all(checks.values()) else "MISMATCH"
    if args.json:
        payload = {"beta": p.beta, "e": p.ecc, "omega": [omega.real, omega.imag],
                   "index": pair.index, "nullity": pair.nullity,
                   "cross_checks": checks, "status": status}
        sys.stdout.write(_output.json_text(payload))
    else:
        print(f"(i, nu) at beta={p.beta:g}, e={p.ecc:g}, omega={args.omega}: "
              f"({pair.index}, {pair.nullity})   cross-check: {status}")
    if status != "ok":
        raise ConsistencyViolation(f"index cross-checks failed: {checks}", point=p)
    return 0


def _traced_for_cli(e_max: float, steps: int, tol: float):
    grid = curves_mod.tangent_seed_grid(e_max, steps)
    return curves_mod.trace_curves(grid, ode_tol=tol)


def _tangent_report(traced) -> dict:
    lower = curves_mod.tangent_at_origin(traced.lower)
    upper = curves_mod.tangent_at_origin(traced.upper)
    return {"lower_slope": lower, "upper_slope": upper}


def _curve_rows(traced):
    rows = []
    for curve in (traced.lower, traced.upper):
        for e, b in zip(curve.eccs, curve.betas):
            rows.append((curve.label, curve.parity, float(e), float(b)))
    return rows


def cmd_curves(args) -> int:
    traced = _traced_for_cli(args.e_max, args.steps, args.tol)
    report = _tangent_report(traced)
    print(f"tangent slopes at e=0: lower {report['lower_slope']:+.6f}, "
          f"upper {report['upper_slope']:+.6f}")
    if traced.crossings:
        for ev in traced.crossings:
            print(f"near-crossing at e={ev.ecc:g}, beta={ev.beta:.9f} (gap {ev.gap:.2e})")
    rows = _curve_rows(traced)
    payload = {
        "tangents": report,
        "crossings": [{"e": c.ecc, "beta": c.beta, "gap": c.gap} for c in traced.crossings],
        "samples": [{"curve": r[0], "parity": r[1], "e": r[2], "beta": r[3]} for r in rows],
    }

    def svg(out):
        _output.svg_line_chart(
            out,
            [("lower", traced.lower.betas, traced.lower.eccs),
             ("upper", traced.upper.betas, traced.upper.eccs)],
            title="antiperiodic degeneracy curves",
            x_label="beta", y_label="eccentricity",
            x_range=(0.0, 1.0), y_range=(0.0, max(args.e_max, 0.1)))

    _emit_table(args, ("curve", "parity", "e", "beta"), rows, payload, svg)
    return 0


_BOUND_FAMILIES = {
    "thm13": (tf.VARIANT_THM13_LOW, tf.VARIANT_THM13_HIGH),
    "thm33": (tf.VARIANT_THM33_LOW, tf.VARIANT_THM33_HIGH),
    "conservative_min": (tf.VARIANT_CONSERVATIVE, tf.VARIANT_CONSERVATIVE),
}


def _bound_grid(beta_steps: int):
    grid = np.linspace(0.01, 0.99, beta_steps)
    keep = np.abs(grid - 0.75) >= tf.SINGULARITY_GUARD * 1.5
    return grid[keep]


def _bound_rows(family: str, betas, quad_order: int):
    low_variant, high_variant = _BOUND_FAMILIES[family]
    rows = []
    for b in betas:
        variant = low_variant if b < 0.75 else high_variant
        rows.append((family, float(b), tf.stability_bound(float(b), variant, quad_order)))
    return rows


def cmd_bounds(args) -> int:
    betas = _bound_grid(args.beta_steps)
    families = list(_BOUND_FAMILIES) if args.variant == "all" else [args.variant]
    rows = []
    for family in families:
        rows.extend(_bound_rows(family, betas, args.quad_order))
    if args.verify:
        violations = verify_bound_soundness(betas, args.quad_order, args.tol)
        for v in violations:
            print(f"soundness violation: {v}")
        print(f"soundness: checked {len(betas)} samples below the conservative bound, "
              f"{len(violations)} violations")
        if violations:
            raise ConsistencyViolation("estimated elliptic region leaks", details=violations)
    payload = {"samples": [{"variant": r[0], "beta": r[1], "e_max": r[2]} for r in rows]}

    def svg(out):
        series = []
        for family in families:
            sub = [(r[1], r[2]) for r in rows if r[0] == family]
            series.append((family, [x for x, _ in sub], [y for _, y in sub]))
        _output.svg_line_chart(out, series, title="guaranteed-ellipticity bounds",
                               x_label="beta", y_label="max eccentricity",
                               x_range=(0.0, 1.0), y_range=(0.0, 1.0))

    _emit_table(args, ("variant", "beta", "e_max"), rows, payload, svg)
    return 0


def verify_bound_soundness(betas, quad_order: int, tol: float) -> list[dict]:
    """Sample e = 0.95 * conservative bound; the monodromy there must be elliptic."""
    out = []
    for b in betas:
        bound = tf.stability_bound(float(b), tf.VARIANT_CONSERVATIVE, quad_order)
        e = 0.95 * bound
        if e >= default_e_max():
            e = default_e_max() - 1e-6
        M = ham.monodromy(ham.ParamPoint(float(b), e), tol)
        if not abs(M.trace) < 2.0 - 1e-6:
            out.append({"beta": float(b), "e": e, "trace": M.trace})
    return out


def cmd_atlas(args) -> int:
    n_beta, n_ecc = args.res
    cells = atlas.atlas_sweep(n_beta, n_ecc, args.e_max, jobs=args.jobs,
                              ode_tol=args.tol)
    rows = [_cell_row(c) for c in cells]
    payload = {"cells": [_cell_json(c) for c in cells]}

    def svg(out):
        traced = curves_mod.trace_curves(np.linspace(0.0, args.e_max, n_ecc),
                                         ode_tol=args.tol)
        _output.svg_atlas_chart(out, cells, traced, title="stability atlas")

    _emit_table(args, ATLAS_CSV_HEADER, rows, payload, svg)
    print(f"atlas: {len(cells)} cells, all consistency checks passed", file=sys.stderr)
    return 0


def cmd_robe(args) -> int:
    verdict = atlas.robe_stability(args.mu, args.e, ode_tol=args.tol)
    cell = verdict.cell
    if args.json:
        payload = dict(_cell_json(cell), mu=verdict.mu)
        sys.stdout.write(_output.json_text(payload))
        return 0
    stable = "linearly stable" if cell.verdict.linearly_stable else "linearly unstable"
    spec_txt = "spectrally stable" if cell.verdict.spectrally_stable else "spectrally unstable"
    print(f"robe equilibrium mu={verdict.mu:g}, e={cell.point.ecc:g} "
          f"(beta={cell.point.beta:g}):")
    print(f"  region {cell.region}, class {cell.normal_form.label()}")
    print(f"  {spec_txt}, {stable}")
    return 0


def cmd_verify_all(args) -> int:
    out_dir = Path(args.out)
    out_dir.mkdir(parents=True, exist_ok=True)
    summary = {"checks": {}, "artifacts": []}
    failures = []

    def record(name, ok, detail):
        summary["checks"][name] = {"status": "pass" if ok else "FAIL", "detail": detail}
        print(f"[{'PASS' if ok else 'FAIL'}] {name}: {detail}")
        if not ok:
            failures.append(name)

    traced = _traced_for_cli(args.e_max, args.steps, args.tol)
    report = _tangent_report(traced)
    record("curves.trace", True,
           f"{len(traced.lower.eccs)} samples per curve, "
           f"tangents {report['lower_slope']:+.6f}/{report['upper_slope']:+.6f}, "
           f"{len(traced.crossings)} near-crossings")
    _output.write_csv(out_dir / "curves.csv", ("curve", "parity", "e", "beta"),
                      _curve_rows(traced))
    summary["artifacts"].append("curves.csv")
    summary["tangents"] = report

    residual = factorization_residual_grid(args.tol)
    record("factorization.identity", residual <= curves_mod.DEGENERACY_TOL,
           f"max |trace+2 - 4 y1 y2'| = {residual:.3e} on a 30x10 grid")

    findings = atlas.verify_curve_normal_forms(traced, ode_tol=args.tol)
    record("curves.normal_forms", not findings,
           f"{len(findings)} label mismatches along the curves")
    summary["normal_form_findings"] = findings

    n_beta, n_ecc = args.res
    try:
        cells = atlas.atlas_sweep(n_beta, n_ecc, min(args.e_max, 0.9),
                                  jobs=args.jobs, ode_tol=args.tol)
        record("atlas.sweep", True, f"{len(cells)} cells verified on {n_beta}x{n_ecc}")
    except ConsistencyViolation as exc:
        cells = []
        record("atlas.sweep", False, str(exc))
    if cells:
        _output.write_csv(out_dir / "atlas.csv", ATLAS_CSV_HEADER,
                          [_cell_row(c) for c in cells])
        summary["artifacts"].append("atlas.csv")
        _output.svg_atlas_chart(out_dir / "atlas.svg", cells, traced,
                                title="stability atlas")
        summary["artifacts"].append("atlas.svg")

    betas = _bound_grid(args.beta_steps)
    bound_rows = []
    for family in _BOUND_FAMILIES:
        bound_rows.extend(_bound_rows(family, betas, args.quad_order))
    _output.write_csv(out_dir / "bounds.csv", ("variant", "beta", "e_max"), bound_rows)
    summary["artifacts"].append("bounds.csv")
    violations = verify_bound_soundness(betas, args.quad_order, args.tol)
    record("bounds.soundness", not violations,
           f"{len(betas)} samples at 0.95x the conservative bound, "
           f"{len(violations)} non-elliptic")

    summary["exit_code"] = 1 if failures else 0
    _output.write_json(out_dir / "summary.json", summary)
    summary["artifacts"].append("summary.json")
    return summary["exit_code"]


def factorization_residual_grid(tol: float, n_beta: int = 30, n_ecc: int = 10) -> float:
    """Max residual of trace+2 = 4 y1(pi) y2'(pi) over a parameter grid."""
    worst = 0.0
    for b in np.linspace(0.0, 1.0, n_beta):
        for e in np.linspace(0.0, 0.85, n_ecc):
            p = ham.ParamPoint(float(b), float(e))
            disc = ham.monodromy(p, tol).trace + 2.0
            half = curves_mod.half_period_values(p, tol)
            worst = max(worst, abs(disc - 4.0 * half.y1_pi * half.dy2_pi))
    return worst


# --------------------------------------------------------------- parser ----

def _add_common(sp, *, fmt=False, jobs=False, json_flag=False):
    sp.add_argument("--tol", type=float, default=ham.DEFAULT_INTEGRATOR_TOL,
                    help="integrator tolerance (absolute and relative)")
    if fmt:
        sp.add_argument("--out", type=str, default=None, help="output path")
        sp.add_argument("--format", choices=("csv", "json", "svg"), default="csv")
    if jobs:
        sp.add_argument("--jobs", type=int, default=os.cpu_count() or 1,
                        help="sweep concurrency")
    if json_flag:
        sp.add_argument("--json", action="store_true", help="machine-readable output")


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(
        prog="floquet-atlas",
        description="Stability portrait of the periodic family "
                    "-y'' - y + beta/(1 + e cos t) y and the vertical Robe equilibrium.")
    sub = parser.add_subparsers(dest="command", required=True)

    sp = sub.add_parser("monodromy", help="fundamental solution over one period")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--e", type=float, required=True)
    _add_common(sp, json_flag=True)
    sp.set_defaults(func=cmd_monodromy)

    sp = sub.add_parser("index", help="Morse index and nullity at a multiplier omega")
    sp.add_argument("--beta", type=float, required=True)
    sp.add_argument("--e", type=float, required=True)
    sp.add_argument("--omega", type=str, required=True, help="e.g. 1, -1, i, 0.6+0.8i")
    sp.add_argument("--truncation", type=int, default=spectral.DEFAULT_TRUNCATION)
    sp.add_argument("--zero-tol", type=float, default=spectral.DEFAULT_ZERO_TOL)
    _add_common(sp, json_flag=True)
    sp.set_defaults(func=cmd_index)

    sp = sub.add_parser("curves", help="trace the two degeneracy curves")
    sp.add_argument("--e-max", type=float, default=0.8)
    sp.add_argument("--steps", type=int, default=50)
    _add_common(sp, fmt=True)
    sp.set_defaults(func=cmd_curves)

    sp = sub.add_parser("bounds", help="guaranteed-ellipticity bound curves")
    sp.add_argument("--beta-steps", type=int, default=60)
    sp.add_argument("--variant", choices=("thm13", "thm33", "conservative_min", "all"),
                    default="all")
    sp.add_argument("--quad-order", type=int, default=tf.DEFAULT_QUAD_ORDER)
    sp.add_argument("--verify", action="store_true",
                    help="sample below the conservative bound and check ellipticity")
    _add_common(sp, fmt=True)
    sp.set_defaults(func=cmd_bounds)

    sp = sub.add_parser("atlas", help="full verified parameter sweep")
    sp.add_argument("--res", type=_parse_resolution, default=(101, 50),
                    help="grid as N_BETAxN_ECC, e.g. 101x50")
    sp.add_argument("--e-max", type=float, default=atlas.DEFAULT_SWEEP_EMAX)
    _add_common(sp, fmt=True, jobs=True)
    sp.set_defaults(func=cmd_atlas)

    sp = sub.add_parser("robe", help="verdict for the vertical Robe equilibrium")
    sp.add_argument("--mu", type=float, required=True)
    sp.add_argument("--e", type=float, required=True)
    _add_common(sp, json_flag=True)
    sp.set_defaults(func=cmd_robe)

    sp = sub.add_parser("verify-all", help="run every consistency audit, emit artifacts")
    sp.add_argument("--out", type=str, default="verify_out")
    sp.add_argument("--res", type=_parse_resolution, default=(31, 16))
    sp.add_argument("--steps", type=int, default=25)
    sp.add_argument("--beta-steps", type=int, default=40)
    sp.add_argument("--e-max", type=float, default=0.8)
    sp.add_argument("--quad-order", type=int, default=tf.DEFAULT_QUAD_ORDER)
    _add_common(sp, jobs=True)
    sp.set_defaults(func=cmd_verify_all)

    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return int(exc.code) if exc.code else 0
    try:
        return args.func(args)
    except ConsistencyViolation as exc:
        print(f"consistency violation: {exc}", file=sys.stderr)
        return 1
    except FloquetAtlasError as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return 3
    except ValueError as exc:
        print(f"invalid arguments: {exc}", file=sys.stderr)
        return 2


def console_main() -> None:
    sys.exit(main())


if __name__ == "__main__":
    console_main()
