"""Command-line front end: solve / table / region / oracle / verify.

Exit codes: 0 success, 1 checks or hierarchy violations failed, 2 bad
configuration, 3 numeric failure inside a computation.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys
from dataclasses import dataclass

import numpy as np

from . import _io, reference, region
from .closed_forms import PotentialParams, eval_u
from .errors import (
    BracketError,
    ConvergenceDomainError,
    DegenerateDenominatorError,
    DiscretizationError,
    GdwellError,
    GridError,
    GridMismatchError,
    OverflowGuardError,
    PositivityLossError,
)
from .oracle import OracleConfig, oracle_ground_state, peak_census
from .solver import BoundaryCondition, SolveReport, solve
from .trial import Grid

EXIT_OK = 0
EXIT_CHECK_FAILED = 1
EXIT_CONFIG = 2
EXIT_NUMERIC = 3

_CONFIG_KEYS = ("g", "a", "bc", "x_max", "n_points", "tol", "max_iter", "out", "format")


@dataclass
class RunConfig:
    g: float = 1.0
    a: float = 2.0
    bc: str = "II"
    x_max: float = 4.0
    n_points: int = 2000
    tol: float = 1e-6
    max_iter: int = 20
    out: str | None = None
    format: str = "json"

    def as_dict(self) -> dict:
        return {k: getattr(self, k) for k in _CONFIG_KEYS}


def _load_run_config(args) -> RunConfig:
    cfg = RunConfig()
    if getattr(args, "config", None):
        with open(args.config, "r", encoding="utf-8") as fh:
            data = json.load(fh)
        unknown = set(data) - set(_CONFIG_KEYS)
        if unknown:
            raise ValueError(f"unknown config keys: {sorted(unknown)}")
        for k, v in data.items():
            setattr(cfg, k, v)
    for k in _CONFIG_KEYS:
        v = getattr(args, k, None)
        if v is not None:
            setattr(cfg, k, v)
    if cfg.bc not in ("I", "II"):
        raise ValueError(f"bc must be 'I' or 'II', got {cfg.bc!r}")
    if cfg.format not in ("json", "csv"):
        raise ValueError(f"format must be 'json' or 'csv', got {cfg.format!r}")
    return cfg


def _run_solve(cfg: RunConfig) -> SolveReport:
    p = PotentialParams(cfg.g, cfg.a)
    grid = Grid(cfg.x_max, cfg.n_points)
    return solve(p, grid, BoundaryCondition(cfg.bc), max_iter=cfg.max_iter, tol=cfg.tol)


def cmd_solve(args) -> int:
    cfg = _load_run_config(args)
    report = _run_solve(cfg)
    print(" ".join(report.energy_row()))
    for wmsg in report.warnings:
        print(f"warning: {wmsg}", file=sys.stderr)
    if cfg.out:
        if cfg.format == "json":
            _io.write_json(cfg.out, report.to_json_dict())
        else:
            _io.write_csv(
                cfg.out,
                cfg.as_dict(),
                ["bc"] + [f"E{i}" for i in range(len(report.energies))],
                [[report.bc.value] + report.energy_row()],
            )
        print(f"wrote {cfg.out}")
    if args.dump_psi:
        _dump_wavefunctions(args.dump_psi, cfg, report)
        print(f"wrote {args.dump_psi}")
    if report.violations:
        for v in report.violations:
            print(f"hierarchy violation: {v}", file=sys.stderr)
        return EXIT_CHECK_FAILED
    return EXIT_OK


def _dump_wavefunctions(path: str, cfg: RunConfig, report: SolveReport) -> None:
    """x, psi0, psi2, psi_final and the reference solver's psi on the grid."""
    x = report.grid.nodes
    res = oracle_ground_state(
        PotentialParams(cfg.g, cfg.a), OracleConfig(L=max(6.0, cfg.x_max + 2.0))
    )
    psi_oracle = np.interp(x, res.x, res.psi)
    n2 = min(2, report.iterations)
    rows = [
        [
            _io.format_float(float(x[i])),
            _io.format_float(float(report.psi0[i])),
            _io.format_float(float(report.psi_n(n2)[i])),
            _io.format_float(float(report.psi_final[i])),
            _io.format_float(float(psi_oracle[i])),
        ]
        for i in range(x.size)
    ]
    _io.write_csv(
        path, cfg.as_dict(), ["x", "psi0", "psi2", "psi_final", "psi_oracle"], rows
    )


def cmd_table(args) -> int:
    which = args.which
    rows = reference.TABLES[which]
    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    header = ["row"] + [f"E{i}" for i in range(6)] + ["max_abs_diff", "note"]
    out_rows = []
    worst_ok = 0.0
    for row in rows:
        p = PotentialParams(row.g, row.a)
        rep = solve(p, Grid(), BoundaryCondition(row.bc), max_iter=5, tol=0.0)
        computed = rep.energies[:6]
        diff = max(abs(c - r) for c, r in zip(computed, row.energies))
        known_bad = (row.origin, row.label) in reference.KNOWN_DISCREPANT_ROWS
        if not known_bad:
            worst_ok = max(worst_ok, diff)
        note = "known-discrepant-reference" if known_bad else ""
        out_rows.append(
            [row.label] + [f"{e:.4f}" for e in computed] + [f"{diff:.1e}", note]
        )
        print(f"{row.label:8s} " + " ".join(f"{e:.4f}" for e in computed)
              + f"   max|diff| = {diff:.1e}" + (f"  [{note}]" if note else ""))
    path = os.path.join(out_dir, f"table{which}.csv")
    _io.write_csv(path, {"table": which}, header, out_rows)
    print(f"wrote {path}")
    print(f"worst cell diff over reproducible rows: {worst_ok:.2e}")
    return EXIT_OK


def cmd_region(args) -> int:
    rep = region.trace_curves(resolution=args.resolution)
    out_dir = args.out_dir or "."
    os.makedirs(out_dir, exist_ok=True)
    plane = {"beta_zero": "x", "gamma_zero": "x",
             "alpha_tilde_zero": "z", "beta_tilde_zero": "z", "gamma_tilde_zero": "z"}
    for name, pts in rep.curves.items():
        path = os.path.join(out_dir, f"{name}.csv")
        _io.write_csv(
            path,
            {"resolution": args.resolution, "curve": name},
            ["a", plane[name]],
            [[_io.format_float(a), _io.format_float(v)] for a, v in pts],
        )
        print(f"wrote {path} ({len(pts)} points)")
    doc = rep.to_json_dict()
    doc["a_g_sweep"] = [
        {"g": float(g), "a_g": region.find_a_g(float(g))}
        for g in np.linspace(0.5, 5.0, 19)
    ]
    path = os.path.join(out_dir, "region.json")
    _io.write_json(path, doc)
    print(f"wrote {path}")
    print(f"a_c = {rep.a_c:.4f} (bisection width {rep.a_c_width:.1e})")
    return EXIT_OK


def cmd_oracle(args) -> int:
    p = PotentialParams(args.g, args.a)
    res = oracle_ground_state(p, OracleConfig(L=args.L, n=args.n))
    census = peak_census(res.x, res.psi)
    print(f"E = {res.energy:.6f} +/- {res.error_estimate:.1e}   shape: {census.kind}")
    if args.out:
        rows = [
            [_io.format_float(float(xv)), _io.format_float(float(pv))]
            for xv, pv in zip(res.x, res.psi)
        ]
        _io.write_csv(args.out, {"g": args.g, "a": args.a, "L": args.L, "n": args.n},
                      ["x", "psi"], rows)
        print(f"wrote {args.out}")
    return EXIT_OK


def _check(name: str, ok: bool, detail: str, results: list) -> None:
    results.append((name, ok, detail))
    print(f"{'PASS' if ok else 'FAIL'} {name}: {detail}")


def cmd_verify(args) -> int:
    """Run the full invariant suite; exit 0 only if every check passes."""
    results: list[tuple[str, bool, str]] = []
    rng = np.random.default_rng(20250810)
    a_s = rng.uniform(1e-6, 5.0, 10000)
    x_s = rng.uniform(0.0, 4.0, 10000)

    # factorization identity of the u pair; residuals are relative to the
    # combined magnitude of the summed terms (the subtraction cancels by
    # construction)
    t1 = region.alpha(a_s, x_s) ** 2
    t2 = 64.0 * (x_s**2 + a_s) * region.beta(a_s, x_s) ** 2
    rhs = (x_s**2 - 1.0) ** 2 * region.gamma_poly(a_s, x_s)
    res1 = float(np.max(np.abs(t1 - t2 - rhs) / (t1 + t2 + np.abs(rhs) + 1.0)))
    _check("u-factorization-identity", res1 <= 1e-9, f"max rel residual {res1:.2e}", results)

    ta = region.alpha_tilde(a_s, x_s)
    tb = region.beta_tilde(a_s, x_s)
    tg = region.gamma_tilde(a_s, x_s)
    t1 = ta**2
    t2 = 64.0 * (x_s**2 + a_s) * tb**2
    rhs = (x_s**2 - 1.0) ** 3 * tg
    res2 = float(np.max(np.abs(t1 - t2 - rhs) / (t1 + t2 + np.abs(rhs) + 1.0)))
    _check("uprime-factorization-identity", res2 <= 1e-9, f"max rel residual {res2:.2e}", results)

    # coefficient table vs the factorization route, away from x=1
    away = np.abs(x_s - 1.0) > 0.05
    tg_fact = (ta[away] ** 2 - 64.0 * (x_s[away] ** 2 + a_s[away]) * tb[away] ** 2) / (
        x_s[away] ** 2 - 1.0
    ) ** 3
    rel = np.abs(tg_fact - tg[away]) / (np.abs(tg[away]) + 1.0)
    res3 = float(rel.max())
    _check("gamma-tilde-table", res3 <= 1e-8, f"max rel residual {res3:.2e}", results)

    s3 = region.verify_section3_positivity()
    _check("a2-positivity-chain", s3.all_positive and s3.inequality_holds,
           f"min combination {s3.min_combination:.3e} at x={s3.argmin_x:.3f}", results)

    xs = np.linspace(1e-3, 10.0, 10000)
    up_closed = region.u_prime_a2(xs)
    up_gen = region.eval_u_prime(2.0, xs)
    rel = np.abs(up_closed - up_gen) / np.abs(up_gen)
    _check("uprime-a2-route-match", float(rel.max()) <= 1e-9,
           f"max rel diff {float(rel.max()):.2e}", results)
    _check("uprime-a2-negative", bool(np.all(up_gen < 0.0)),
           f"max u' {float(up_gen.max()):.3e}", results)

    ok_u = True
    worst = math.inf
    for a in (0.1, 0.664, 1.0, 2.0, 3.0, 10.0):
        u = eval_u(PotentialParams(1.0, a), np.linspace(0.0, 6.0, 4000))
        worst = min(worst, float(u.min()))
        ok_u = ok_u and bool(np.all(u > 0.0))
    _check("u-positive-all-a", ok_u, f"min u over sweeps {worst:.3e}", results)

    ac = region.find_a_c(tol=1e-4)
    _check("critical-shape-value", 0.654 <= ac.a_c <= 0.674 and ac.width <= 1e-3,
           f"a_c = {ac.a_c:.4f}, width {ac.width:.1e}", results)

    for bc in ("I", "II"):
        rep = solve(PotentialParams(1.0, 2.0), Grid(), BoundaryCondition(bc),
                    max_iter=5, tol=0.0)
        ref = reference.TABLE1[0 if bc == "I" else 1]
        diff = max(abs(c - r) for c, r in zip(rep.energies[:6], ref.energies))
        _check(f"table1-bc{bc}", diff <= 5e-4 and not rep.violations,
               f"max cell diff {diff:.1e}, violations {len(rep.violations)}", results)

    rep = solve(PotentialParams(1.0, 2.0), Grid(), BoundaryCondition.II, max_iter=8)
    res = oracle_ground_state(PotentialParams(1.0, 2.0))
    gap = abs(rep.energies[-1] - res.energy)
    bracket_ok = rep.energies[2] - 1e-9 <= res.energy <= rep.energies[3] + 1e-9
    _check("oracle-cross-check", gap <= 5e-4 and bracket_ok,
           f"converged-vs-reference gap {gap:.1e}, bracketing {bracket_ok}", results)

    exact = np.exp(-res.x**4 / 4.0)
    dev = float(np.max(np.abs(res.psi - exact)))
    _check("exact-case", abs(res.energy - 1.0) <= 1e-4 and dev <= 1e-4,
           f"|E-1| = {abs(res.energy - 1.0):.1e}, max|psi-exact| = {dev:.1e}", results)

    # demonstration of the guard outside the region (not counted as a failure)
    sup = region._sup_u_prime(0.3)
    print(f"EXPECTED-FAIL (demo) uprime-negative at a=0.3: sup u' = {sup:.3e} > 0 "
          "(outside the monotone region, as it should be)")

    n_fail = sum(1 for _, ok, _ in results if not ok)
    print(f"verify: {len(results) - n_fail}/{len(results)} checks passed")
    return EXIT_OK if n_fail == 0 else EXIT_CHECK_FAILED


def build_parser() -> argparse.ArgumentParser:
    ap = argparse.ArgumentParser(
        prog="gdwell",
        description="Ground state of the generalized double-well potential "
                    "(g^2/2)(x^2-1)^2(x^2+a) by convergent iteration, with "
                    "runtime verification of its monotone-convergence guarantees.",
    )
    sub = ap.add_subparsers(dest="command", required=True)

    s = sub.add_parser("solve", help="run the iteration for one (g, a)")
    s.add_argument("--g", type=float)
    s.add_argument("--a", type=float)
    s.add_argument("--bc", choices=["I", "II"])
    s.add_argument("--x-max", dest="x_max", type=float)
    s.add_argument("--n-points", dest="n_points", type=int)
    s.add_argument("--tol", type=float)
    s.add_argument("--max-iter", dest="max_iter", type=int)
    s.add_argument("--out")
    s.add_argument("--format", choices=["json", "csv"])
    s.add_argument("--config", help="JSON file with the same keys; flags override")
    s.add_argument("--dump-psi", help="CSV of x, psi0, psi2, psi_final, psi_oracle")
    s.set_defaults(fn=cmd_solve)

    t = sub.add_parser("table", help="recompute a built-in reference table and diff it")
    t.add_argument("which", type=int, choices=[1, 2, 3])
    t.add_argument("--out-dir")
    t.set_defaults(fn=cmd_table)

    r = sub.add_parser("region", help="trace convergence-region curves and a_c")
    r.add_argument("--resolution", type=int, default=200)
    r.add_argument("--out-dir")
    r.set_defaults(fn=cmd_region)

    o = sub.add_parser("oracle", help="independent finite-difference ground state")
    o.add_argument("--g", type=float, required=True)
    o.add_argument("--a", type=float, required=True)
    o.add_argument("--L", type=float, default=6.0)
    o.add_argument("--n", type=int, default=4000)
    o.add_argument("--out")
    o.set_defaults(fn=cmd_oracle)

    v = sub.add_parser("verify", help="run the full invariant/identity suite")
    v.set_defaults(fn=cmd_verify)
    return ap


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.fn(args)
    except (ValueError, ConvergenceDomainError, GridError, json.JSONDecodeError,
            FileNotFoundError) as exc:
        print(f"configuration error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (PositivityLossError, DegenerateDenominatorError, OverflowGuardError,
            GridMismatchError, DiscretizationError, BracketError) as exc:
        print(f"numeric error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC
    except GdwellError as exc:  # pragma: no cover
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":
    raise SystemExit(main())
