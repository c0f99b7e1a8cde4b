"""Command-line driver: parameter computation, experiments, self-tests.

Subcommands
    params      print the optimal MFD weights and local W for (nu, gamma)
    converge    mesh-refinement study, writes a convergence CSV
    anisotropy  dispersion-error sweep over propagation angles, writes CSV
    simulate    run one simulation, write probe traces and snapshots
    roots       print the continuous dispersion roots for a wave number
    selftest    run the built-in oracle checks

Configuration is a single JSON document (--config); unknown keys are
rejected.  Physical constants default to eps0 = c0 = omega_i = omega_p = 1.
Exit codes: 0 success, 1 validation error, 2 numerical failure.
"""

from __future__ import annotations

import argparse
import json
import math
import os
import sys

import numpy as np

from . import analysis, dispersion, selftest
from .mesh import build_mesh
from .operators import (MfdParams, optimal_local_W, optimal_params,
                        params_for_scheme)
from .plasma import Medium, RegimeError
from .stepper import SimConfig, UnstableSimulationError, run, save_snapshot

EXIT_OK = 0
EXIT_VALIDATION = 1
EXIT_NUMERICAL = 2

MEDIUM_KEYS = {"eps0", "c0", "omega_i", "omega_p"}

COMMAND_KEYS = {
    "converge": {"log2_h", "schemes", "nu", "T", "kx_pi", "ky_pi",
                 "medium", "out"},
    "anisotropy": {"k", "ppw", "n_theta", "nu", "gammas", "nu_rule",
                   "schemes", "medium", "out", "fixed_cell_area"},
    "simulate": {"nx", "ny", "Lx", "Ly", "scheme", "params", "nu", "T",
                 "kx_pi", "ky_pi", "medium", "probes", "snapshot_stride",
                 "out"},
    "roots": {"k", "medium", "form"},
    "params": {"nu", "gamma"},
}

DEFAULTS = {
    "converge": {"log2_h": [-4, -5, -6], "schemes": ["etmfd", "et-yee"],
                 "nu": 0.5, "T": 4.0, "kx_pi": 1, "ky_pi": 1,
                 "out": "converge.csv"},
    "anisotropy": {"k": 4.0, "ppw": [12, 24], "n_theta": 64, "nu": 0.5,
                   "gammas": [1.0], "nu_rule": "fixed",
                   "schemes": ["etmfd", "et-yee"], "out": "anisotropy.csv",
                   "fixed_cell_area": False},
    "simulate": {"nx": 16, "ny": 16, "Lx": 1.0, "Ly": 1.0,
                 "scheme": "etmfd", "nu": 0.5, "T": 4.0, "kx_pi": 1,
                 "ky_pi": 1, "probes": "auto", "snapshot_stride": 0,
                 "out": "sim_out"},
    "roots": {"k": 4.0, "form": "physical"},
    "params": {"nu": 0.5, "gamma": 1.0},
}


class CliError(ValueError):
    """Configuration or usage problem (exit code 1)."""


def load_config(path: str | None, command: str) -> dict:
    cfg = dict(DEFAULTS.get(command, {}))
    if path is not None:
        if not os.path.exists(path):
            raise CliError(f"config file not found: {path}")
        with open(path) as fh:
            try:
                user = json.load(fh)
            except json.JSONDecodeError as exc:
                raise CliError(f"config is not valid JSON: {exc}") from exc
        allowed = COMMAND_KEYS[command]
        unknown = set(user) - allowed
        if unknown:
            raise CliError(
                f"unknown config keys for '{command}': {sorted(unknown)} "
                f"(allowed: {sorted(allowed)})")
        cfg.update(user)
    return cfg


def medium_from_config(cfg: dict) -> Medium:
    block = cfg.get("medium", {})
    unknown = set(block) - MEDIUM_KEYS
    if unknown:
        raise CliError(f"unknown medium keys: {sorted(unknown)}")
    return Medium(eps0=block.get("eps0", 1.0), c0=block.get("c0", 1.0),
                  omega_i=block.get("omega_i", 1.0),
                  omega_p=block.get("omega_p", 1.0))


def _fmt6(x: float) -> str:
    return f"{x:.6g}"


def _cell(v) -> str:
    if isinstance(v, (float, np.floating)):
        return repr(float(v))  # full precision, byte-stable
    return str(v)


def write_csv(path: str, header, rows) -> None:
    os.makedirs(os.path.dirname(path) or ".", exist_ok=True)
    with open(path, "w") as fh:
        fh.write(",".join(header) + "\n")
        for row in rows:
            fh.write(",".join(_cell(v) for v in row) + "\n")


# ---- commands ---------------------------------------------------------------

def cmd_params(args) -> int:
    cfg = load_config(args.config, "params")
    nu = args.nu if args.nu is not None else cfg["nu"]
    gamma = args.gamma if args.gamma is not None else cfg["gamma"]
    p = optimal_params(nu, gamma)
    print(f"nu = {_fmt6(nu)}, gamma = {_fmt6(gamma)}")
    print(f"w1 = {_fmt6(p.w1)}")
    print(f"w2 = {_fmt6(p.w2)}")
    print(f"w3 = {_fmt6(p.w3)}")
    W = optimal_local_W(nu, nu / gamma, 1.0, gamma)
    print("optimal local W (unit dx, dy = gamma):")
    for row in W:
        print("  " + "  ".join(f"{v:>12.6g}" for v in row))
    return EXIT_OK


def cmd_converge(args) -> int:
    cfg = load_config(args.config, "converge")
    if not cfg["log2_h"]:
        raise CliError("log2_h list must not be empty")
    medium = medium_from_config(cfg)
    sol = analysis.make_exact_solution(cfg["kx_pi"] * math.pi,
                                       cfg["ky_pi"] * math.pi, medium)
    h_list = [2.0 ** p for p in cfg["log2_h"]]
    all_rows = []
    for scheme in cfg["schemes"]:
        rows = analysis.convergence_study(h_list, scheme, medium, sol,
                                          nu=cfg["nu"], T=cfg["T"],
                                          max_workers=args.threads)
        all_rows.extend(rows)
    out = os.path.join(args.out, cfg["out"]) if args.out else cfg["out"]
    header = ["log2_h", "scheme", "field", "err_l2", "rate_l2",
              "err_disp", "rate_disp"]
    write_csv(out, header, [[r[k] for k in header] for r in all_rows])
    print(f"wrote {out}")
    print(f"{'log2_h':>7} {'scheme':>8} {'field':>5} {'err_l2':>12} "
          f"{'rate':>8} {'err_disp':>12} {'rate':>8}")
    for r in all_rows:
        print(f"{r['log2_h']:>7.0f} {r['scheme']:>8} {r['field']:>5} "
              f"{r['err_l2']:>12.6g} {r['rate_l2']:>8.4g} "
              f"{r['err_disp']:>12.6g} {r['rate_disp']:>8.4g}")
    return EXIT_OK


def cmd_anisotropy(args) -> int:
    cfg = load_config(args.config, "anisotropy")
    if not cfg["ppw"]:
        raise CliError("ppw list must not be empty")
    medium = medium_from_config(cfg)
    theta = np.linspace(0.0, 2.0 * np.pi, int(cfg["n_theta"]),
                        endpoint=False)
    header = ["theta", "k", "ppw", "scheme", "abs_err", "re_err", "im_err"]
    base = os.path.join(args.out, cfg["out"]) if args.out else cfg["out"]
    k = float(cfg["k"])
    for gamma in cfg["gammas"]:
        if cfg["nu_rule"] == "gamma_cubed":
            nu = cfg["nu"] * min(gamma ** 3, 1.0)
        elif cfg["nu_rule"] == "fixed":
            nu = cfg["nu"]
        else:
            raise CliError(f"unknown nu_rule {cfg['nu_rule']!r}")
        schemes = [(s, params_for_scheme(s, nu, gamma))
                   for s in cfg["schemes"]]
        h_ref = None
        if cfg["fixed_cell_area"]:
            h_ref = 2.0 * np.pi / (k * cfg["ppw"][0])
        rows = dispersion.anisotropy_sweep(theta, k, cfg["ppw"], nu, gamma,
                                           medium, schemes, h_ref=h_ref)
        out = base
        if len(cfg["gammas"]) > 1:
            stem, ext = os.path.splitext(base)
            out = f"{stem}_gamma{gamma:g}{ext}"
        write_csv(out, header, rows)
        print(f"wrote {out} ({len(rows)} rows, gamma={gamma:g}, "
              f"nu={_fmt6(nu)})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    cfg = load_config(args.config, "simulate")
    medium = medium_from_config(cfg)
    mesh = build_mesh(cfg["nx"], cfg["ny"], cfg["Lx"], cfg["Ly"], "pec")
    if "params" in cfg:
        w1, w2, w3 = cfg["params"]
        params = MfdParams(w1, w2, w3)
    else:
        params = params_for_scheme(cfg["scheme"], cfg["nu"], mesh.gamma)
    sol = analysis.make_exact_solution(cfg["kx_pi"] * math.pi,
                                       cfg["ky_pi"] * math.pi, medium)
    probes = cfg["probes"]
    if probes == "auto":
        probes = [analysis.pick_probe_edge(mesh, sol)]
    config = SimConfig(mesh=mesh, medium=medium, params=params,
                       nu=cfg["nu"], T=cfg["T"], probes=tuple(probes),
                       snapshot_stride=int(cfg["snapshot_stride"]))
    result = run(config,
                 lambda x, y: analysis.exact_E(sol, x, y, 0.0),
                 lambda x, y: analysis.exact_E(sol, x, y, config.dt),
                 lambda x, y: analysis.exact_J(sol, x, y, 0.0))

    outdir = os.path.join(args.out, cfg["out"]) if args.out else cfg["out"]
    os.makedirs(outdir, exist_ok=True)
    for e in probes:
        rows = zip(result.times, result.probe_E[e], result.probe_J[e])
        write_csv(os.path.join(outdir, f"probe_{e}.csv"),
                  ["t", "E", "J"], rows)
    for snap in result.snapshots:
        save_snapshot(os.path.join(outdir, f"snapshot_{snap.step:06d}"),
                      mesh, snap)
    summary = {"steps": result.state.n, "t_final": result.t_final,
               "dt": config.dt, "probes": list(probes),
               "snapshots": len(result.snapshots),
               "max_abs_E": float(np.abs(result.state.E_curr).max())}
    with open(os.path.join(outdir, "summary.json"), "w") as fh:
        json.dump(summary, fh, indent=2, sort_keys=True)
        fh.write("\n")
    print(f"wrote {outdir} ({result.state.n} steps, "
          f"{len(result.snapshots)} snapshots)")
    return EXIT_OK


def cmd_roots(args) -> int:
    cfg = load_config(args.config, "roots")
    k = args.k if args.k is not None else cfg["k"]
    medium = medium_from_config(cfg)
    form = cfg["form"]
    roots = dispersion.continuous_roots(k, medium, form=form)
    print(f"k = {_fmt6(k)}, form = {form}")
    for w in sorted(roots, key=lambda z: (-abs(z.real), z.imag)):
        print(f"  omega = {w.real:+.9g} {w.imag:+.9g}i")
    if form == "physical":
        w = dispersion.oscillatory_root(k, medium)
        print(f"propagating mode: decay a = {_fmt6(w.imag)}, "
              f"frequency b = {_fmt6(w.real)}")
    return EXIT_OK


def cmd_selftest(args) -> int:
    ok = selftest.run_all()
    return EXIT_OK if ok else EXIT_NUMERICAL


# ---- entry point ------------------------------------------------------------

class _Parser(argparse.ArgumentParser):
    def error(self, message):  # argparse default exits 2; keep 1 for usage
        self.print_usage(sys.stderr)
        self.exit(EXIT_VALIDATION, f"{self.prog}: error: {message}\n")


def make_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="etmfd", description=__doc__,
                     formatter_class=argparse.RawDescriptionHelpFormatter)
    parser.add_argument("--config", default=None, help="JSON config file")
    parser.add_argument("--out", default=None, help="output directory")
    parser.add_argument("--threads", type=int, default=1,
                        help="worker threads for sweeps")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("params", help="optimal MFD weights for (nu, gamma)")
    p.add_argument("--nu", type=float, default=None)
    p.add_argument("--gamma", type=float, default=None)
    p.set_defaults(func=cmd_params)

    p = sub.add_parser("converge", help="mesh-refinement study")
    p.set_defaults(func=cmd_converge)

    p = sub.add_parser("anisotropy", help="dispersion-error angle sweep")
    p.set_defaults(func=cmd_anisotropy)

    p = sub.add_parser("simulate", help="run one simulation")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("roots", help="continuous dispersion roots")
    p.add_argument("--k", type=float, default=None)
    p.set_defaults(func=cmd_roots)

    p = sub.add_parser("selftest", help="run built-in oracle checks")
    p.set_defaults(func=cmd_selftest)
    return parser


def main(argv=None) -> int:
    parser = make_parser()
    args = parser.parse_args(argv)
    try:
        if args.config is not None and not os.path.exists(args.config):
            raise CliError(f"config file not found: {args.config}")
        return args.func(args)
    except (CliError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_VALIDATION
    except (UnstableSimulationError, RegimeError, ArithmeticError,
            ZeroDivisionError, np.linalg.LinAlgError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERICAL


if __name__ == "__main__":
    sys.exit(main())
