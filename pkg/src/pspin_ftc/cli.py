"""Command-line entry point: ``pspin-ftc <subcommand> [options]``.

Exit codes: 0 success, 1 configuration error, 2 numerical failure,
3 I/O error.
"""
from __future__ import annotations

import argparse
from dataclasses import asdict
import sys
import time

import numpy as np

from .config import ConfigError, RunConfig, load_config
from .criticality import critical_points, dqpt_point
from .floquet import build_floquet, dominant_frequency, evolve, power_spectrum
from .otoc import otoc_long_time_average, otoc_series
from .resonance import validate_effective_spectrum
from .results import table_to_csv, write_table
from .spectral import eigenphases, spacing_ratio
from .spin import build_spin_algebra
from .sweep import COLUMNS, model_params, initial_state, run_sweep, run_switching_protocol

EXIT_OK, EXIT_CONFIG, EXIT_NUMERIC, EXIT_IO = 0, 1, 2, 3

# desk-scale caps; exceeding them needs --big
MAX_N_SINGLE = 1024
MAX_N_OTOC_SWEEP = 512
MAX_GRID = 64


def _check_caps(cfg: RunConfig, command: str, big: bool):
    if big:
        return
    if cfg.N > MAX_N_SINGLE:
        raise ConfigError(f"N = {cfg.N} exceeds {MAX_N_SINGLE}; pass --big to allow")
    if cfg.sweep is not None and command in ("phase-diagram", "classical-sweep"):
        if cfg.sweep.lambda_count > MAX_GRID or cfg.sweep.alpha_count > MAX_GRID:
            raise ConfigError(f"sweep grid exceeds {MAX_GRID}x{MAX_GRID}; pass --big to allow")
        if cfg.sweep.diagnostic == "otoc" and cfg.N > MAX_N_OTOC_SWEEP:
            raise ConfigError(f"OTOC sweeps are capped at N = {MAX_N_OTOC_SWEEP}; pass --big to allow")


def _base_meta(cfg: RunConfig, args, command: str) -> dict:
    return {"command": command, "seed": cfg.seed, "config": asdict(cfg),
            "threads": args.threads}


def _series_rows(values):
    return [{"step": i, "value": float(v)} for i, v in enumerate(values)]


def _spectrum_rows(spec):
    return [{"omega": float(w), "power": float(p)} for w, p in zip(spec.omega, spec.power)]


def _evolve_series(cfg):
    algebra = build_spin_algebra(cfg.N)
    alpha = cfg.model.alpha_B + cfg.model.h
    U = build_floquet(model_params(cfg, cfg.model.Lambda, alpha), algebra, cfg.model.mode)
    return evolve(initial_state(cfg, algebra), U, cfg.dynamics.T_max, np.asarray(algebra.Sz) / algebra.S)


def cmd_evolve(cfg, args):
    series = _evolve_series(cfg)
    meta = _base_meta(cfg, args, "evolve") | {"observable": "Sz/S", "renormalizations": series.renormalizations}
    write_table(args.out, "evolve", ["step", "value"], _series_rows(series.values), meta, args.force)


def cmd_spectrum(cfg, args):
    series = _evolve_series(cfg)
    spec = power_spectrum(series, drop_transient=cfg.analysis.drop_transient, normalize=cfg.analysis.normalize)
    w, pw = dominant_frequency(spec)
    meta = _base_meta(cfg, args, "spectrum") | {
        "drop_transient": cfg.analysis.drop_transient, "normalized": cfg.analysis.normalize,
        "T_len": spec.T_len, "dominant_omega": w, "dominant_freq": w / (2 * np.pi), "dominant_power": pw}
    write_table(args.out, "spectrum", ["omega", "power"], _spectrum_rows(spec), meta, args.force)
    print(f"dominant omega/2pi = {w / (2 * np.pi):.6f}")


def cmd_rtilde(cfg, args):
    algebra = build_spin_algebra(cfg.N)
    alpha = cfg.model.alpha_B + cfg.model.h
    U = build_floquet(model_params(cfg, cfg.model.Lambda, alpha), algebra, cfg.model.mode)
    stats = spacing_ratio(eigenphases(U, power=cfg.analysis.q))
    row = {"q": cfg.analysis.q, "Lambda": cfg.model.Lambda, "alpha": alpha,
           "rbar": stats.rbar, "rtilde": stats.rtilde, "error": ""}
    meta = _base_meta(cfg, args, "rtilde") | {"n_clamped": stats.n_clamped}
    write_table(args.out, "rtilde", COLUMNS["rtilde"], [row], meta, args.force)
    print(f"rtilde = {stats.rtilde:.6f}")


def cmd_otoc(cfg, args):
    algebra = build_spin_algebra(cfg.N)
    alpha = cfg.model.alpha_B + cfg.model.h
    U = build_floquet(model_params(cfg, cfg.model.Lambda, alpha), algebra, cfg.model.mode)
    series = otoc_series(U, T_max=cfg.dynamics.T_max, algebra=algebra)
    avg = otoc_long_time_average(series, burn_in=cfg.analysis.burn_in, threshold=cfg.analysis.threshold)
    meta = _base_meta(cfg, args, "otoc") | {"threshold": avg.threshold, "burn_in": cfg.analysis.burn_in,
                                            "W": series.operators[0], "V": series.operators[1],
                                            "state": series.state, "max_imag": series.max_imag}
    write_table(args.out, "otoc_series", ["step", "value"], _series_rows(series.values), meta, args.force)
    row = {"Lambda": cfg.model.Lambda, "alpha": alpha, "F_inf": avg.F_inf, "F_inf_stderr": avg.stderr,
           "threshold_flag": avg.nonzero, "error": ""}
    write_table(args.out, "otoc", COLUMNS["otoc"], [row], meta, args.force)
    print(f"F_inf = {avg.F_inf:.6f} +/- {avg.stderr:.2e}")


def _sweep(cfg, args, command):
    result = run_sweep(cfg, threads=args.threads)
    meta = _base_meta(cfg, args, command) | result.metadata
    write_table(args.out, f"sweep_{result.diagnostic}", result.columns, result.rows, meta, args.force)
    if result.metadata["failed_cells"]:
        print(f"{result.metadata['failed_cells']} cells failed; see the error column", file=sys.stderr)


def cmd_phase_diagram(cfg, args):
    if cfg.sweep is None:
        raise ConfigError("phase-diagram needs a [sweep] section")
    _sweep(cfg, args, "phase-diagram")


def cmd_classical_sweep(cfg, args):
    if cfg.sweep is None:
        raise ConfigError("classical-sweep needs a [sweep] section")
    cfg.sweep.diagnostic = "gmeasure"
    _sweep(cfg, args, "classical-sweep")


def cmd_resonance_check(cfg, args):
    algebra = build_spin_algebra(cfg.N)
    rep = validate_effective_spectrum(cfg.analysis.q, cfg.model.p, cfg.model.Lambda, cfg.model.h, algebra)
    row = {"q": rep.q, "p": rep.p, "Lambda": rep.Lambda, "h": rep.h, "N": rep.N,
           "mismatch_minus": rep.mismatch["minus"], "mismatch_plus": rep.mismatch["plus"],
           "mismatch_half_minus": rep.mismatch_half["minus"], "mismatch_half_plus": rep.mismatch_half["plus"],
           "sign_convention": rep.best, "distinguishable": rep.distinguishable, "exponent": rep.exponent}
    meta = _base_meta(cfg, args, "resonance-check") | {"sign_convention": rep.best,
                                                       "distinguishable": rep.distinguishable}
    write_table(args.out, "resonance", list(row), [row], meta, args.force)
    print(f"sign = {rep.best}, mismatch = {rep.mismatch[rep.best]:.3e}, exponent = {rep.exponent:.3f}")


def cmd_switch(cfg, args):
    if not cfg.schedule:
        raise ConfigError("switch needs a [switching] schedule")
    res = run_switching_protocol(cfg)
    meta = _base_meta(cfg, args, "switch") | {"boundaries": res.boundaries,
                                              "segment_peaks": res.segment_peaks(),
                                              "max_norm_error": res.max_norm_error,
                                              "drop_transient": cfg.analysis.drop_transient}
    write_table(args.out, "switch_series", ["step", "value"], _series_rows(res.series.values), meta, args.force)
    write_table(args.out, "switch_spectrum", ["omega", "power"], _spectrum_rows(res.spectrum), meta, args.force)
    print("segment peaks (omega/2pi): " + ", ".join(f"{f:.4f}" for f in res.segment_peaks()))


def cmd_critical_points(args):
    cp = critical_points(args.p)
    row = cp.as_row()
    cols = list(row)
    if args.out is None:
        sys.stdout.write(table_to_csv(cols, [row]))
        return
    meta = {"command": "critical-points", "p": args.p}
    if args.p > 6:
        d = dqpt_point(args.p)
        meta.update(Z_DQPT_approx=d.Z_approx, Z_DQPT_approx_error=d.approx_error)
    write_table(args.out, f"critical_points_p{args.p}", cols, [row], meta, args.force)


COMMANDS = {
    "evolve": cmd_evolve,
    "spectrum": cmd_spectrum,
    "rtilde": cmd_rtilde,
    "otoc": cmd_otoc,
    "classical-sweep": cmd_classical_sweep,
    "phase-diagram": cmd_phase_diagram,
    "resonance-check": cmd_resonance_check,
    "switch": cmd_switch,
}


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="pspin-ftc", description="Kicked p-spin time-crystal toolkit.")
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--config", help="INI run configuration")
    common.add_argument("--out", help="output directory (default: output.dir from the config)")
    common.add_argument("--threads", type=int, default=1, help="worker processes for sweeps")
    common.add_argument("--seed", type=int, help="override run.seed")
    common.add_argument("--force", action="store_true", help="overwrite existing outputs")
    common.add_argument("--big", action="store_true", help="allow sizes above the desk-scale caps")
    sub = parser.add_subparsers(dest="command", required=True)
    for name in COMMANDS:
        sub.add_parser(name, parents=[common])
    cp = sub.add_parser("critical-points", parents=[common])
    cp.add_argument("--p", type=int, required=True)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    try:
        if args.threads < 1:
            raise ConfigError("--threads must be >= 1")
        if args.command == "critical-points":
            if args.p < 2:
                raise ConfigError("--p must be >= 2")
            cmd_critical_points(args)
            return EXIT_OK
        if args.config is None:
            raise ConfigError(f"{args.command} needs --config")
        cfg = load_config(args.config)
        if args.seed is not None:
            cfg.seed = args.seed
        if args.out is None:
            args.out = cfg.out_dir
        _check_caps(cfg, args.command, args.big)
        t0 = time.perf_counter()
        COMMANDS[args.command](cfg, args)
        print(f"{args.command} finished in {time.perf_counter() - t0:.1f} s -> {args.out}", file=sys.stderr)
        return EXIT_OK
    except ConfigError as exc:
        print(f"config error: {exc}", file=sys.stderr)
        return EXIT_CONFIG
    except (OSError, FileExistsError) as exc:
        print(f"I/O error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (np.linalg.LinAlgError, ArithmeticError, RuntimeError, ValueError) as exc:
        print(f"numerical failure: {exc}", file=sys.stderr)
        return EXIT_NUMERIC


if __name__ == "__main__":  # pragma: no cover
    sys.exit(main())
