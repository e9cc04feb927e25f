"""Parameter sweeps over (Lambda, alpha) and the angle-switching driver.

Sweep cells are independent work units. They run in a process pool, and
results are merged in row-major order (Lambda outer, alpha inner) whatever
order the workers finish in. A cell that raises is recorded with NaN values
and its error message; the sweep carries on.
"""
from __future__ import annotations

from concurrent.futures import ProcessPoolExecutor
from dataclasses import dataclass, field
import time

import numpy as np

from .classical import averaged_correlation, fibonacci_sphere, g_from_correlation
from .config import RunConfig
from .floquet import (ModelParams, PowerSpectrum, TimeSeries, build_floquet, dominant_frequency,
                      power_spectrum)
from .otoc import otoc_long_time_average, otoc_series
from .spectral import eigenphases, spacing_ratio
from .spin import SpinAlgebra, build_spin_algebra, coherent_state, dicke_state

__all__ = [
    "COLUMNS",
    "SweepResult",
    "SwitchingResult",
    "sweep_axes",
    "initial_state",
    "model_params",
    "rtilde_cell",
    "otoc_cell",
    "gmeasure_row",
    "run_sweep",
    "run_switching_protocol",
]

COLUMNS = {
    "rtilde": ["q", "Lambda", "alpha", "rbar", "rtilde", "error"],
    "otoc": ["Lambda", "alpha", "F_inf", "F_inf_stderr", "threshold_flag", "error"],
    "gmeasure": ["Lambda", "alpha", "q", "G", "omega_star", "error"],
}


@dataclass
class SweepResult:
    diagnostic: str
    shape: tuple[int, int]
    rows: list[dict]
    metadata: dict = field(default_factory=dict)

    @property
    def columns(self) -> list[str]:
        return COLUMNS[self.diagnostic]

    def values(self, column: str) -> np.ndarray:
        """Column as a (lambda_count, alpha_count) array."""
        return np.array([r[column] for r in self.rows], dtype=float).reshape(self.shape)


def sweep_axes(cfg: RunConfig) -> tuple[np.ndarray, np.ndarray]:
    s = cfg.sweep
    return (np.linspace(s.lambda_min, s.lambda_max, s.lambda_count),
            np.linspace(s.alpha_min, s.alpha_max, s.alpha_count))


def initial_state(cfg: RunConfig, algebra: SpinAlgebra) -> np.ndarray:
    d = cfg.dynamics
    if d.dicke is not None:
        return dicke_state(d.dicke, algebra)
    return coherent_state(d.theta, d.phi, algebra)


def model_params(cfg: RunConfig, Lambda: float, alpha: float) -> ModelParams:
    # sweep angles are the effective kick angle alpha_B + h
    return ModelParams.from_alpha(cfg.model.p, Lambda, alpha, cfg.model.h)


def rtilde_cell(cfg: RunConfig, Lambda: float, alpha: float) -> dict:
    algebra = build_spin_algebra(cfg.N)
    U = build_floquet(model_params(cfg, Lambda, alpha), algebra, cfg.model.mode)
    stats = spacing_ratio(eigenphases(U, power=cfg.analysis.q))
    return {"q": cfg.analysis.q, "Lambda": Lambda, "alpha": alpha, "rbar": stats.rbar,
            "rtilde": stats.rtilde}


def otoc_cell(cfg: RunConfig, Lambda: float, alpha: float) -> dict:
    algebra = build_spin_algebra(cfg.N)
    U = build_floquet(model_params(cfg, Lambda, alpha), algebra, cfg.model.mode)
    series = otoc_series(U, T_max=cfg.dynamics.T_max, algebra=algebra)
    avg = otoc_long_time_average(series, burn_in=cfg.analysis.burn_in, threshold=cfg.analysis.threshold)
    return {"Lambda": Lambda, "alpha": alpha, "F_inf": avg.F_inf, "F_inf_stderr": avg.stderr,
            "threshold_flag": avg.nonzero}


def gmeasure_row(cfg: RunConfig, Lambda: float, alphas: np.ndarray) -> list[dict]:
    """Unnormalized G for one Lambda and a row of kick angles, evaluated as a batch."""
    grid = fibonacci_sphere(cfg.analysis.grid_points)
    alphas = np.asarray(alphas, dtype=float)
    C = averaged_correlation(grid, alphas, Lambda, cfg.model.p, cfg.dynamics.T_max)
    rows = []
    for j, a in enumerate(alphas):
        G, omega_star = g_from_correlation(C[:, j], cfg.analysis.q)
        rows.append({"Lambda": Lambda, "alpha": float(a), "q": cfg.analysis.q, "G": G,
                     "omega_star": omega_star})
    return rows


def _nan_row(diagnostic: str, cfg: RunConfig, Lambda: float, alpha: float, exc: Exception) -> dict:
    row = {c: float("nan") for c in COLUMNS[diagnostic]}
    row.update(Lambda=Lambda, alpha=alpha, error=f"{type(exc).__name__}: {exc}")
    if "q" in row:
        row["q"] = cfg.analysis.q
    if "threshold_flag" in row:
        row["threshold_flag"] = None
    return row


def _run_unit(args) -> list[dict]:
    diagnostic, cfg, Lambda, alphas = args
    if diagnostic == "gmeasure":
        try:
            rows = gmeasure_row(cfg, Lambda, alphas)
        except Exception as exc:  # noqa: BLE001 - recorded in the table
            return [_nan_row(diagnostic, cfg, Lambda, a, exc) for a in alphas]
        for r in rows:
            r["error"] = ""
        return rows
    fn = rtilde_cell if diagnostic == "rtilde" else otoc_cell
    out = []
    for a in alphas:
        try:
            row = fn(cfg, float(Lambda), float(a))
            row["error"] = ""
        except Exception as exc:  # noqa: BLE001
            row = _nan_row(diagnostic, cfg, Lambda, a, exc)
        out.append(row)
    return out


def run_sweep(cfg: RunConfig, threads: int = 1) -> SweepResult:
    """Evaluate the configured diagnostic on every (Lambda, alpha) cell.

    ``rtilde`` and ``otoc`` dispatch one cell per task, ``gmeasure`` one
    Lambda row per task (the classical map is vectorized over alpha). For
    ``gmeasure`` a second pass divides G by its maximum over the sweep.
    """
    if cfg.sweep is None:
        raise ValueError("config has no [sweep] section")
    diagnostic = cfg.sweep.diagnostic
    lambdas, alphas = sweep_axes(cfg)
    if diagnostic == "gmeasure":
        units = [(diagnostic, cfg, float(L), alphas) for L in lambdas]
    else:
        units = [(diagnostic, cfg, float(L), np.array([a])) for L in lambdas for a in alphas]
    t0 = time.perf_counter()
    if threads > 1 and len(units) > 1:
        with ProcessPoolExecutor(max_workers=threads) as pool:
            chunks = list(pool.map(_run_unit, units))
    else:
        chunks = [_run_unit(u) for u in units]
    rows = [r for chunk in chunks for r in chunk]
    meta = {"diagnostic": diagnostic, "grid_shape": list(cfg.sweep.shape),
            "lambda_axis": lambdas, "alpha_axis": alphas}
    if diagnostic == "gmeasure":
        G = np.array([r["G"] for r in rows], dtype=float)
        gmax = float(np.nanmax(G)) if np.any(np.isfinite(G)) else float("nan")
        if gmax > 0:
            for r in rows:
                r["G"] = r["G"] / gmax
        meta.update(G_max=gmax, normalized=bool(gmax > 0), grid_points=cfg.analysis.grid_points)
    if diagnostic == "otoc":
        meta.update(threshold=cfg.analysis.threshold, burn_in=cfg.analysis.burn_in)
    meta["failed_cells"] = sum(1 for r in rows if r["error"])
    meta["elapsed_s"] = time.perf_counter() - t0
    meta["threads"] = threads
    return SweepResult(diagnostic=diagnostic, shape=cfg.sweep.shape, rows=rows, metadata=meta)


@dataclass
class SwitchingResult:
    series: TimeSeries
    spectrum: PowerSpectrum
    boundaries: list[int]
    segment_spectra: list[PowerSpectrum]
    max_norm_error: float

    def segment_peaks(self) -> list[float]:
        """Dominant non-DC omega / 2 pi of every segment."""
        return [dominant_frequency(s)[0] / (2 * np.pi) for s in self.segment_spectra]


def run_switching_protocol(cfg: RunConfig, schedule=None) -> SwitchingResult:
    """Evolve one state through consecutive kick angles.

    Each schedule entry ``(alpha, duration)`` gives the effective kick angle
    and the number of kicks. The state is carried across boundaries without
    re-preparation; the Sx eigenbasis is shared by every segment.
    The series holds f_Z = <Sz>/S at l = 0..sum(durations); segment k
    covers samples boundaries[k] + 1 .. boundaries[k + 1].
    """
    schedule = cfg.schedule if schedule is None else schedule
    if not schedule:
        raise ValueError("switching schedule is empty")
    for a, d in schedule:
        if not np.isfinite(a) or int(d) != d or d < 1:
            raise ValueError(f"invalid schedule entry ({a}, {d})")
    algebra = build_spin_algebra(cfg.N)
    obs = np.asarray(algebra.Sz) / algebra.S
    psi = initial_state(cfg, algebra)
    total = sum(int(d) for _, d in schedule)
    values = np.empty(total + 1)
    values[0] = np.vdot(psi, obs @ psi).real
    boundaries = [0]
    norm_err = 0.0
    l = 0
    for alpha, dur in schedule:
        U = build_floquet(model_params(cfg, cfg.model.Lambda, alpha), algebra, cfg.model.mode).U
        for _ in range(int(dur)):
            psi = U @ psi
            l += 1
            values[l] = np.vdot(psi, obs @ psi).real
        norm_err = max(norm_err, abs(np.linalg.norm(psi) - 1))
        boundaries.append(l)
    series = TimeSeries(values=values, label="f_Z")
    drop = cfg.analysis.drop_transient
    spectrum = power_spectrum(series, drop_transient=drop, normalize=cfg.analysis.normalize)
    seg_specs = [power_spectrum(values[b0 + 1:b1 + 1]) for b0, b1 in zip(boundaries[:-1], boundaries[1:])]
    return SwitchingResult(series=series, spectrum=spectrum, boundaries=boundaries,
                           segment_spectra=seg_specs, max_norm_error=norm_err)
