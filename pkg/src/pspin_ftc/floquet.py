"""Kicked p-spin Floquet operators, stroboscopic evolution and spectra.

The drive period is fixed to T = 1, so time is the integer number of kicks.
"""
from __future__ import annotations

from dataclasses import dataclass, field
import logging

import numpy as np

from .spin import SpinAlgebra, expectation, expm_hermitian

__all__ = [
    "ModelParams",
    "FloquetOperator",
    "TimeSeries",
    "PowerSpectrum",
    "build_pspin_hamiltonian",
    "build_floquet",
    "evolve",
    "power_spectrum",
    "dominant_frequency",
    "wrap_phase",
]

log = logging.getLogger(__name__)

NORM_DRIFT_TOL = 1e-8


def wrap_phase(x):
    """Map angles into (-pi, pi]."""
    y = np.mod(np.asarray(x, dtype=float) + np.pi, 2 * np.pi) - np.pi
    return np.where(y == -np.pi, np.pi, y)


@dataclass(frozen=True)
class ModelParams:
    """Parameters of the driven p-spin model.

    ``alpha`` is the effective kick angle alpha_B + h used by the kicked form.
    """

    p: int
    Lambda: float
    h: float = 0.0
    alpha_B: float = np.pi

    def __post_init__(self):
        if int(self.p) != self.p or self.p < 2:
            raise ValueError(f"interaction order p must be an integer >= 2, got {self.p!r}")
        if self.Lambda < 0:
            raise ValueError(f"Lambda must be non-negative, got {self.Lambda}")

    @property
    def alpha(self) -> float:
        return self.alpha_B + self.h

    @property
    def T(self) -> int:
        return 1

    @classmethod
    def from_alpha(cls, p: int, Lambda: float, alpha: float, h: float = 0.0) -> "ModelParams":
        """Parameters whose effective kick angle equals ``alpha``."""
        return cls(p=p, Lambda=Lambda, h=h, alpha_B=alpha - h)


@dataclass(eq=False)
class FloquetOperator:
    U: np.ndarray
    params: ModelParams
    mode: str = "kicked"
    _eig: tuple[np.ndarray, np.ndarray] | None = field(default=None, repr=False)

    @property
    def dim(self) -> int:
        return self.U.shape[0]

    def eig(self) -> tuple[np.ndarray, np.ndarray]:
        """Cached (eigenphases in (-pi, pi], eigenvectors) of U."""
        if self._eig is None:
            from .spectral import unitary_eig

            self._eig = unitary_eig(self.U)
        return self._eig


@dataclass
class TimeSeries:
    values: np.ndarray
    label: str = "f_Z"
    renormalizations: int = 0

    @property
    def T_max(self) -> int:
        return len(self.values) - 1

    @property
    def steps(self) -> np.ndarray:
        return np.arange(len(self.values))


@dataclass
class PowerSpectrum:
    """|F(omega_k)|^2 on the bins omega_k = 2 pi k / T_len, k = 0..T_len//2."""

    omega: np.ndarray
    power: np.ndarray
    T_len: int
    normalized: bool = False
    drop_transient: int = 0

    @property
    def bin_width(self) -> float:
        return 2 * np.pi / self.T_len

    @property
    def freq(self) -> np.ndarray:
        """omega / 2 pi, in [0, 1/2]."""
        return self.omega / (2 * np.pi)

    def full_sum(self) -> float:
        """Sum of |F(omega_k)|^2 over all T_len bins, restoring the folded half."""
        if self.normalized:
            raise ValueError("full_sum is undefined for a normalized spectrum")
        mirrored = self.power[1:-1] if self.T_len % 2 == 0 else self.power[1:]
        return float(self.power.sum() + mirrored.sum())


def _interaction_scale(params: ModelParams, algebra: SpinAlgebra) -> float:
    return params.Lambda / (params.p * algebra.S ** (params.p - 1))


def build_pspin_hamiltonian(params: ModelParams, algebra: SpinAlgebra) -> np.ndarray:
    """H_p = -h Sx - Lambda / (p S^(p-1)) Sz^p."""
    kappa = _interaction_scale(params, algebra)
    H = -params.h * np.asarray(algebra.Sx) - kappa * np.diag(algebra.sz_power(params.p))
    return (H + H.conj().T) / 2


def build_floquet(params: ModelParams, algebra: SpinAlgebra, mode: str = "kicked") -> FloquetOperator:
    """One-period unitary.

    ``kicked``:      U = exp(i alpha Sx) exp(i kappa Sz^p),  alpha = alpha_B + h
    ``exact-drive``: U = exp(i alpha_B Sx) exp(-i H_p(h))

    with kappa = Lambda / (p S^(p-1)).
    """
    if mode == "kicked":
        kappa = _interaction_scale(params, algebra)
        twist = np.exp(1j * kappa * algebra.sz_power(params.p))
        U = algebra.rotation_x(params.alpha) * twist[np.newaxis, :]
    elif mode == "exact-drive":
        H = build_pspin_hamiltonian(params, algebra)
        U = algebra.rotation_x(params.alpha_B) @ expm_hermitian(H, -1j)
    else:
        raise ValueError(f"unknown mode {mode!r}; expected 'kicked' or 'exact-drive'")
    return FloquetOperator(U=U, params=params, mode=mode)


def _as_matrix(U) -> np.ndarray:
    return U.U if isinstance(U, FloquetOperator) else np.asarray(U)


def evolve(state: np.ndarray, U, steps: int, observable: np.ndarray, label: str = "f_Z") -> TimeSeries:
    """Record <O> at l = 0..steps under repeated application of U.

    The state is renormalized if its norm drifts by more than 1e-8; the
    number of such events is stored on the returned series.
    """
    if steps < 1:
        raise ValueError("steps must be >= 1")
    Umat = _as_matrix(U)
    psi = np.array(state, dtype=complex)
    if Umat.shape != (psi.shape[0], psi.shape[0]):
        raise ValueError(f"U has shape {Umat.shape}, state has length {psi.shape[0]}")
    obs = np.asarray(observable)
    values = np.empty(steps + 1)
    values[0] = expectation(psi, obs)
    renorm = 0
    for l in range(1, steps + 1):
        psi = Umat @ psi
        nrm = np.linalg.norm(psi)
        if abs(nrm - 1) > NORM_DRIFT_TOL:
            psi /= nrm
            renorm += 1
        values[l] = np.vdot(psi, obs @ psi).real
    if renorm:
        log.info("evolve: renormalized state %d times", renorm)
    return TimeSeries(values=values, label=label, renormalizations=renorm)


def evolve_many(states: np.ndarray, U, steps: int, observable: np.ndarray) -> np.ndarray:
    """Like :func:`evolve` for a batch of states given as columns; returns (steps+1, n)."""
    Umat = _as_matrix(U)
    psi = np.array(states, dtype=complex)
    obs = np.asarray(observable)
    out = np.empty((steps + 1, psi.shape[1]))
    out[0] = np.einsum("ij,ij->j", psi.conj(), obs @ psi).real
    for l in range(1, steps + 1):
        psi = Umat @ psi
        out[l] = np.einsum("ij,ij->j", psi.conj(), obs @ psi).real
    return out


def power_spectrum(series, drop_transient: int = 0, normalize: bool = False) -> PowerSpectrum:
    """Rectangular-window DFT power of a stroboscopic signal.

    Uses F(omega_k) = sum_l f(l) exp(-i omega_k l) over the samples after the
    first ``drop_transient``, with omega_k = 2 pi k / T_len.  Only the bins
    k = 0..T_len//2 (omega / 2 pi in [0, 1/2]) are kept since f is real.
    With ``normalize`` the largest bin is scaled to 1.
    """
    values = series.values if isinstance(series, TimeSeries) else np.asarray(series, dtype=float)
    if drop_transient < 0 or drop_transient >= len(values):
        raise ValueError(
            f"drop_transient={drop_transient} leaves no samples (series length {len(values)})"
        )
    f = values[drop_transient:]
    T_len = len(f)
    power = np.abs(np.fft.rfft(f)) ** 2
    omega = 2 * np.pi * np.arange(len(power)) / T_len
    if normalize and power.max() > 0:
        power = power / power.max()
    return PowerSpectrum(omega=omega, power=power, T_len=T_len, normalized=normalize,
                         drop_transient=drop_transient)


def dominant_frequency(spec: PowerSpectrum, exclude_dc: bool = True) -> tuple[float, float]:
    """(omega*, power) of the strongest bin.

    Ties go to the smaller frequency (``np.argmax`` returns the first maximum).
    Bins within 1e-12 relative of the maximum count as tied.
    """
    power = spec.power
    start = 1 if exclude_dc and len(power) > 1 else 0
    sub = power[start:]
    top = sub.max()
    k = int(np.flatnonzero(sub >= top * (1 - 1e-12))[0]) + start
    return float(spec.omega[k]), float(power[k])
