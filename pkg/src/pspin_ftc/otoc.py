"""Out-of-time-order correlators at infinite temperature.

Cost is O(T_max (N+1)^3): every step is two dense products for the
Heisenberg update W(l+1) = U^dagger W(l) U, plus the trace.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import FloquetOperator
from .spin import SpinAlgebra, infinite_temperature_state

__all__ = [
    "FTC_THRESHOLD",
    "N_BATCHES",
    "OtocSeries",
    "OtocAverage",
    "otoc_series",
    "otoc_long_time_average",
]

FTC_THRESHOLD = 0.01
N_BATCHES = 16
IMAG_TOL = 1e-9


@dataclass
class OtocSeries:
    values: np.ndarray
    operators: tuple[str, str] = ("Sz/S", "Sz/S")
    state: str = "I/(N+1)"
    max_imag: float = 0.0

    @property
    def T_max(self) -> int:
        return len(self.values) - 1


@dataclass(frozen=True)
class OtocAverage:
    """Finite-time estimate of the long-time OTOC average."""

    F_inf: float
    stderr: float
    threshold: float = FTC_THRESHOLD

    @property
    def nonzero(self) -> bool:
        """True when |F_inf| exceeds the threshold (the FTC side)."""
        return abs(self.F_inf) > self.threshold

    def __float__(self) -> float:
        return self.F_inf


def otoc_series(U, W=None, V=None, rho=None, T_max: int = 1, *,
                algebra: SpinAlgebra | None = None) -> OtocSeries:
    """F(l) = Tr[rho W(l) V W(l) V] for l = 0..T_max.

    Parameters
    ----------
    U : FloquetOperator or ndarray
        One-period unitary.
    W, V : ndarray, optional
        Hermitian operators; default Sz/S (needs ``algebra``).
    rho : ndarray, optional
        Density matrix; default I/(N+1). When it is proportional to the
        identity the trace is evaluated without the extra product.
    T_max : int
        Last stroboscopic step.

    Returns
    -------
    OtocSeries
        Real parts of F(l); the largest imaginary part seen is kept in
        ``max_imag``.
    """
    Umat = U.U if isinstance(U, FloquetOperator) else np.asarray(U, dtype=complex)
    dim = Umat.shape[0]
    if T_max < 1:
        raise ValueError("T_max must be >= 1")
    labels = ["custom", "custom"]
    if W is None or V is None:
        if algebra is None:
            raise ValueError("default W = V = Sz/S needs the spin algebra")
        default = np.asarray(algebra.Sz) / algebra.S
        if W is None:
            W, labels[0] = default, "Sz/S"
        if V is None:
            V, labels[1] = default, "Sz/S"
    state_label = "custom"
    if rho is None:
        rho = np.eye(dim) / dim
        state_label = "I/(N+1)"
    W = np.asarray(W, dtype=complex)
    V = np.asarray(V, dtype=complex)
    rho = np.asarray(rho, dtype=complex)
    for name, mat in (("U", Umat), ("W", W), ("V", V), ("rho", rho)):
        if mat.shape != (dim, dim):
            raise ValueError(f"{name} has shape {mat.shape}, expected {(dim, dim)}")

    identity_rho = np.allclose(rho, rho[0, 0] * np.eye(dim), atol=1e-14)
    scale = rho[0, 0]
    Udag = Umat.conj().T
    values = np.empty(T_max + 1)
    max_imag = 0.0
    Wl = W.copy()
    for l in range(T_max + 1):
        if l:
            Wl = Udag @ (Wl @ Umat)
        A = Wl @ V
        # Tr[A A] = sum_ij A_ij A_ji
        if identity_rho:
            val = scale * np.sum(A * A.T)
        else:
            val = np.trace(rho @ A @ A)
        values[l] = val.real
        max_imag = max(max_imag, abs(val.imag))
    return OtocSeries(values=values, operators=tuple(labels), state=state_label, max_imag=max_imag)


def otoc_long_time_average(series, burn_in: int = 0, threshold: float = FTC_THRESHOLD) -> OtocAverage:
    """Mean of F(l) over burn_in < l <= T_max.

    With ``burn_in = 0`` the l = 0 sample is excluded as well, matching the
    half-open window. The standard error comes from batch means over
    ``N_BATCHES`` contiguous blocks (fewer if the window is short).
    """
    values = series.values if isinstance(series, OtocSeries) else np.asarray(series, dtype=float)
    T_max = len(values) - 1
    if not 0 <= burn_in < T_max:
        raise ValueError(f"burn_in={burn_in} must lie in [0, T_max={T_max})")
    window = values[burn_in + 1:]
    mean = float(window.mean())
    nb = min(N_BATCHES, len(window))
    if nb < 2:
        return OtocAverage(F_inf=mean, stderr=float("nan"), threshold=threshold)
    usable = len(window) - len(window) % nb
    batches = window[:usable].reshape(nb, -1).mean(axis=1)
    stderr = float(batches.std(ddof=1) / np.sqrt(nb))
    return OtocAverage(F_inf=mean, stderr=stderr, threshold=threshold)
