"""Resonance and effective Hamiltonians near alpha_B = 2 pi / q.

In the frame rotating with R = exp(i (2 pi / q) Sx) the q-fold product of
kicks averages the twist over the q rotated copies of Sz, giving

    H_reso = -(Lambda / (q p S^(p-1))) sum_j (-sin(2 pi j/q) Sy + cos(2 pi j/q) Sz)^p

and U_F^q is isospectral to R^q exp(-i q H_eff) up to higher-order
corrections (the two differ by a pi rotation about z, which flips Sx).
Two overall signs of the interaction sum appear in the literature; both are
available and :func:`validate_effective_spectrum` decides between them by
comparing spectra.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import ModelParams, build_floquet, wrap_phase
from .spectral import eigenphases
from .spin import SpinAlgebra

__all__ = [
    "SIGN_MINUS",
    "SIGN_PLUS",
    "ResonanceHamiltonian",
    "EffectiveSpectrumReport",
    "build_resonance_hamiltonian",
    "build_effective_hamiltonian",
    "phase_mismatch",
    "effective_mismatch",
    "validate_effective_spectrum",
]

# "minus": interaction sum enters with -Lambda (the resonance form above)
# "plus":  the same sum enters with +Lambda
SIGN_MINUS = "minus"
SIGN_PLUS = "plus"
_SIGNS = {SIGN_MINUS: 1.0, SIGN_PLUS: -1.0}


@dataclass(frozen=True)
class ResonanceHamiltonian:
    matrix: np.ndarray
    q: int
    p: int
    Lambda: float
    sign_convention: str = SIGN_MINUS


@dataclass(frozen=True)
class EffectiveSpectrumReport:
    q: int
    p: int
    Lambda: float
    h: float
    N: int
    mismatch: dict
    best: str
    mismatch_half: dict
    exponent: float
    distinguishable: bool = True

    @property
    def ratio(self) -> float:
        """mismatch(Lambda) / mismatch(Lambda / 2) for the chosen sign."""
        half = self.mismatch_half[self.best]
        return self.mismatch[self.best] / half if half > 0 else np.inf


def _vertex_power(c_y: float, c_z: float, p: int, algebra: SpinAlgebra) -> np.ndarray:
    O = c_y * np.asarray(algebra.Sy) + c_z * np.asarray(algebra.Sz)
    out = O.copy()
    for _ in range(p - 1):
        out = out @ O
    return out


def build_resonance_hamiltonian(q: int, p: int, Lambda: float, algebra: SpinAlgebra,
                                sign_convention: str = SIGN_MINUS) -> ResonanceHamiltonian:
    """Average of the p-spin twist over the q vertices of the rotated frame."""
    if q < 1:
        raise ValueError("q must be >= 1")
    if int(p) != p or p < 2:
        raise ValueError("p must be an integer >= 2")
    if sign_convention not in _SIGNS:
        raise ValueError(f"sign_convention must be one of {sorted(_SIGNS)}")
    total = np.zeros((algebra.dim, algebra.dim), dtype=complex)
    for j in range(1, q + 1):
        ang = 2 * np.pi * j / q
        total += _vertex_power(-np.sin(ang), np.cos(ang), p, algebra)
    H = -_SIGNS[sign_convention] * Lambda / (q * p * algebra.S ** (p - 1)) * total
    H = (H + H.conj().T) / 2
    return ResonanceHamiltonian(matrix=H, q=q, p=int(p), Lambda=Lambda, sign_convention=sign_convention)


def build_effective_hamiltonian(q: int, p: int, Lambda: float, h: float, algebra: SpinAlgebra,
                                sign_convention: str = SIGN_MINUS) -> np.ndarray:
    """H_eff = h Sx + H_reso under the given sign convention."""
    reso = build_resonance_hamiltonian(q, p, Lambda, algebra, sign_convention)
    return h * np.asarray(algebra.Sx) + reso.matrix


def phase_mismatch(a, b) -> float:
    """Bottleneck distance between two equal-size sets of phases on the circle.

    On a circle the optimal bottleneck matching pairs the sorted lists up to
    a cyclic shift, so all shifts are tried.
    """
    a = np.sort(wrap_phase(a))
    b = np.sort(wrap_phase(b))
    if a.shape != b.shape:
        raise ValueError("phase sets differ in size")
    best = np.inf
    for s in range(len(a)):
        d = np.abs(wrap_phase(a - np.roll(b, s))).max()
        if d < best:
            best = d
    return float(best)


def _floquet_power_phases(q, p, Lambda, h, algebra):
    params = ModelParams(p=p, Lambda=Lambda, h=h, alpha_B=2 * np.pi / q)
    return eigenphases(build_floquet(params, algebra), power=q).phases


def _effective_phases(q, p, Lambda, h, algebra, sign):
    H = build_effective_hamiltonian(q, p, Lambda, h, algebra, sign)
    E = np.linalg.eigvalsh(H)
    # R^q = exp(i 2 pi Sx) contributes the global phase (-1)^N
    return wrap_phase(-q * E + np.pi * (algebra.N % 2))


def effective_mismatch(q: int, p: int, Lambda: float, h: float, algebra: SpinAlgebra,
                       sign_convention: str = SIGN_MINUS) -> float:
    """Eigenphase distance between U_F^q (alpha_B = 2 pi / q) and R^q exp(-i q H_eff)."""
    exact = _floquet_power_phases(q, p, Lambda, h, algebra)
    approx = _effective_phases(q, p, Lambda, h, algebra, sign_convention)
    return phase_mismatch(exact, approx)


def validate_effective_spectrum(q: int, p: int, Lambda: float, h: float,
                                algebra: SpinAlgebra) -> EffectiveSpectrumReport:
    """Compare both sign conventions at Lambda and Lambda / 2.

    The convention with the smaller mismatch at Lambda wins; the scaling
    exponent is log2 of the mismatch ratio between the two couplings.
    When the two spectra coincide (odd p, where flipping the sign is a
    symmetry) the report keeps "minus" and sets ``distinguishable=False``.
    """
    mis = {s: effective_mismatch(q, p, Lambda, h, algebra, s) for s in _SIGNS}
    half = {s: effective_mismatch(q, p, Lambda / 2, h, algebra, s) for s in _SIGNS}
    tie = abs(mis[SIGN_MINUS] - mis[SIGN_PLUS]) <= 1e-9 * max(mis.values(), default=0.0) + 1e-14
    best = SIGN_MINUS if tie else min(mis, key=mis.get)
    if mis[best] == 0 or half[best] == 0:
        exponent = float("nan")
    else:
        exponent = float(np.log2(mis[best] / half[best]))
    return EffectiveSpectrumReport(q=q, p=int(p), Lambda=Lambda, h=h, N=algebra.N, mismatch=mis,
                                   best=best, mismatch_half=half, exponent=exponent,
                                   distinguishable=not tie)
