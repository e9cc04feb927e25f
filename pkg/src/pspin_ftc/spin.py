"""Collective spin operators in the symmetric (Dicke) subspace.

All matrices use the basis |S, M> ordered M = S, S-1, ..., -S, so that
``Sz`` is ``diag(S, S-1, ..., -S)``. Every other module relies on this order.
"""
from __future__ import annotations

from dataclasses import dataclass, field
from functools import cached_property
import numbers

import numpy as np
from scipy import special

__all__ = [
    "SpinAlgebra",
    "build_spin_algebra",
    "coherent_state",
    "dicke_state",
    "expectation",
    "infinite_temperature_state",
    "expm_hermitian",
]

IMAG_TOL = 1e-10


@dataclass(frozen=True, eq=False)
class SpinAlgebra:
    """Dense spin-S matrices for ``N`` spin-1/2 particles, S = N/2.

    Instances are immutable and may be shared between threads; the
    ``Sx`` eigendecomposition is computed lazily once and cached.
    """

    N: int
    Sx: np.ndarray = field(repr=False)
    Sy: np.ndarray = field(repr=False)
    Sz: np.ndarray = field(repr=False)

    @property
    def S(self) -> float:
        return self.N / 2

    @property
    def dim(self) -> int:
        return self.N + 1

    @property
    def m_values(self) -> np.ndarray:
        """Magnetic quantum numbers in basis order (S down to -S)."""
        return self.S - np.arange(self.dim)

    @cached_property
    def sx_eigh(self) -> tuple[np.ndarray, np.ndarray]:
        """(eigenvalues, eigenvectors) of Sx.

        The spectrum of Sx is exactly {-S, ..., S}; the numerical eigenvalues
        are replaced by these exact values so rotations built from them stay
        unitary to machine precision.
        """
        _, vecs = np.linalg.eigh(self.Sx)
        vals = np.arange(self.dim) - self.S
        return vals, vecs

    def rotation_x(self, angle: float) -> np.ndarray:
        """Return exp(i * angle * Sx)."""
        vals, vecs = self.sx_eigh
        return (vecs * np.exp(1j * angle * vals)) @ vecs.conj().T

    def sz_power(self, p: int) -> np.ndarray:
        """Diagonal of Sz**p as a real vector."""
        return self.m_values ** p


def build_spin_algebra(N: int) -> SpinAlgebra:
    """Build Sx, Sy, Sz for N spin-1/2 particles (dimension N + 1).

    Raises
    ------
    ValueError
        If ``N`` is not a positive integer.
    """
    if isinstance(N, bool) or not isinstance(N, numbers.Integral) or N < 1:
        raise ValueError(f"N must be a positive integer, got {N!r}")
    N = int(N)
    S = N / 2
    m = S - np.arange(N + 1)
    # <S, M+1| S+ |S, M> sits at row i-1, column i (index i <-> M = S - i)
    m_low = m[1:]
    ladder = np.sqrt(S * (S + 1) - m_low * (m_low + 1))
    splus = np.diag(ladder, k=1).astype(complex)
    sminus = splus.conj().T
    Sx = (splus + sminus) / 2
    Sy = (splus - sminus) / 2j
    Sz = np.diag(m).astype(complex)
    for mat in (Sx, Sy, Sz):
        mat.setflags(write=False)
    return SpinAlgebra(N=N, Sx=Sx, Sy=Sy, Sz=Sz)


def coherent_state(theta: float, phi: float, algebra: SpinAlgebra) -> np.ndarray:
    """Spin coherent state exp(-i phi Sz) exp(-i theta Sy) |S, S>.

    Amplitudes follow the Wigner small-d closed form,
    c_M = sqrt(C(N, S+M)) cos(theta/2)^(S+M) sin(theta/2)^(S-M) exp(-i M phi),
    evaluated in log space so large N neither overflows nor loses the small
    factor near the poles.
    """
    N = algebra.N
    m = algebra.m_values
    k_up = np.arange(N, -1, -1)  # S + M
    c, s = np.cos(theta / 2), np.sin(theta / 2)
    # log of C(N, k) c^(2k) s^(2(N-k)), with 0 * log 0 taken as 0
    log_w = special.gammaln(N + 1) - special.gammaln(k_up + 1) - special.gammaln(N - k_up + 1)
    with np.errstate(divide="ignore", invalid="ignore"):
        log_w = log_w + 2 * np.where(k_up > 0, k_up * np.log(abs(c)), 0.0)
        log_w = log_w + 2 * np.where(N - k_up > 0, (N - k_up) * np.log(abs(s)), 0.0)
    amp = np.exp(0.5 * log_w)
    sign = np.sign(c) ** k_up * np.sign(s) ** (N - k_up)
    sign = np.where(amp > 0, sign, 0.0)
    psi = sign * amp * np.exp(-1j * m * phi)
    return psi / np.linalg.norm(psi)


def dicke_state(M: float, algebra: SpinAlgebra) -> np.ndarray:
    """Return the Dicke state |S, M>."""
    idx = algebra.S - M
    if not float(idx).is_integer() or not 0 <= idx <= algebra.N:
        raise ValueError(f"M={M} is not a valid projection for S={algebra.S}")
    psi = np.zeros(algebra.dim, dtype=complex)
    psi[int(idx)] = 1.0
    return psi


def infinite_temperature_state(algebra: SpinAlgebra) -> np.ndarray:
    """rho_0 = I / (N + 1)."""
    return np.eye(algebra.dim, dtype=complex) / algebra.dim


def expectation(state: np.ndarray, operator: np.ndarray) -> float:
    """<psi|O|psi> for a Hermitian operator.

    Raises ValueError on a dimension mismatch or if the result has an
    imaginary part above ``IMAG_TOL`` (a sign the operator is not Hermitian).
    """
    state = np.asarray(state)
    operator = np.asarray(operator)
    if operator.shape != (state.shape[0], state.shape[0]):
        raise ValueError(
            f"operator shape {operator.shape} does not match state length {state.shape[0]}"
        )
    value = np.vdot(state, operator @ state)
    if abs(value.imag) > IMAG_TOL:
        raise ValueError(f"expectation has imaginary part {value.imag:.3e}; operator not Hermitian?")
    return float(value.real)


def expm_hermitian(H: np.ndarray, coeff: complex) -> np.ndarray:
    """exp(coeff * H) for Hermitian H via its eigendecomposition."""
    vals, vecs = np.linalg.eigh(H)
    return (vecs * np.exp(coeff * vals)) @ vecs.conj().T
