"""Eigenphase statistics of Floquet operators.

Spacing ratios use the circular convention: for n sorted phases there are
n gaps, the last one wrapping from the largest phase back to the smallest
through 2 pi, and n ratios formed from cyclically adjacent gaps.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np
import scipy.linalg

from .floquet import FloquetOperator, wrap_phase

__all__ = [
    "R_POISSON",
    "SPACING_FLOOR",
    "EigenphaseSpectrum",
    "SpacingRatioStats",
    "unitary_eig",
    "eigenphases",
    "spacing_ratio",
    "dos_histogram",
    "clustering_degeneracy",
    "parity_blocks",
]

R_POISSON = 2 * np.log(2) - 1
SPACING_FLOOR = 1e-12


@dataclass
class EigenphaseSpectrum:
    phases: np.ndarray
    power: int = 1

    def __post_init__(self):
        self.phases = np.sort(np.asarray(self.phases, dtype=float))

    def __len__(self):
        return len(self.phases)


@dataclass
class SpacingRatioStats:
    rbar: float
    rtilde: float
    r_pos: float = R_POISSON
    n_clamped: int = 0


def unitary_eig(U: np.ndarray) -> tuple[np.ndarray, np.ndarray]:
    """Eigenphases in (-pi, pi] and eigenvectors of a unitary matrix.

    Uses the complex Schur form, which is diagonal for a normal matrix, so
    the returned eigenvectors are orthonormal even inside near-degenerate
    clusters (plain ``eig`` does not guarantee that).
    """
    try:
        T, Z = scipy.linalg.schur(np.asarray(U, dtype=complex), output="complex")
    except (np.linalg.LinAlgError, ValueError) as exc:
        raise np.linalg.LinAlgError(f"eigensolver failed on Floquet operator: {exc}") from exc
    phases = wrap_phase(np.angle(np.diag(T)))
    return phases, Z


def eigenphases(U, power: int = 1) -> EigenphaseSpectrum:
    """Sorted eigenphases of U**power.

    U is diagonalized once; the phases of the power are q * mu wrapped
    back to (-pi, pi], never a re-diagonalization of the matrix power.
    """
    if power < 1:
        raise ValueError("power must be >= 1")
    if isinstance(U, FloquetOperator):
        mu, _ = U.eig()
    else:
        mu, _ = unitary_eig(U)
    return EigenphaseSpectrum(wrap_phase(power * mu), power=power)


def _phases(spec) -> np.ndarray:
    return spec.phases if isinstance(spec, EigenphaseSpectrum) else np.sort(np.asarray(spec, dtype=float))


def circular_gaps(phases: np.ndarray) -> np.ndarray:
    mu = np.sort(np.asarray(phases, dtype=float))
    gaps = np.diff(mu)
    wrap = 2 * np.pi - (mu[-1] - mu[0])
    return np.append(gaps, wrap)


def spacing_ratio(spec) -> SpacingRatioStats:
    """Mean adjacent spacing ratio with the wrap-around gap included.

    Gaps below ``SPACING_FLOOR`` are clamped to it so exact degeneracies do
    not produce 0/0; the number clamped is reported.
    """
    mu = _phases(spec)
    if len(mu) < 3:
        raise ValueError("spacing ratio needs at least 3 phases")
    d = circular_gaps(mu)
    n_clamped = int(np.count_nonzero(d < SPACING_FLOOR))
    d = np.maximum(d, SPACING_FLOOR)
    d_next = np.roll(d, -1)
    r = np.minimum(d, d_next) / np.maximum(d, d_next)
    rbar = float(r.mean())
    return SpacingRatioStats(rbar=rbar, rtilde=rbar / R_POISSON, n_clamped=n_clamped)


def dos_histogram(spec, bins: int = 64) -> tuple[np.ndarray, np.ndarray]:
    """Normalized eigenphase density on [-pi, pi]; returns (density, edges)."""
    if bins < 8:
        raise ValueError("bins must be >= 8")
    mu = _phases(spec)
    density, edges = np.histogram(mu, bins=bins, range=(-np.pi, np.pi), density=True)
    return density, edges


def _circ_dist(a, b):
    return np.abs(wrap_phase(np.asarray(a) - np.asarray(b)))


def clustering_degeneracy(spec, q: int, tol: float) -> float:
    """Fraction of eigenphases that sit in q-tuples spaced by 2 pi / q.

    Greedy and deterministic: phases are visited in ascending order; for an
    unused phase mu the nearest unused phase to each of mu + 2 pi k / q
    (k = 1..q-1) is looked up, and the tuple is accepted if every partner is
    within ``tol`` of its target.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    mu = _phases(spec)
    n = len(mu)
    used = np.zeros(n, dtype=bool)
    matched = 0
    for i in range(n):
        if used[i]:
            continue
        partners = []
        for k in range(1, q):
            target = mu[i] + 2 * np.pi * k / q
            dist = _circ_dist(mu, target)
            dist[used] = np.inf
            dist[i] = np.inf
            dist[partners] = np.inf
            j = int(np.argmin(dist))
            if dist[j] > tol:
                break
            partners.append(j)
        else:
            used[i] = True
            used[partners] = True
            matched += q
    return matched / n


def parity_blocks(U: np.ndarray, algebra) -> list[np.ndarray]:
    """Split U into the +/- eigenspaces of exp(i pi Sx).

    Valid for even p, where the kicked operator commutes with that
    parity; returns the eigenphases of each block.
    """
    vals, vecs = algebra.sx_eigh
    parity = np.cos(np.pi * (vals - vals[0])) > 0
    blocks = []
    for mask in (parity, ~parity):
        basis = vecs[:, mask]
        sub = basis.conj().T @ U @ basis
        blocks.append(np.sort(unitary_eig(sub)[0]))
    return blocks
