"""Mean-field (N -> infinity) dynamics of the normalized spin X = <S>/S.

Two dynamical systems live here: the continuous flow of the undriven
p-spin Hamiltonian, and the kicked area-preserving map

    X' = cos(phi) X - sin(phi) Y,          phi = Lambda Z^(p-1)
    Y' = (sin(phi) X + cos(phi) Y) cos(a) - sin(a) Z
    Z' = (sin(phi) X + cos(phi) Y) sin(a) + cos(a) Z

i.e. a twist about z followed by a rotation about x by the kick angle a.
All functions broadcast over leading array dimensions.
"""
from __future__ import annotations

from dataclasses import dataclass

import numpy as np

from .floquet import power_spectrum, TimeSeries

__all__ = [
    "ClassicalState",
    "PhaseDiagramCell",
    "fibonacci_sphere",
    "flow_rhs",
    "flow_step",
    "map_step",
    "iterate_map",
    "tangent_eigenvalues_at_pole",
    "map_jacobian_fd",
    "bifurcation_set",
    "phase_boundary_p2",
    "hyperbolic_onset_p2",
    "averaged_correlation",
    "g_from_correlation",
    "g_measure",
    "chaos_border",
]


@dataclass(frozen=True)
class ClassicalState:
    X: float
    Y: float
    Z: float

    def __post_init__(self):
        n = np.sqrt(self.X ** 2 + self.Y ** 2 + self.Z ** 2)
        if abs(n - 1) > 1e-12:
            raise ValueError(f"state is not on the unit sphere (|X| = {n})")

    @classmethod
    def from_angles(cls, theta: float, phi: float) -> "ClassicalState":
        return cls(np.sin(theta) * np.cos(phi), np.sin(theta) * np.sin(phi), np.cos(theta))

    def as_array(self) -> np.ndarray:
        return np.array([self.X, self.Y, self.Z])


@dataclass
class PhaseDiagramCell:
    Lambda: float
    alpha: float
    q: int
    G: float
    omega_star: float
    normalized: bool = False


def fibonacci_sphere(count: int = 14000) -> np.ndarray:
    """Deterministic quasi-uniform points on the unit sphere, shape (count, 3)."""
    if count < 1:
        raise ValueError("count must be positive")
    i = np.arange(count) + 0.5
    z = 1 - 2 * i / count
    r = np.sqrt(1 - z * z)
    golden = np.pi * (3 - np.sqrt(5))
    phi = golden * i
    return np.column_stack([r * np.cos(phi), r * np.sin(phi), z])


def flow_rhs(state: np.ndarray, h: float, Lambda: float, p: int) -> np.ndarray:
    X, Y, Z = state[..., 0], state[..., 1], state[..., 2]
    zp = Lambda * Z ** (p - 1)
    return np.stack([zp * Y, h * Z - zp * X, -h * Y], axis=-1)


def flow_step(state, h: float, Lambda: float, p: int, dt: float = 1e-3, steps: int = 1000):
    """Fixed-step RK4 integration of the mean-field flow.

    Renormalizes onto the sphere after each step. Returns
    ``(trajectory, max_drift)`` with trajectory of shape (steps + 1, ..., 3)
    and ``max_drift`` the largest norm deviation seen before renormalizing.
    """
    if dt <= 0:
        raise ValueError("dt must be positive")
    s = np.array(state.as_array() if isinstance(state, ClassicalState) else state, dtype=float)
    traj = np.empty((steps + 1,) + s.shape)
    traj[0] = s
    drift = 0.0
    f = lambda x: flow_rhs(x, h, Lambda, p)
    for n in range(1, steps + 1):
        k1 = f(s)
        k2 = f(s + 0.5 * dt * k1)
        k3 = f(s + 0.5 * dt * k2)
        k4 = f(s + dt * k3)
        s = s + dt / 6 * (k1 + 2 * k2 + 2 * k3 + k4)
        nrm = np.linalg.norm(s, axis=-1, keepdims=True)
        drift = max(drift, float(np.max(np.abs(nrm - 1))))
        s = s / nrm
        traj[n] = s
    return traj, drift


def map_step(state, alpha, Lambda, p: int):
    """One kick of the area-preserving map; accepts (..., 3) arrays.

    ``alpha`` and ``Lambda`` may be arrays broadcasting against the leading
    dimensions of ``state``.
    """
    s = np.asarray(state.as_array() if isinstance(state, ClassicalState) else state, dtype=float)
    X, Y, Z = s[..., 0], s[..., 1], s[..., 2]
    phi = Lambda * Z ** (p - 1)
    c, sn = np.cos(phi), np.sin(phi)
    Xn = c * X - sn * Y
    Yt = sn * X + c * Y
    ca, sa = np.cos(alpha), np.sin(alpha)
    return np.stack(np.broadcast_arrays(Xn, Yt * ca - sa * Z, Yt * sa + ca * Z), axis=-1)


def iterate_map(state, alpha, Lambda, p: int, steps: int) -> np.ndarray:
    """Orbit of the map, shape (steps + 1, ..., 3)."""
    s = np.asarray(state.as_array() if isinstance(state, ClassicalState) else state, dtype=float)
    out = np.empty((steps + 1,) + np.broadcast_shapes(s.shape, np.shape(alpha) + (1,), np.shape(Lambda) + (1,)))
    out[0] = s
    for n in range(steps):
        s = map_step(s, alpha, Lambda, p)
        out[n + 1] = s
    return out


def tangent_eigenvalues_at_pole(alpha: float, Lambda: float, p: int, pole: int = 1) -> tuple[complex, complex]:
    """Eigenvalues of the tangent map at the fixed point X = pole (+1 or -1).

    For p = 2 the twist contributes a shear of strength +/-Lambda and
    the pair is (tr +/- sqrt(tr^2 - 4)) / 2 with tr = 2 cos(a) +/- Lambda sin(a).
    For p > 2 the twist is flat at the pole and the pair is exp(+/- i a).
    The first element is the one with the larger modulus.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    if p > 2:
        return complex(np.exp(1j * alpha)), complex(np.exp(-1j * alpha))
    tr = 2 * np.cos(alpha) + pole * Lambda * np.sin(alpha)
    root = np.sqrt(complex(tr * tr - 4))
    a_plus, a_minus = (tr + root) / 2, (tr - root) / 2
    if abs(a_minus) > abs(a_plus):
        a_plus, a_minus = a_minus, a_plus
    return complex(a_plus), complex(a_minus)


def map_jacobian_fd(state, alpha: float, Lambda: float, p: int, eps: float = 1e-6) -> np.ndarray:
    """Central-difference 2x2 Jacobian of the map in local tangent coordinates.

    The tangent plane at ``state`` (and at its image) is spanned by an
    orthonormal pair built from a fixed reference axis; a displacement
    (u, v) is mapped back to the sphere by normalization.
    """
    s = np.asarray(state.as_array() if isinstance(state, ClassicalState) else state, dtype=float)

    def frame(x):
        ref = np.array([0.0, 0.0, 1.0]) if abs(x[2]) < 0.9 else np.array([1.0, 0.0, 0.0])
        e1 = np.cross(ref, x)
        e1 /= np.linalg.norm(e1)
        e2 = np.cross(x, e1)
        return e1, e2

    e1, e2 = frame(s)
    img = map_step(s, alpha, Lambda, p)
    f1, f2 = frame(img)
    J = np.empty((2, 2))
    for col, e in enumerate((e1, e2)):
        plus = s + eps * e
        minus = s - eps * e
        dp = map_step(plus / np.linalg.norm(plus), alpha, Lambda, p)
        dm = map_step(minus / np.linalg.norm(minus), alpha, Lambda, p)
        d = (dp - dm) / (2 * eps)
        J[0, col] = d @ f1
        J[1, col] = d @ f2
    return J


def bifurcation_set(p: int) -> list[float]:
    """Kick angles 2 pi / m, m = p, p-2, ... (> 1), plus multiples below pi.

    m = 1 (a full 2 pi turn, i.e. no kick) is left out. Each 2 pi / m also
    brings r * 2 pi / m for every integer r with r * 2 pi / m < pi.
    """
    if p < 2:
        raise ValueError("p must be >= 2")
    angles = []
    for m in range(p, 1, -2):
        base = 2 * np.pi / m
        angles.append(base)
        r = 2
        while r * base < np.pi - 1e-12:
            angles.append(r * base)
            r += 1
    out = []
    for a in sorted(angles):
        if not out or abs(a - out[-1]) > 1e-12:
            out.append(a)
    return out


def phase_boundary_p2(Lambda: float) -> tuple[float, float]:
    """Edges of the period-doubling phase for p = 2 around alpha = pi.

    alpha = pi -/+ (1/2) atan2(4 Lambda, 4 - Lambda^2). The two-argument
    arctangent keeps the curve continuous through Lambda = 2; the factor 1/2
    converts the one-kick hyperbolicity window to the two-kick response.
    """
    if Lambda < 0:
        raise ValueError("Lambda must be non-negative")
    half = 0.5 * np.arctan2(4 * Lambda, 4 - Lambda ** 2)
    return np.pi - half, np.pi + half


def _trace_p2(delta, Lambda, pole):
    return 2 * np.cos(np.pi + delta) + pole * Lambda * np.sin(np.pi + delta)


def hyperbolic_onset_p2(Lambda: float, pole: int = 1, scan_points: int = 20001) -> float:
    """Detuning h > 0 (alpha = pi + pole*h) where the pole stops being hyperbolic.

    Found numerically: dense scan of the discriminant tr^2 - 4 of the
    tangent map on (0, pi), then Brent polishing of the first sign change.
    """
    from scipy.optimize import brentq

    if Lambda <= 0:
        return 0.0
    disc = lambda d: _trace_p2(pole * d, Lambda, pole) ** 2 - 4
    grid = np.linspace(1e-9, np.pi - 1e-9, scan_points)
    vals = disc(grid)
    idx = np.flatnonzero(np.sign(vals[:-1]) != np.sign(vals[1:]))
    if idx.size == 0:
        raise RuntimeError(f"no hyperbolicity onset found for Lambda={Lambda}")
    i = idx[0]
    return brentq(disc, grid[i], grid[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps)


def averaged_correlation(grid: np.ndarray, alpha, Lambda, p: int, T_max: int) -> np.ndarray:
    """C(l) = <Z_l Z_0> averaged over the grid, l = 0..T_max.

    ``alpha`` / ``Lambda`` may be arrays broadcasting to a common shape (a
    batch of parameter cells); the result then has shape
    (T_max + 1,) + that shape. Grid points are summed in a fixed order, so
    reruns are bit-identical.
    """
    if T_max < 2:
        raise ValueError("T_max must be >= 2")
    grid = np.asarray(grid, dtype=float)
    alpha_arr = np.asarray(alpha, dtype=float)
    lam_arr = np.asarray(Lambda, dtype=float)
    batch = np.broadcast_shapes(alpha_arr.shape, lam_arr.shape)
    nb = int(np.prod(batch, dtype=int))
    a = np.broadcast_to(alpha_arr, batch).reshape(nb, 1)
    L = np.broadcast_to(lam_arr, batch).reshape(nb, 1)
    n = grid.shape[0]
    X = np.tile(grid[:, 0], (nb, 1))
    Y = np.tile(grid[:, 1], (nb, 1))
    Z = np.tile(grid[:, 2], (nb, 1))
    weights = grid[:, 2] / n
    ca, sa = np.cos(a), np.sin(a)
    phi, c, s, yt, tmp = (np.empty_like(X) for _ in range(5))
    C = np.empty((T_max + 1, nb))
    C[0] = Z @ weights
    # in-place update of the map; integer powers by repeated multiplication
    for l in range(1, T_max + 1):
        np.multiply(Z, L, out=phi)
        for _ in range(p - 2):
            np.multiply(phi, Z, out=phi)
        np.cos(phi, out=c)
        np.sin(phi, out=s)
        np.multiply(s, X, out=yt)
        np.multiply(c, Y, out=tmp)
        yt += tmp
        np.multiply(c, X, out=X)
        np.multiply(s, Y, out=tmp)
        X -= tmp
        np.multiply(yt, ca, out=Y)
        np.multiply(Z, sa, out=tmp)
        Y -= tmp
        np.multiply(Z, ca, out=Z)
        np.multiply(yt, sa, out=tmp)
        Z += tmp
        C[l] = Z @ weights
    return C.reshape((T_max + 1,) + batch)


def g_from_correlation(C: np.ndarray, q: int) -> tuple[float, float]:
    spec = power_spectrum(TimeSeries(C))
    power = spec.power
    k = int(np.argmax(power[1:])) + 1
    omega_star = float(spec.omega[k])
    target = 2 * np.pi / q
    if abs(omega_star - target) <= spec.bin_width:
        return float(power[k]), omega_star
    return 0.0, omega_star


def g_measure(alpha: float, Lambda: float, p: int, q: int, grid: np.ndarray, T_max: int) -> PhaseDiagramCell:
    """Unnormalized period-q weight of the phase-space averaged response.

    G is the peak power |C_omega|^2 when the strongest non-DC bin lies within
    one bin of 2 pi / q, else 0. Dividing by the sweep maximum is left to the
    sweep driver.
    """
    if q < 2:
        raise ValueError("q must be >= 2")
    C = averaged_correlation(grid, alpha, Lambda, p, T_max)
    G, omega_star = g_from_correlation(C, q)
    return PhaseDiagramCell(Lambda=Lambda, alpha=alpha, q=q, G=G, omega_star=omega_star)


def chaos_border(alpha: float, p: int) -> float:
    """Lambda at which ln[Lambda (p-1) sin(alpha)] - (p-1) crosses zero."""
    if not 0 < alpha < np.pi:
        raise ValueError(f"chaos border needs 0 < alpha < pi, got alpha={alpha}")
    return float(np.exp(p - 1) / ((p - 1) * np.sin(alpha)))
