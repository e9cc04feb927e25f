"""Mean-field critical couplings W = Lambda / h of the undriven p-spin model.

Along the x-z meridian the semiclassical energy is
E(Z) = -h sqrt(1 - Z^2) - (Lambda / p) Z^p, and every nontrivial extremum
satisfies W = 1 / (Z^(p-2) sqrt(1 - Z^2)). The three points differ in the
extra condition:

* spinodal - the extremum is born (saddle-node),
* GSQPT    - its energy equals the paramagnetic one, E = -h,
* DQPT     - its energy equals that of the polarized state Z = 1, E = -Lambda/p.

``critical_oracle`` recomputes all three by scanning and root polishing,
without the closed forms; the tests compare the two routes.
"""
from __future__ import annotations

from dataclasses import dataclass
import math

import numpy as np
from scipy.optimize import brentq, minimize_scalar

__all__ = [
    "CriticalPoints",
    "DqptResult",
    "semiclassical_energy",
    "w_from_z",
    "spinodal_point",
    "gs_critical_point",
    "dqpt_point",
    "dqpt_polynomial",
    "dqpt_bracket",
    "critical_points",
    "critical_oracle",
]

BISECTION_TOL = 1e-12


@dataclass(frozen=True)
class DqptResult:
    Z: float
    W: float
    Z_approx: float | None = None
    approx_error: float | None = None


@dataclass(frozen=True)
class CriticalPoints:
    p: int
    W_spino: float
    Z_spino: float
    W_GS: float
    Z_GS: float
    W_DQPT: float
    Z_DQPT: float

    def as_row(self) -> dict:
        return {
            "p": self.p,
            "Z_spino": self.Z_spino,
            "W_spino": self.W_spino,
            "Z_GS": self.Z_GS,
            "W_GS": self.W_GS,
            "Z_DQPT": self.Z_DQPT,
            "W_DQPT": self.W_DQPT,
        }


def _check_p(p, minimum=2):
    if int(p) != p or p < minimum:
        raise ValueError(f"p must be an integer >= {minimum}, got {p!r}")
    return int(p)


def semiclassical_energy(phi, Z, h: float, Lambda: float, p: int):
    """E = -h sqrt(1 - Z^2) cos(phi) - (Lambda / p) Z^p."""
    Z = np.asarray(Z, dtype=float)
    if np.any(np.abs(Z) > 1):
        raise ValueError("|Z| must not exceed 1")
    return -h * np.sqrt(1 - Z * Z) * np.cos(phi) - Lambda / p * Z ** p


def w_from_z(Z, p: int):
    """Coupling ratio whose nontrivial extremum sits at Z."""
    Z = np.asarray(Z, dtype=float)
    return 1.0 / (Z ** (p - 2) * np.sqrt(1 - Z * Z))


def spinodal_point(p: int) -> tuple[float, float]:
    """(Z_spino, W_spino)."""
    p = _check_p(p)
    if p == 2:
        return 0.0, 1.0
    Z = math.sqrt((p - 2) / (p - 1))
    W = math.sqrt((p - 1) ** (p - 1) / (p - 2) ** (p - 2))
    return Z, W


def gs_critical_point(p: int) -> tuple[float, float]:
    """(Z_GS, W_GS); for p = 2 this coincides with the spinodal point."""
    p = _check_p(p)
    if p == 2:
        return 0.0, 1.0
    Z = math.sqrt(p * (p - 2) / (p - 1) ** 2)
    W = (p - 1) ** (p - 1) / math.sqrt((p * (p - 2)) ** (p - 2))
    return Z, W


def dqpt_polynomial(Z, p: int):
    """Z^p - p/(p-1) Z^(p-2) + 1/(p-1); its root in (0, 1) locates the DQPT."""
    Z = np.asarray(Z, dtype=float)
    return Z ** p - p / (p - 1) * Z ** (p - 2) + 1 / (p - 1)


def dqpt_bracket(p: int) -> dict:
    """Bounds on the DQPT root for p > 6.

    Returns the inflection point of the polynomial (lower bound), the
    reflected-minimum estimate (upper bound), the minimum itself, and their
    arithmetic-mean approximation.
    """
    p = _check_p(p, 3)
    z_infle = math.sqrt((p - 2) * (p - 3) / (p - 1) ** 2)
    z_min = math.sqrt((p - 2) / (p - 1))
    z_upper = (2 * math.sqrt(p - 2) - math.sqrt(p - 1)) / math.sqrt(p - 1)
    z_mean = (2 * math.sqrt((p - 1) * (p - 2)) + math.sqrt((p - 2) * (p - 3)) - (p - 1)) / (2 * (p - 1))
    return {"Z_infle": z_infle, "Z_upper": z_upper, "Z_min": z_min, "Z_approx": z_mean}


def _bisect(f, lo, hi, tol=BISECTION_TOL):
    flo = f(lo)
    if flo == 0:
        return lo
    if np.sign(flo) == np.sign(f(hi)):
        raise RuntimeError(f"no sign change on [{lo}, {hi}]")
    while hi - lo > tol:
        mid = 0.5 * (lo + hi)
        fm = f(mid)
        if fm == 0:
            return mid
        if np.sign(fm) == np.sign(flo):
            lo, flo = mid, fm
        else:
            hi = mid
    return 0.5 * (lo + hi)


def dqpt_point(p: int) -> DqptResult:
    """DQPT position and coupling.

    p = 3..6 use the exact radicals for Z. Larger p bisect the polynomial
    between the inflection point and its minimum, and also report the
    arithmetic-mean approximation with its error. W always follows from
    ``w_from_z``.
    """
    p = _check_p(p, 3)
    closed = {
        3: (math.sqrt(3) - 1) / 2,
        4: 1 / math.sqrt(3),
        5: (math.sqrt(5 + 4 * math.sqrt(5)) - 1) / 4,
        6: math.sqrt((1 + math.sqrt(21)) / 10),
    }
    if p in closed:
        Z = closed[p]
        return DqptResult(Z=Z, W=float(w_from_z(Z, p)))
    b = dqpt_bracket(p)
    Z = _bisect(lambda z: float(dqpt_polynomial(z, p)), b["Z_infle"], b["Z_min"])
    return DqptResult(Z=Z, W=float(w_from_z(Z, p)), Z_approx=b["Z_approx"],
                      approx_error=abs(b["Z_approx"] - Z))


# W_DQPT closed forms as printed for p = 3, 4, 6; the printed p = 5 radical
# does not satisfy W = 1/(Z^3 sqrt(1-Z^2)) and is kept only for reporting.
def dqpt_w_printed(p: int) -> float:
    s3, s5, s21 = math.sqrt(3), math.sqrt(5), math.sqrt(21)
    table = {
        3: 2 * math.sqrt(2) / ((s3 - 1) * math.sqrt(s3)),
        4: 3 * s3 / math.sqrt(2),
        5: 128 * math.sqrt(2) / ((5 + 4 * s5) ** 1.5 * math.sqrt(5 - 2 * math.sqrt(2) + math.sqrt(5 + 4 * s5))),
        6: 50 * math.sqrt(10) / ((11 + s21) * math.sqrt(9 - s21)),
    }
    return table[p]


def critical_points(p: int) -> CriticalPoints:
    """All six values; the DQPT entries are NaN for p = 2."""
    p = _check_p(p)
    zs, ws = spinodal_point(p)
    zg, wg = gs_critical_point(p)
    if p >= 3:
        d = dqpt_point(p)
        zd, wd = d.Z, d.W
    else:
        zd = wd = float("nan")
    return CriticalPoints(p=p, W_spino=ws, Z_spino=zs, W_GS=wg, Z_GS=zg, W_DQPT=wd, Z_DQPT=zd)


def _scan_roots(f, lo, hi, n=4001):
    z = np.linspace(lo, hi, n)
    v = np.array([f(x) for x in z])
    idx = np.flatnonzero(np.sign(v[:-1]) * np.sign(v[1:]) < 0)
    return [brentq(f, z[i], z[i + 1], xtol=1e-15, rtol=4 * np.finfo(float).eps) for i in idx]


def critical_oracle(p: int, which: str) -> tuple[float, float]:
    """Independent numerical route to (Z, W) for 'spinodal', 'gs' or 'dqpt'.

    * spinodal: minimize W(Z) over (0, 1), the smallest coupling that admits
      a nontrivial extremum.
    * gs: scan Z in (Z_spino, 1) for the zero of E_extremum(Z) + h.
    * dqpt: scan Z in (0, 1) for the zero of E_extremum(Z) + Lambda/p,
      excluding the trivial root at Z = 1.

    Raises RuntimeError when no root is bracketed.
    """
    p = _check_p(p)
    eps = 1e-9
    if which == "spinodal":
        if p == 2:
            res = minimize_scalar(lambda z: float(w_from_z(z, p)), bounds=(0.0, 0.5), method="bounded",
                                  options={"xatol": 1e-12})
            z = max(res.x, 0.0)
            return (0.0 if z < 1e-5 else z), float(w_from_z(z, p))
        res = minimize_scalar(lambda z: float(w_from_z(z, p)), bounds=(eps, 1 - eps), method="bounded",
                              options={"xatol": 1e-13})
        # polish on the derivative of log W
        dlog = lambda z: (p - 2) / z - z / (1 - z * z)
        z = brentq(dlog, max(res.x - 1e-3, eps), min(res.x + 1e-3, 1 - eps), xtol=1e-15)
        return z, float(w_from_z(z, p))
    if which == "gs":
        if p == 2:
            return critical_oracle(2, "spinodal")
        # energy of the extremum at Z with h = 1, Lambda = W(Z), relative to -h
        f = lambda z: -math.sqrt(1 - z * z) - float(w_from_z(z, p)) / p * z ** p + 1.0
        z_sp, _ = critical_oracle(p, "spinodal")
        roots = _scan_roots(f, z_sp + eps, 1 - 1e-6)
        if not roots:
            raise RuntimeError(f"no ground-state crossing bracketed for p={p}")
        z = roots[0]
        return z, float(w_from_z(z, p))
    if which == "dqpt":
        if p < 3:
            raise ValueError("dqpt needs p >= 3")
        # with h = 1, Lambda = W(Z): E_extremum(Z) - E(Z=1) = 0
        def f(z):
            w = float(w_from_z(z, p))
            return -math.sqrt(1 - z * z) - w / p * z ** p + w / p
        roots = _scan_roots(f, eps, 1 - 1e-4)
        if not roots:
            raise RuntimeError(f"no DQPT root bracketed for p={p}")
        z = roots[0]
        return z, float(w_from_z(z, p))
    raise ValueError(f"unknown critical point {which!r}")
