"""Equatorial convexity of bodies of revolution.

Modulus of convexity at the equator, power-type fits, the local convexity
test at the equator, and an axis-aligned Banach-Mazur distance to the ball.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field
from functools import lru_cache

import numpy as np
from scipy.optimize import brentq

from .bodies import MeridianProfile
from .quadrature import QuadratureConfig
from .io import format_body
from .radon import DEFAULT_CONFIG, IntersectionProfile, OperatorResult, theta_grid

__all__ = [
    "AnalysisError",
    "PowerTypeFit",
    "EquatorConvexityReport",
    "BMResult",
    "DEFAULT_EPS_GRID",
    "TOL_FLAT",
    "modulus_equator",
    "power_type_fit",
    "equator_convexity",
    "bm_ball",
    "uniformity_scan",
    "scan_to_csv_rows",
]

TOL_FLAT = 1e-6
DEFAULT_EPS_GRID = tuple(np.logspace(-1, -3, 8))
_SCAN_POINTS = 257


class AnalysisError(ValueError):
    pass


def _as_profile(obj) -> MeridianProfile:
    # operator results are analysed through their exact (quadrature) evaluator
    if isinstance(obj, OperatorResult):
        return obj.exact
    return obj


@dataclass(frozen=True)
class PowerTypeFit:
    p: float
    c: float
    residual: float
    eps_grid: tuple

    def to_json(self):
        return {"p": self.p, "c": self.c, "residual": self.residual, "eps_grid": list(self.eps_grid)}


@dataclass(frozen=True)
class EquatorConvexityReport:
    rho_eq: float
    rho_pp: float
    margin: float
    verdict: str
    step: float

    def to_json(self):
        return {
            "rho_eq": self.rho_eq,
            "rho_pp": self.rho_pp,
            "margin": self.margin,
            "verdict": self.verdict,
            "step": self.step,
        }


@dataclass(frozen=True)
class BMResult:
    distance: float
    s_opt: float
    ratio_curve: tuple = field(default=(), repr=False)

    def to_json(self):
        return {"distance": self.distance, "s_opt": self.s_opt}


# -- modulus of convexity at the equator --------------------------------------


@lru_cache(maxsize=256)
def _axial_extent_scan(profile: MeridianProfile):
    """(theta grid, rho(theta) cos(theta) / rho(0)) used to bracket the eps-equation."""
    rho0 = profile.rho_axis
    if not rho0 > 0:
        raise AnalysisError("modulus of convexity needs rho(0) > 0")
    th = theta_grid(_SCAN_POINTS)
    h = np.asarray(profile.radial(th)) * np.cos(th) / rho0
    h[-1] = 0.0
    return th, h, rho0


def _eps_root(profile: MeridianProfile, eps: float) -> float:
    """x = cot(theta) for the largest theta solving rho(theta) cos(theta) / rho(0) = eps."""
    th, h, rho0 = _axial_extent_scan(profile)
    above = np.nonzero(h >= eps)[0]
    if above.size == 0:
        raise AnalysisError(f"eps={eps} exceeds the axial extent reached by this profile")
    i = above[-1]
    if i == th.size - 1:
        raise AnalysisError(f"no root of the eps-equation in (0, pi/2) for eps={eps}")
    x_hi = 1.0 / math.tan(th[i]) if th[i] > 0 else math.inf

    def g(x):
        return x * float(profile.psi(x)) / rho0 - eps

    if h[i] == eps:
        return x_hi  # inf when the root is the axis itself
    if not math.isfinite(x_hi):
        x_hi = 1.0
        while g(x_hi) < 0:
            x_hi *= 2.0
    # the last grid cell is below eps on its equatorial side: x in (x_lo, x_hi)
    x_lo = 1.0 / math.tan(th[i + 1]) if i + 1 < th.size - 1 else 0.0
    return brentq(g, x_lo, x_hi, xtol=1e-300, rtol=4 * np.finfo(float).eps, maxiter=200)


def modulus_equator(profile, eps: float) -> float:
    """delta^e(eps) = (psi(0) - psi(cot theta)) / psi(0) at the eps-matched angle."""
    profile = _as_profile(profile)
    if not 0 < eps <= 1:
        raise AnalysisError("eps must lie in (0, 1]")
    x = _eps_root(profile, eps)
    if math.isinf(x):
        return 1.0
    return float(profile.psi_drop(x)) / profile.rho_eq


def power_type_fit(profile, eps_grid=None) -> PowerTypeFit:
    """Least-squares slope of log delta^e against log eps.

    Returns p = inf (with nan coefficient and residual) when the body is
    flat at the equator somewhere on the grid.
    """
    profile = _as_profile(profile)
    eps = np.sort(np.asarray(DEFAULT_EPS_GRID if eps_grid is None else eps_grid, dtype=float))[::-1]
    if eps.size < 6 or np.any(eps <= 0) or np.any(eps > 1):
        raise AnalysisError("eps grid needs at least 6 points in (0, 1]")
    delta = np.array([modulus_equator(profile, e) for e in eps])
    if np.any(delta <= 0):
        return PowerTypeFit(math.inf, math.nan, math.nan, tuple(eps))
    le, ld = np.log(eps), np.log(delta)
    p = float(np.polyfit(le, ld, 1)[0])
    c = float(delta[-1] / eps[-1] ** p)
    residual = float(np.max(np.abs(ld - (math.log(c) + p * le))))
    return PowerTypeFit(p, c, residual, tuple(float(e) for e in eps))


# -- local convexity at the equator ------------------------------------------


def _equator_drop(profile: MeridianProfile, h: float, rho_eq: float) -> float:
    """rho(pi/2) - rho(pi/2 - h), through psi so that nothing cancels."""
    # rho(pi/2 - h) = psi(tan h) / cos h and 1 - cos h = 2 sin^2(h/2)
    return (float(profile.psi_drop(math.tan(h))) - rho_eq * 2 * math.sin(h / 2) ** 2) / math.cos(h)


def equator_convexity(profile, config: QuadratureConfig | None = None, tol_flat: float = TOL_FLAT) -> EquatorConvexityReport:
    """Sign of rho(pi/2) - rho''(pi/2), with rho'' from a Richardson-extrapolated second difference.

    The verdict compares the margin relative to rho(pi/2) against ``tol_flat``.
    """
    profile = _as_profile(profile)
    h = (config or QuadratureConfig()).deriv_step
    rho_eq = profile.rho_eq
    # symmetric about pi/2: D(h) = -2 (rho(pi/2) - rho(pi/2 - h)) / h^2
    d1 = -2 * _equator_drop(profile, h, rho_eq) / h**2
    d2 = -2 * _equator_drop(profile, h / 2, rho_eq) / (h / 2) ** 2
    rho_pp = (4 * d2 - d1) / 3
    margin = rho_eq - rho_pp
    rel = margin / rho_eq
    if rel > tol_flat:
        verdict = "strictly-convex"
    elif rel >= -tol_flat:
        verdict = "locally-convex-flat"
    else:
        verdict = "non-convex"
    return EquatorConvexityReport(rho_eq, rho_pp, margin, verdict, h)


# -- Banach-Mazur distance to the ball ---------------------------------------

_BM_POINTS = 4097


def _boundary_points(profile: MeridianProfile):
    th = np.union1d(theta_grid(_BM_POINTS), np.asarray(profile.kinks, dtype=float))
    r = np.asarray(profile.radial(th), dtype=float)
    if np.any(r <= 0) or not np.all(np.isfinite(r)):
        raise AnalysisError("radial function must be positive and finite for the distance to the ball")
    return r * np.cos(th), r * np.sin(th)


def bm_ball(profile, coarse: int = 64, log_range: float = 4.0, tol: float = 1e-12) -> BMResult:
    """min over axial dilations s of max(rho_s)/min(rho_s).

    An upper bound for the Banach-Mazur distance to the ball, optimal within
    diagonal maps diag(s, 1, ..., 1).  The boundary is sampled once; a
    dilation only rescales the axial coordinate of the samples.
    """
    profile = _as_profile(profile)
    X, Y = _boundary_points(profile)
    X2, Y2 = X * X, Y * Y

    def ratio(log_s):
        r2 = math.exp(2 * log_s) * X2 + Y2
        return math.sqrt(r2.max() / r2.min())

    grid = np.linspace(-log_range, log_range, coarse)
    vals = np.array([ratio(g) for g in grid])
    k = int(np.argmin(vals))
    a = grid[max(k - 1, 0)]
    b = grid[min(k + 1, coarse - 1)]
    # golden-section search on the bracket around the best coarse point
    invphi = (math.sqrt(5) - 1) / 2
    c, d = b - invphi * (b - a), a + invphi * (b - a)
    fc, fd = ratio(c), ratio(d)
    while b - a > tol:
        if fc <= fd:
            b, d, fd = d, c, fc
            c = b - invphi * (b - a)
            fc = ratio(c)
        else:
            a, c, fc = c, d, fd
            d = a + invphi * (b - a)
            fd = ratio(d)
    best = min((vals[k], grid[k]), (fc, c), (fd, d))
    curve = tuple(zip(np.exp(grid).tolist(), vals.tolist()))
    return BMResult(float(best[0]), float(math.exp(best[1])), curve)


# -- uniformity scan ---------------------------------------------------------


@dataclass(frozen=True)
class ScanRow:
    body: str
    n: int
    p: float
    c_K: float
    residual: float


def uniformity_scan(family, n_range, eps_grid=None, config: QuadratureConfig | None = None, names=None) -> list[ScanRow]:
    """Power type and quadratic coefficient of IK for every (K, n).

    ``c_K`` is delta^e(eps_min) / eps_min^2, the coefficient of eps^2 in
    the modulus of IK, so values stay comparable across bodies even when a
    fitted exponent drifts.
    """
    rows = []
    for i, K in enumerate(family):
        name = names[i] if names else format_body(K)
        for n in n_range:
            if not 4 <= n <= 20:
                raise AnalysisError("uniformity scan covers dimensions 4..20")
            exact = IntersectionProfile(K, n, config or DEFAULT_CONFIG)
            fit = power_type_fit(exact, eps_grid)
            e_min = min(fit.eps_grid)
            c_quad = modulus_equator(exact, e_min) / e_min**2
            rows.append(ScanRow(name, n, fit.p, c_quad, fit.residual))
    return rows


def scan_to_csv_rows(rows):
    return [("body", "n", "p", "c_K", "residual")] + [
        (r.body, r.n, r.p, r.c_K, r.residual) for r in rows
    ]
