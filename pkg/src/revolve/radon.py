"""Intersection bodies of bodies of revolution by one-dimensional quadrature.

The operator is evaluated in its regularized form

    rho_IK(theta) = int_0^{pi/2} rho_K(arccos(sin(theta) sin(u)))^(n-1) cos(u)^(n-3) du,

which has a smooth weight for every n >= 3.  The normalizing constant c_n
is taken to be 1 unless ``QuadratureConfig.use_true_cn`` is set.
"""

from __future__ import annotations

import math
from dataclasses import dataclass, field

import numpy as np

from .bodies import HALF_PI, MeridianProfile, Sampled, reflect
from .quadrature import QuadratureConfig, integrate_many

__all__ = [
    "QuadratureConfig",
    "NormalizationConstants",
    "OperatorResult",
    "IntersectionProfile",
    "DegenerateProfile",
    "ik_radial",
    "ik_axis",
    "psi_ik",
    "psi_ik_drop",
    "ik_equator_margin",
    "intersection_body",
    "iterate_intersection",
]

DEFAULT_CONFIG = QuadratureConfig()
MAX_ITERATIONS = 16


class DegenerateProfile(ValueError):
    """The input profile cannot produce a star body (e.g. rho vanishes at the equator)."""


@dataclass(frozen=True)
class NormalizationConstants:
    n: int
    use_true_cn: bool = False

    def __post_init__(self):
        if self.n < 3:
            raise ValueError("dimension must be >= 3")

    @property
    def c_n(self) -> float:
        n = self.n
        return (n - 2) / (n - 1) * 2 * math.exp((n / 2 - 1) * math.log(math.pi) - math.lgamma(n / 2))

    @property
    def d_n(self) -> float:
        n = self.n
        return (n - 1) / (n - 2) * math.sqrt(n / 2) * math.exp(math.lgamma(n / 2) - math.lgamma((n + 1) / 2))

    @property
    def scale(self) -> float:
        """Factor applied to every operator output."""
        return self.c_n if self.use_true_cn else 1.0

    @property
    def axis_factor(self) -> float:
        """d_n sqrt(pi/(2n)), equal to int_0^{pi/2} cos(u)^(n-3) du."""
        return self.d_n * math.sqrt(math.pi / (2 * self.n))


def _check_input(profile: MeridianProfile, n: int):
    if n < 3 or int(n) != n:
        raise ValueError(f"dimension must be an integer >= 3, got {n}")
    eq = profile.rho_eq
    if not (eq > 0 and math.isfinite(eq)):
        raise DegenerateProfile(f"rho(pi/2) must be positive and finite, got {eq}")


def _seed_breaks(n: int, hi: float = HALF_PI):
    """Panel seeds at the concentration scale 1/sqrt(n) of cos(u)^(n-3)."""
    step = 1.0 / math.sqrt(n)
    return [b for b in (step, 2 * step, 4 * step) if b < hi]


# -- theta-domain kernel -----------------------------------------------------


def _kernel(profile, n, thetas, cfg):
    """Regularized operator integral for an array of angles; returns (values, errors)."""
    thetas = reflect(np.atleast_1d(thetas))
    s = np.sin(thetas)
    c = np.cos(thetas)
    seeds = _seed_breaks(n)
    kinks = np.asarray(profile.kinks, dtype=float)
    edges = []
    for si in s:
        e = [0.0, HALF_PI, *seeds]
        if kinks.size and si > 0:
            arg = np.cos(kinks) / si
            e.extend(np.arcsin(arg[arg < 1.0]))
        edges.append(e)

    def f(u, idx):
        si, ci = s[idx], c[idx]
        cu = np.cos(u)
        phi = np.arctan2(np.sqrt(ci * ci + (si * cu) ** 2), si * np.sin(u))
        return profile._rho(phi) ** (n - 1) * cu ** (n - 3)

    vals, errs = integrate_many(
        f, edges, order=cfg.nodes, abs_tol=cfg.abs_tol, max_panels=cfg.panels
    )
    return vals, errs


def ik_radial(profile: MeridianProfile, n: int, theta, config: QuadratureConfig | None = None,
              *, return_error: bool = False):
    """Radial function of the intersection body at angle(s) ``theta``."""
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    scalar = np.ndim(theta) == 0
    vals, errs = _kernel(profile, n, theta, cfg)
    k = NormalizationConstants(n, cfg.use_true_cn).scale
    vals, errs = vals * k, errs * k
    if scalar:
        vals, errs = float(vals[0]), float(errs[0])
    return (vals, errs) if return_error else vals


def ik_axis(profile: MeridianProfile, n: int, config: QuadratureConfig | None = None) -> float:
    """rho_IK(0) = d_n sqrt(pi/(2n)) rho_K(pi/2)^(n-1) (times c_n if requested)."""
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    nc = NormalizationConstants(n, cfg.use_true_cn)
    return nc.scale * nc.axis_factor * profile.rho_eq ** (n - 1)


# -- x-domain (psi) forms -----------------------------------------------------


def _psi_edges(profile, n, x):
    """Breaks for integrals in v where t = sin(v)/x is the psi_K argument."""
    e = [0.0, HALF_PI, *_seed_breaks(n)]
    for t in [0.25, 0.5, 1.0, 2.0, 4.0] + [1.0 / math.tan(k) for k in profile.kinks]:
        if x * t < 1.0:
            e.append(math.asin(x * t))
    return e


def _psi_equator(profile, n, cfg):
    """psi_IK(0) = int_0^{pi/2} rho_K(phi)^(n-1) sin(phi)^(n-3) dphi."""
    e = [0.0, HALF_PI, *profile.kinks, *(HALF_PI - b for b in _seed_breaks(n))]

    def f(phi, idx):
        return profile._rho(phi) ** (n - 1) * np.sin(phi) ** (n - 3)

    vals, errs = integrate_many(f, [e], order=cfg.nodes, abs_tol=cfg.abs_tol, max_panels=cfg.panels)
    return vals[0], errs[0]


def _psi_many(profile, n, xs, cfg):
    """psi_IK(x) for x > 0 via t = sin(v)/x in the x-domain integral."""
    xs = np.asarray(xs, dtype=float)

    def f(v, idx):
        x = xs[idx]
        return profile.psi(np.sin(v) / x) ** (n - 1) * np.cos(v) ** (n - 3) / x

    edges = [_psi_edges(profile, n, x) for x in xs]
    return integrate_many(f, edges, order=cfg.nodes, abs_tol=cfg.abs_tol, max_panels=cfg.panels)


def psi_ik(profile: MeridianProfile, n: int, x, config: QuadratureConfig | None = None,
           *, return_error: bool = False):
    """psi of the intersection body, computed independently of `ik_radial`.

    x = 0 uses the equatorial theta-domain integral; x > 0 uses the
    x-domain integral with the substitution t = sin(v)/x.
    """
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    k = NormalizationConstants(n, cfg.use_true_cn).scale
    scalar = np.ndim(x) == 0
    xs = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    vals = np.empty_like(xs)
    errs = np.empty_like(xs)
    zero = xs == 0
    if zero.any():
        v0, e0 = _psi_equator(profile, n, cfg)
        vals[zero], errs[zero] = v0, e0
    if (~zero).any():
        vals[~zero], errs[~zero] = _psi_many(profile, n, xs[~zero], cfg)
    vals, errs = vals * k, errs * k
    if scalar:
        vals, errs = float(vals[0]), float(errs[0])
    return (vals, errs) if return_error else vals


def _drop_tail(profile, n, xs, cfg, tol):
    """int_0^{atan x} rho_K^(n-1) sin^(n-3): the part of psi_IK(0) beyond t = 1/x."""
    ends = np.arctan(xs)
    edges = []
    for a in ends:
        edges.append([0.0, a, *(k for k in profile.kinks if k < a), *(a * f for f in (0.25, 0.5))])

    def f(phi, idx):
        return profile._rho(phi) ** (n - 1) * np.sin(phi) ** (n - 3)

    return integrate_many(f, edges, order=cfg.nodes, abs_tol=tol, max_panels=cfg.panels)


def _drop_body(profile, n, xs, cfg, tol):
    """(1/x) int_0^{pi/2} psi_K(sin v/x)^(n-1) (cos v - cos^(n-3) v) dv, cancellation-free."""

    def f(v, idx):
        x = xs[idx]
        log_cos = np.log1p(-2.0 * np.sin(0.5 * v) ** 2)
        weight = -np.cos(v) * np.expm1((n - 4) * log_cos)
        return profile.psi(np.sin(v) / x) ** (n - 1) * weight / x

    edges = [_psi_edges(profile, n, x) for x in xs]
    return integrate_many(f, edges, order=cfg.nodes, abs_tol=tol, max_panels=cfg.panels)


def psi_ik_drop(profile: MeridianProfile, n: int, x, config: QuadratureConfig | None = None):
    """psi_IK(0) - psi_IK(x), evaluated without subtracting two O(1) numbers.

    Splits into the tail of the equatorial integral beyond t = 1/x and the
    deficit of the weight (1 - x^2 t^2)^((n-4)/2) below it.
    """
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    scalar = np.ndim(x) == 0
    xs = np.abs(np.atleast_1d(np.asarray(x, dtype=float)))
    out = np.zeros_like(xs)
    pos = xs > 0
    if pos.any():
        xp = xs[pos]
        # the drop is O(x^2) or smaller; scale the target accordingly
        tol = cfg.abs_tol * float(min(1.0, xp.min() ** 2))
        tail, _ = _drop_tail(profile, n, xp, cfg, tol)
        body = 0.0 if n == 4 else _drop_body(profile, n, xp, cfg, tol)[0]
        out[pos] = tail + body
    out *= NormalizationConstants(n, cfg.use_true_cn).scale
    return float(out[0]) if scalar else out


def ik_equator_margin(profile: MeridianProfile, n: int, config: QuadratureConfig | None = None) -> float:
    """rho_IK(pi/2) - rho_IK''(pi/2) in closed integral form (n >= 4).

    n = 4: rho_K(0)^3.  n >= 5: (n-4) int_0^{pi/2} rho_K^(n-1) sin^(n-5) cos^2.
    Serves as an oracle for the finite-difference convexity test.
    """
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    k = NormalizationConstants(n, cfg.use_true_cn).scale
    if n == 4:
        return k * profile.rho_axis ** 3
    if n < 4:
        raise ValueError("the equatorial second derivative is not finite for n = 3 in general")
    e = [0.0, HALF_PI, *profile.kinks]

    def f(phi, idx):
        return profile._rho(phi) ** (n - 1) * np.sin(phi) ** (n - 5) * np.cos(phi) ** 2

    vals, _ = integrate_many(f, [e], order=cfg.nodes, abs_tol=cfg.abs_tol, max_panels=cfg.panels)
    return k * (n - 4) * float(vals[0])


# -- lazily evaluated intersection body --------------------------------------


@dataclass(frozen=True)
class IntersectionProfile(MeridianProfile):
    """The intersection body of ``source``, evaluated by quadrature on demand."""

    source: MeridianProfile
    n: int
    config: QuadratureConfig = field(default=DEFAULT_CONFIG)
    kind = "intersection"

    def __post_init__(self):
        _check_input(self.source, self.n)

    @property
    def convex(self):
        return self.source.convex

    def _rho(self, t):
        t = np.asarray(t, dtype=float)
        vals = ik_radial(self.source, self.n, t.ravel(), self.config)
        return vals.reshape(t.shape)

    def psi(self, x):
        return psi_ik(self.source, self.n, x, self.config)

    def psi_drop(self, x):
        return psi_ik_drop(self.source, self.n, x, self.config)

    @property
    def rho_eq(self):
        return float(psi_ik(self.source, self.n, 0.0, self.config))

    @property
    def rho_axis(self):
        return ik_axis(self.source, self.n, self.config)


@dataclass
class OperatorResult:
    profile: Sampled
    n: int
    config: QuadratureConfig
    max_quadrature_error_estimate: float
    exact: IntersectionProfile = field(repr=False, default=None)

    @property
    def cn_mode(self) -> str:
        return "true" if self.config.use_true_cn else "one"

    def normalized(self) -> Sampled:
        """The sampled profile uniformly dilated so that rho(pi/2) = 1."""
        return self.profile.scaled(1.0 / self.profile.rho[-1])

    def to_json(self) -> dict:
        return {
            "n": self.n,
            "cn_mode": self.cn_mode,
            "theta": [float(t) for t in self.profile.theta],
            "rho": [float(r) for r in self.profile.rho],
            "err_est": float(self.max_quadrature_error_estimate),
        }


def theta_grid(size: int) -> np.ndarray:
    g = np.linspace(0.0, HALF_PI, size)
    g[-1] = HALF_PI
    return g


def intersection_body(profile: MeridianProfile, n: int, config: QuadratureConfig | None = None) -> OperatorResult:
    """Sample rho_IK on a uniform theta grid (axis value from the closed form)."""
    cfg = config or DEFAULT_CONFIG
    _check_input(profile, n)
    grid = theta_grid(cfg.grid_size)
    rho = np.empty_like(grid)
    rho[0] = ik_axis(profile, n, cfg)
    rho[1:], errs = ik_radial(profile, n, grid[1:], cfg, return_error=True)
    sampled = Sampled(grid, rho, "monotone-cubic")
    return OperatorResult(
        profile=sampled,
        n=n,
        config=cfg,
        max_quadrature_error_estimate=float(np.max(errs)),
        exact=IntersectionProfile(profile, n, cfg),
    )


def iterate_intersection(profile: MeridianProfile, n: int, m: int,
                         config: QuadratureConfig | None = None) -> list[OperatorResult]:
    """Apply the operator m times, renormalizing to rho(pi/2) = 1 between steps.

    Each result holds the raw (unnormalized) output of its step; the input
    of step k+1 is ``results[k].normalized()``.
    """
    if not 1 <= m <= MAX_ITERATIONS:
        raise ValueError(f"iterations must lie in [1, {MAX_ITERATIONS}]")
    results = []
    current = profile
    for _ in range(m):
        res = intersection_body(current, n, config)
        results.append(res)
        current = res.normalized()
    return results
