"""Symmetric bodies of revolution described by their meridian radial profile.

A profile is the radial function on [0, pi/2], the angle measured from the
axis of revolution.  Values outside that range come from even reflection
at 0 and at pi/2, i.e. the body is centrally and axially symmetric.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import cached_property

import numpy as np
from scipy.interpolate import CubicHermiteSpline, CubicSpline
from scipy.optimize import brentq

HALF_PI = math.pi / 2

__all__ = [
    "MeridianProfile",
    "Ball",
    "SegmentBody",
    "DoubleCone",
    "Cylinder",
    "PBody",
    "TwoCylinderUnion",
    "Mod4Body",
    "CappedCylinder",
    "CosineSeries",
    "Dilated",
    "Sampled",
    "reflect",
    "radial",
    "psi",
    "dilate",
    "sigma",
    "UnreachableLevel",
]


class UnreachableLevel(ValueError):
    """psi never drops to the requested level on the search range."""


def reflect(theta):
    """Map angles into [0, pi/2] using the central and axial symmetries."""
    t = np.abs(np.asarray(theta, dtype=float)) % math.pi
    return np.where(t > HALF_PI, math.pi - t, t)


class MeridianProfile:
    """Base class.  Subclasses implement ``_rho`` on [0, pi/2]."""

    kind = "abstract"
    #: interior angles in (0, pi/2) where the profile is not smooth
    kinks: tuple = ()
    convex = False

    def _rho(self, t: np.ndarray) -> np.ndarray:
        raise NotImplementedError

    def radial(self, theta):
        t = reflect(theta)
        out = self._rho(t)
        return float(out) if np.ndim(out) == 0 else out

    __call__ = radial

    def psi(self, x):
        """rho(theta) * sin(theta) with x = cot(theta)."""
        x = np.abs(np.asarray(x, dtype=float))
        theta = np.arctan2(1.0, x)
        out = self._rho(theta) / np.sqrt(1.0 + x * x)
        return float(out) if np.ndim(out) == 0 else out

    def psi_drop(self, x):
        """psi(0) - psi(x).  Subclasses override when cancellation matters."""
        return self.psi(0.0) - self.psi(x)

    @property
    def rho_eq(self) -> float:
        return float(self._rho(np.asarray(HALF_PI)))

    @property
    def rho_axis(self) -> float:
        return float(self._rho(np.asarray(0.0)))


@dataclass(frozen=True, eq=True)
class Ball(MeridianProfile):
    kind = "ball"
    convex = True

    def _rho(self, t):
        return np.ones_like(t)

    def psi(self, x):
        x = np.asarray(x, dtype=float)
        out = 1.0 / np.hypot(1.0, x)
        return float(out) if np.ndim(out) == 0 else out

    def psi_drop(self, x):
        x = np.asarray(x, dtype=float)
        # 1 - 1/sqrt(1+x^2) without cancellation
        out = x * x / (np.hypot(1.0, x) * (1.0 + np.hypot(1.0, x)))
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class SegmentBody(MeridianProfile):
    """{a|x| + b|y| <= 1}; unbounded (a slab) if a or b vanishes."""

    a: float = 1.0
    b: float = 1.0
    kind = "segment"
    convex = True

    def __post_init__(self):
        if self.a < 0 or self.b < 0 or (self.a == 0 and self.b == 0):
            raise ValueError("segment body needs a, b >= 0, not both zero")

    def _rho(self, t):
        # exact zero at the equator so a slab (a > 0, b = 0) reports rho = inf there
        c = np.where(t >= HALF_PI, 0.0, np.cos(t))
        with np.errstate(divide="ignore"):
            return 1.0 / (self.a * c + self.b * np.sin(t))

    def psi(self, x):
        out = 1.0 / (self.a * np.abs(np.asarray(x, dtype=float)) + self.b)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class DoubleCone(SegmentBody):
    a: float = 1.0
    b: float = 1.0
    kind = "cone"

    def __post_init__(self):
        if (self.a, self.b) != (1.0, 1.0):
            raise ValueError("the double cone is the segment body with a = b = 1")


@dataclass(frozen=True)
class Cylinder(MeridianProfile):
    kind = "cylinder"
    kinks = (math.pi / 4,)
    convex = True

    def _rho(self, t):
        return 1.0 / np.maximum(np.cos(t), np.sin(t))

    def psi(self, x):
        x = np.abs(np.asarray(x, dtype=float))
        out = 1.0 / np.maximum(1.0, x)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class PBody(MeridianProfile):
    """Meridian |x|^p + |y|^p = 1 rotated about the axis."""

    p: float = 2.0
    kind = "pball"
    convex = True

    def __post_init__(self):
        if not (self.p >= 1 and math.isfinite(self.p)):
            raise ValueError("p must be finite and >= 1")

    def _rho(self, t):
        c, s = np.abs(np.cos(t)), np.abs(np.sin(t))
        m = np.maximum(c, s)
        # scale by the larger coordinate so large p does not underflow
        return 1.0 / (m * ((c / m) ** self.p + (s / m) ** self.p) ** (1.0 / self.p))

    def psi_drop(self, x):
        # psi = (1 + x^p)^(-1/p) for x = cot(theta)
        x = np.abs(np.asarray(x, dtype=float))
        out = -np.expm1(-np.log1p(x**self.p) / self.p)
        return float(out) if np.ndim(out) == 0 else out


@dataclass(frozen=True)
class TwoCylinderUnion(MeridianProfile):
    """K_t: the unit cylinder united with {|x| <= exp(-1/t), |y| <= 1/t}."""

    t: float = 0.5
    kind = "ktee"

    def __post_init__(self):
        if not self.t > 0:
            raise ValueError("t must be positive")

    @property
    def _half_axis(self):
        return math.exp(-1.0 / self.t)

    @property
    def _half_radius(self):
        return 1.0 / self.t

    def _rho(self, t):
        c, s = np.cos(t), np.sin(t)
        with np.errstate(divide="ignore"):
            thin = np.minimum(self._half_axis / c, self._half_radius / s)
        return np.maximum(thin, 1.0 / np.maximum(c, s))

    @property
    def kinks(self):
        h, r = self._half_axis, self._half_radius
        cand = [math.pi / 4, math.atan2(r, h), math.atan2(1.0, h), math.atan2(r, 1.0)]
        return tuple(sorted({k for k in cand if 0 < k < HALF_PI}))


@dataclass(frozen=True)
class Mod4Body(MeridianProfile):
    """Star body whose 4-dimensional intersection body has equatorial power type 4.

    rho = (4 sin^2 / cos^5)^(1/3) up to the break angle, then A / sin with A
    fixed by continuity.
    """

    kind = "mod4"

    @cached_property
    def break_angle(self) -> float:
        return HALF_PI - math.atan(5 ** 0.25)

    @cached_property
    def A(self) -> float:
        # A^3 = 4 tan^5 of the break angle = 4 * 5^(-5/4)
        return (4 * math.tan(self.break_angle) ** 5) ** (1.0 / 3.0)

    @property
    def kinks(self):
        return (self.break_angle,)

    def _rho(self, t):
        s, c = np.sin(t), np.cos(t)
        with np.errstate(divide="ignore", invalid="ignore"):
            inner = np.cbrt(4 * s * s / c**5)
            outer = self.A / s
        return np.where(t <= self.break_angle, inner, outer)


@dataclass(frozen=True)
class CappedCylinder(MeridianProfile):
    """rho = 0 on [0, alpha], then a linear ramp up to 1 at the equator."""

    alpha: float = 0.3
    kind = "capped"

    def __post_init__(self):
        if not 0 < self.alpha < HALF_PI:
            raise ValueError("alpha must lie in (0, pi/2)")

    @property
    def kinks(self):
        return (self.alpha,)

    def _rho(self, t):
        return np.clip((t - self.alpha) / (HALF_PI - self.alpha), 0.0, None)


@dataclass(frozen=True)
class CosineSeries(MeridianProfile):
    """max(floor, 1 + sum_k c_k cos(2 k theta)); used for random star bodies."""

    coeffs: tuple = ()
    floor: float = 0.05
    kind = "cosine"

    def _rho(self, t):
        out = np.ones_like(t)
        for k, c in enumerate(self.coeffs, start=1):
            out = out + c * np.cos(2 * k * t)
        return np.maximum(out, self.floor)


@dataclass(frozen=True)
class Dilated(MeridianProfile):
    """Profile of diag(s_axis, s_perp, ..., s_perp) applied to ``base``."""

    base: MeridianProfile
    s_axis: float = 1.0
    s_perp: float = 1.0
    kind = "dilated"

    def _preimage(self, t):
        vx = np.cos(t) / self.s_axis
        vy = np.sin(t) / self.s_perp
        return np.arctan2(vy, vx), np.hypot(vx, vy)

    def _rho(self, t):
        pre, norm = self._preimage(t)
        return self.base._rho(pre) / norm

    @property
    def kinks(self):
        return tuple(
            math.atan2(self.s_perp * math.sin(k), self.s_axis * math.cos(k))
            for k in self.base.kinks
        )

    @property
    def convex(self):
        return self.base.convex


def _monotone_hermite(x, y):
    """Cubic Hermite interpolant with spline slopes and the Hyman monotonicity filter.

    Slopes come from the not-a-knot cubic spline (fourth-order accurate).
    Where the data is monotone over two intervals on each side of a knot the
    slope is clipped into [0, 3 min|secant|] with the secants' sign, which
    keeps the interpolant monotone there.  Next to local extrema the spline
    slope is kept, so smooth profiles are reproduced to O(h^4).
    """
    if x.size < 4:
        return CubicHermiteSpline(x, y, np.zeros_like(y) if x.size < 3 else np.gradient(y, x))
    d = CubicSpline(x, y).derivative()(x)
    sec = np.diff(y) / np.diff(x)
    left, right = sec[:-1], sec[1:]
    # monotone (non-strictly) over two intervals on each side of the knot;
    # clipping next to an extremum would cost two orders of accuracy
    wide = np.concatenate([[0.0], sec, [0.0]])
    stencil = np.stack([wide[:-3], left, right, wide[3:]])
    up, down = np.all(stencil >= 0, axis=0), np.all(stencil <= 0, axis=0)
    sgn = np.where(up, 1.0, -1.0)
    bound = 3 * np.minimum(np.abs(left), np.abs(right))
    inner = d[1:-1]
    clipped = sgn * np.clip(sgn * inner, 0.0, bound)
    d[1:-1] = np.where(up | down, clipped, inner)
    return CubicHermiteSpline(x, y, d, extrapolate=False)


class Sampled(MeridianProfile):
    """Profile interpolated from samples on [0, pi/2].

    Samples are mirrored across both ends before building the interpolant,
    so slopes at the axis and the equator respect the symmetry.
    """

    kind = "sampled"
    _MIRROR = 8

    def __init__(self, theta, rho, interpolation="monotone-cubic"):
        theta = np.array(theta, dtype=float)
        rho = np.array(rho, dtype=float)
        if theta.ndim != 1 or theta.shape != rho.shape or theta.size < 2:
            raise ValueError("theta and rho must be matching 1-D arrays of length >= 2")
        if theta[0] != 0.0 or theta[-1] != HALF_PI:
            raise ValueError("samples must start at theta=0 and end at theta=pi/2 exactly")
        if np.any(np.diff(theta) <= 0):
            raise ValueError("theta must be strictly increasing")
        if not np.all(np.isfinite(rho)) or np.any(rho < 0):
            raise ValueError("rho must be finite and nonnegative")
        if rho[-1] <= 0:
            raise ValueError("rho(pi/2) must be positive")
        if interpolation not in ("monotone-cubic", "linear"):
            raise ValueError(f"unknown interpolation {interpolation!r}")
        theta.setflags(write=False)
        rho.setflags(write=False)
        self.theta = theta
        self.rho = rho
        self.interpolation = interpolation

    def __eq__(self, other):
        return (
            isinstance(other, Sampled)
            and self.interpolation == other.interpolation
            and np.array_equal(self.theta, other.theta)
            and np.array_equal(self.rho, other.rho)
        )

    def __hash__(self):
        return hash((self.theta.tobytes(), self.rho.tobytes(), self.interpolation))

    def __repr__(self):
        return f"Sampled(<{self.theta.size} samples>, interpolation={self.interpolation!r})"

    @cached_property
    def _interp(self):
        k = min(self._MIRROR, self.theta.size - 1)
        th, r = self.theta, self.rho
        th_ext = np.concatenate([-th[k:0:-1], th, math.pi - th[-2 : -k - 2 : -1]])
        r_ext = np.concatenate([r[k:0:-1], r, r[-2 : -k - 2 : -1]])
        return _monotone_hermite(th_ext, r_ext)

    def _rho(self, t):
        if self.interpolation == "linear":
            return np.interp(t, self.theta, self.rho)
        return np.maximum(self._interp(t), 0.0)

    def scaled(self, factor: float) -> "Sampled":
        return Sampled(self.theta, self.rho * factor, self.interpolation)


# -- module-level operations -------------------------------------------------


def radial(profile: MeridianProfile, theta):
    return profile.radial(theta)


def psi(profile: MeridianProfile, x):
    return profile.psi(x)


def dilate(profile: MeridianProfile, s_axis: float, s_perp: float) -> MeridianProfile:
    if not (s_axis > 0 and s_perp > 0 and math.isfinite(s_axis) and math.isfinite(s_perp)):
        raise ValueError("dilation scales must be positive and finite")
    if s_axis == 1 and s_perp == 1:
        return profile
    if isinstance(profile, Dilated):
        return dilate(profile.base, profile.s_axis * s_axis, profile.s_perp * s_perp)
    return Dilated(profile, float(s_axis), float(s_perp))


def sigma(profile: MeridianProfile, n: int, x_max: float = 1e8) -> float:
    """Smallest x >= 0 with psi(x) <= 1 - 1/n.

    Assumes psi(0) = 1 and psi non-increasing.
    """
    if n < 3:
        raise ValueError("dimension must be >= 3")
    level = 1.0 - 1.0 / n

    def g(x):
        return profile.psi(x) - level

    if g(0.0) <= 0:
        return 0.0
    hi = 1.0
    while g(hi) > 0:
        hi *= 2.0
        if hi > x_max:
            raise UnreachableLevel(f"psi stays above {level} on [0, {x_max:g}]")
    return brentq(g, 0.0, hi, xtol=1e-300, rtol=1e-12, maxiter=500)
