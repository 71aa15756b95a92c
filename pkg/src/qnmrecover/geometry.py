"""Static de Sitter-Schwarzschild geometry.

The metric function is alpha^2(r) = 1 - 2m/r - Lambda r^2 / 3.  For an
admissible pair (0 < 9 m^2 Lambda < 1) it has two positive roots, the
black-hole horizon r_bH and the cosmological horizon r_sI, plus a negative
root r_0 = -(r_bH + r_sI).  Everything downstream lives on the static
region (r_bH, r_sI).

The tortoise coordinate x (dx = dr / alpha^2) has a closed form: writing
alpha^2 = -(Lambda/3r)(r - r_bH)(r - r_sI)(r - r_0) and using
beta(r) = alpha^2'(r)/2, partial fractions give

    x(r) = sum_i ln|r - r_i| / (2 beta(r_i)) + const,

normalized here so that x = 0 at the critical radius r_c = (3m/Lambda)^(1/3)
where beta vanishes.  Near either horizon the distance u = |r - r_horizon|
decays like exp(2 beta x), so the map and its inverse are evaluated in
log-distance form there to keep full relative precision.
"""
from __future__ import annotations

import math
from dataclasses import dataclass

from .errors import InadmissibleParams, OutOfDomain

_EXTREMAL_SLACK = 1e-12


@dataclass(frozen=True)
class BlackHoleParams:
    """Mass and cosmological constant, admissible iff 0 < 9 m^2 Lambda < 1."""

    m: float
    Lambda: float

    def __post_init__(self):
        if not (self.m > 0 and self.Lambda > 0):
            raise InadmissibleParams(
                f"m = {self.m}, Lambda = {self.Lambda} must both be positive")
        x = 9.0 * self.m * self.m * self.Lambda
        if not x < 1.0 - _EXTREMAL_SLACK:
            raise InadmissibleParams(
                f"9 m^2 Lambda = {x:.6g} is not below 1; mass must lie in "
                f"(0, {mass_upper_bound(self.Lambda):.6g})")


def mass_upper_bound(Lambda):
    """Right endpoint of the admissible mass interval O = (0, 1/(3 sqrt(L)))."""
    return 1.0 / (3.0 * math.sqrt(Lambda))


@dataclass(frozen=True)
class HorizonData:
    r_bH: float
    r_sI: float
    r_0: float
    beta_bH: float
    beta_sI: float


def alpha_sq(r, params):
    """Metric function alpha^2 = 1 - 2m/r - Lambda r^2 / 3."""
    if not r > 0:
        raise ValueError("r must be positive")
    return 1.0 - 2.0 * params.m / r - params.Lambda * r * r / 3.0


def beta(r, params):
    """beta = (1/2) d(alpha^2)/dr = m/r^2 - Lambda r / 3."""
    if not r > 0:
        raise ValueError("r must be positive")
    return params.m / (r * r) - params.Lambda * r / 3.0


def critical_radius(params):
    """Unique positive zero of beta: r_c = (3m/Lambda)^(1/3)."""
    return (3.0 * params.m / params.Lambda) ** (1.0 / 3.0)


def horizons(params):
    """Horizon radii and surface-gravity values.

    Roots of the depressed cubic r^3 - (3/Lambda) r + 6m/Lambda = 0 via the
    trigonometric formula, each polished with one Newton step so that
    alpha^2 vanishes to full precision.
    """
    m, Lam = params.m, params.Lambda
    phi = math.acos(-3.0 * m * math.sqrt(Lam))
    pref = 2.0 / math.sqrt(Lam)
    r_sI = pref * math.cos(phi / 3.0)
    r_bH = pref * math.cos(phi / 3.0 - 2.0 * math.pi / 3.0)
    r_0 = pref * math.cos(phi / 3.0 - 4.0 * math.pi / 3.0)

    def polish(r):
        for _ in range(2):
            p = r * r * r - 3.0 * r / Lam + 6.0 * m / Lam
            dp = 3.0 * r * r - 3.0 / Lam
            r -= p / dp
        return r

    r_bH, r_sI, r_0 = polish(r_bH), polish(r_sI), polish(r_0)
    if not 0.0 < r_bH < r_sI:
        raise InadmissibleParams("horizon ordering collapsed; parameters "
                                 "are effectively extremal")
    return HorizonData(r_bH=r_bH, r_sI=r_sI, r_0=r_0,
                       beta_bH=beta(r_bH, params),
                       beta_sI=beta(r_sI, params))


def rw_potential(r, params, l):
    """Radial potential V = alpha^2 (l(l+1)/r^2 + 2 beta / r) on (r_bH, r_sI)."""
    hd = horizons(params)
    if not hd.r_bH < r < hd.r_sI:
        raise OutOfDomain(f"r = {r} outside ({hd.r_bH:.6g}, {hd.r_sI:.6g})")
    return alpha_sq(r, params) * (l * (l + 1) / (r * r)
                                  + 2.0 * beta(r, params) / r)


def trivial_set(params, depth):
    """{0} and the first `depth` surface-gravity multiples down each axis.

    These purely imaginary points are where the standard continuation
    machinery degenerates; recovery treats anything on i(-inf, 0] as
    excluded, and this set is exposed for diagnostics only.
    """
    if depth < 1:
        raise ValueError("depth must be a positive integer")
    hd = horizons(params)
    pts = {complex(0.0, 0.0)}
    for j in range(1, depth + 1):
        pts.add(complex(0.0, -j * hd.beta_bH))
        pts.add(complex(0.0, -j * abs(hd.beta_sI)))
    return sorted(pts, key=lambda z: abs(z.imag))


def lattice_scale(params):
    """Lattice frequency unit c = sqrt(1 - 9 Lambda m^2) / (3^{3/2} m)."""
    m, Lam = params.m, params.Lambda
    return math.sqrt(1.0 - 9.0 * Lam * m * m) / (3.0 ** 1.5 * m)


def lattice_scale_derivative(params):
    """dc/dm = -1 / (3^{3/2} m^2 sqrt(1 - 9 Lambda m^2)); negative on O."""
    m, Lam = params.m, params.Lambda
    return -1.0 / (3.0 ** 1.5 * m * m * math.sqrt(1.0 - 9.0 * Lam * m * m))


class TortoiseMap:
    """Closed-form tortoise coordinate and its inverse for fixed params."""

    # below this fraction of the gap r_sI - r_bH, the horizon distance u
    # is resolved through its logarithm instead of through r itself
    _U_SWITCH = 1e-3

    def __init__(self, params):
        self.params = params
        hd = horizons(params)
        self.hd = hd
        self.roots = (hd.r_bH, hd.r_sI, hd.r_0)
        # the coefficient at the negative root needs beta evaluated there,
        # which the public beta() refuses (r > 0 only)
        b0 = params.m / (hd.r_0 * hd.r_0) - params.Lambda * hd.r_0 / 3.0
        self.coef = (0.5 / hd.beta_bH, 0.5 / hd.beta_sI, 0.5 / b0)
        self.r_c = critical_radius(params)
        self._C = 0.0
        self._C = self._x_raw(self.r_c)
        self.gap = hd.r_sI - hd.r_bH

    def _x_raw(self, r):
        s = 0.0
        for ri, ai in zip(self.roots, self.coef):
            s += ai * math.log(abs(r - ri))
        return s - self._C

    def x_of_r(self, r):
        if not self.hd.r_bH < r < self.hd.r_sI:
            raise OutOfDomain(f"r = {r} outside the static region")
        return self._x_raw(r)

    # regular parts: x with the divergent horizon log split off
    def _g_left(self, r):
        a_b, a_s, a_0 = self.coef
        return (a_s * math.log(abs(r - self.hd.r_sI))
                + a_0 * math.log(abs(r - self.hd.r_0)) - self._C)

    def _g_right(self, r):
        a_b, a_s, a_0 = self.coef
        return (a_b * math.log(abs(r - self.hd.r_bH))
                + a_0 * math.log(abs(r - self.hd.r_0)) - self._C)

    def left_distance(self, x):
        """u = r - r_bH at tortoise position x, exact in log space."""
        a_b = self.coef[0]
        r = self.hd.r_bH
        u = 0.0
        for _ in range(3):
            u = math.exp((x - self._g_left(r)) / a_b)
            r = self.hd.r_bH + u
        return u

    def right_distance(self, x):
        """u = r_sI - r at tortoise position x, exact in log space."""
        a_s = self.coef[1]
        r = self.hd.r_sI
        u = 0.0
        for _ in range(3):
            u = math.exp((x - self._g_right(r)) / a_s)
            r = self.hd.r_sI - u
        return u

    def r_of_x(self, x):
        """Inverse map, safeguarded Newton with log-space horizon branches."""
        switch = self._U_SWITCH * self.gap
        u = self.left_distance(x)
        if u < switch:
            return self.hd.r_bH + u
        u = self.right_distance(x)
        if u < switch:
            return self.hd.r_sI - u
        lo, hi = self.hd.r_bH, self.hd.r_sI
        r = self.r_c
        for _ in range(80):
            err = self._x_raw(r) - x
            if err > 0:
                hi = r
            else:
                lo = r
            a2 = alpha_sq(r, self.params)
            step = -err * a2
            r_new = r + step
            if not lo < r_new < hi:
                r_new = 0.5 * (lo + hi)
            if abs(r_new - r) < 1e-15 * self.gap:
                return r_new
            r = r_new
        return r


def tortoise(r, params):
    """Tortoise coordinate x(r), zero at the critical radius."""
    return TortoiseMap(params).x_of_r(r)


def radius_from_tortoise(x, params):
    """Inverse tortoise map r(x) on the static region."""
    return TortoiseMap(params).r_of_x(x)
