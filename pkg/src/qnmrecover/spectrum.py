"""Quasinormal frequencies of de Sitter-Schwarzschild.

Two models live here.  The asymptotic pseudo-pole lattice

    mu = (re_sign (l + 1/2) - (i/2)(k + 1/2)) c,
    c  = (1 - 9 Lambda m^2)^(1/2) / (3^(3/2) m),

is closed form.  The numerical model integrates the radial equation
v'' + (lambda^2 - V) v = 0 on the tortoise line with outgoing conditions
at both ends (e^{-i lambda x} toward the black-hole horizon, e^{+i lambda x}
toward the cosmological horizon) and locates zeros of the Wronskian of the
two solutions.

Numerical choices that matter:

* The third integration state is w = ln(distance to the active horizon),
  so alpha^2 = u * (smooth factor) is evaluated without cancellation and
  the boundary placement is exact even when u underflows r's resolution.
* Truncation points X are placed where |V| < xmax_tol |lambda|^2, computed
  in closed form from the exponential decay rates 2 beta of V.
* xmax_tol defaults to 1e-6, and pushing it lower buys nothing: both
  solutions decay toward the match point, so any error seeded at X
  (roundoff included) rides the growing complementary solution and is
  amplified by e^{2 |Im lambda| X}.  For the least-damped band
  2 |Im lambda| sits within a few percent of the slow cosmological decay
  rate 2 |beta_sI|, so the truncation bias it would trade against is
  nearly flat in X while the noise floor grows exponentially.
* The returned value is (vL vR' - vL' vR) * exp(i lambda (X_right - X_left)),
  which is entire in lambda, equals exactly 2 i lambda for V = 0, and keeps
  an O(lambda) scale so residual gates are meaningful.
* Direct integration loses reliability for heavily damped modes, so
  |Im lambda| is capped at 0.9 min(beta_bH, |beta_sI|) (k_cap + 1).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass, replace
from functools import lru_cache

from . import _ode, zscan
from .errors import DampingCapExceeded, NoConvergence
from .geometry import TortoiseMap, lattice_scale
from .zscan import ComplexRect, ZeroReport


@dataclass(frozen=True)
class LatticePoint:
    """One pseudo-pole: indices (l, k), real-part sign, value and scale."""

    l: int
    k: int
    re_sign: int
    mu: complex
    c: float


@dataclass(frozen=True)
class QnmWindow:
    """Search window for resonances; must sit in the open lower half-plane."""

    rect: ComplexRect
    l: int
    method: str = "shooting"

    def __post_init__(self):
        if self.rect.im_max >= 0:
            raise ValueError("resonance windows lie in Im lambda < 0")
        if self.method not in ("lattice", "shooting"):
            raise ValueError(f"unknown method {self.method!r}")
        if self.l < 0:
            raise ValueError("l must be a nonnegative integer")


@dataclass(frozen=True)
class ShootingConfig:
    """Tunables of the Wronskian evaluator.

    step_scale < 1 forces proportionally smaller accepted steps (see
    _ode.integrate); xmax_pad > 1 pushes both truncation points farther
    out by that factor.  x_left/x_right, when set, freeze the truncation
    points explicitly (window scans do this so the scanned function is
    one fixed analytic object).
    """

    rtol: float = 1e-10
    atol: float = 1e-12
    xmax_tol: float = 1e-6
    match_point: float = 0.0
    damping_cap: float | None = None
    k_cap: int = 2
    step_scale: float = 1.0
    xmax_pad: float = 1.0
    max_step: float = 10.0
    max_steps: int = 2_000_000
    residual_gate: float = 1e-8
    x_left: float | None = None
    x_right: float | None = None


_DEFAULT = ShootingConfig()


@lru_cache(maxsize=256)
def _tmap(params):
    return TortoiseMap(params)


def pseudo_poles(params, l_max, k_max):
    """Lattice points for 0 <= l <= l_max, 0 <= k <= k_max, both signs."""
    if l_max < 0 or k_max < 0:
        raise ValueError("l_max and k_max must be nonnegative")
    c = lattice_scale(params)
    out = []
    for l in range(l_max + 1):
        for k in range(k_max + 1):
            for sign in (1, -1):
                mu = (sign * (l + 0.5) - 0.5j * (k + 0.5)) * c
                out.append(LatticePoint(l=l, k=k, re_sign=sign, mu=mu, c=c))
    out.sort(key=lambda p: (p.l, p.k, -p.re_sign))
    return out


def lattice_point(params, l, k, re_sign):
    """Single pseudo-pole value for the given indices."""
    c = lattice_scale(params)
    mu = (re_sign * (l + 0.5) - 0.5j * (k + 0.5)) * c
    return LatticePoint(l=l, k=k, re_sign=re_sign, mu=mu, c=c)


def damping_cap_value(params, config=_DEFAULT):
    """Largest |Im lambda| the direct integrator is trusted with."""
    if config.damping_cap is not None:
        return config.damping_cap
    hd = _tmap(params).hd
    return 0.9 * min(hd.beta_bH, abs(hd.beta_sI)) * (config.k_cap + 1)


def _potential_pieces(r, m, Lam, ll1, rb, rs, r0):
    """V and dV/dx at radius r, from the factored alpha^2."""
    a2 = -(Lam / (3.0 * r)) * (r - rb) * (r - rs) * (r - r0)
    b = m / (r * r) - Lam * r / 3.0
    S = ll1 / (r * r) + 2.0 * b / r
    V = a2 * S
    db = -2.0 * m / (r * r * r) - Lam / 3.0
    dS = -2.0 * ll1 / (r * r * r) + 2.0 * (db * r - b) / (r * r)
    dVdr = 2.0 * b * S + a2 * dS
    return V, a2 * dVdr


def _truncation_points(params, l, lam_mag, config):
    """Closed-form X_left, X_right where |V| crosses xmax_tol |lambda|^2."""
    if config.x_left is not None and config.x_right is not None:
        return config.x_left, config.x_right
    tm = _tmap(params)
    hd = tm.hd
    a_b, a_s, _ = tm.coef
    lam2 = max(lam_mag * lam_mag, 1e-12)
    ll1 = l * (l + 1)
    xm = config.match_point

    grad_b = 2.0 * hd.beta_bH
    slope = abs(grad_b * (ll1 / hd.r_bH ** 2 + 2.0 * hd.beta_bH / hd.r_bH))
    u_t = min(config.xmax_tol * lam2 / slope, 1e-3 * tm.gap)
    x_l = a_b * math.log(u_t) + tm._g_left(hd.r_bH + u_t)
    x_l = xm - max(xm - x_l, 5.0) * config.xmax_pad

    grad_s = 2.0 * abs(hd.beta_sI)
    slope = abs(grad_s * (ll1 / hd.r_sI ** 2 + 2.0 * hd.beta_sI / hd.r_sI))
    u_t = min(config.xmax_tol * lam2 / slope, 1e-3 * tm.gap)
    x_r = a_s * math.log(u_t) + tm._g_right(hd.r_sI - u_t)
    x_r = xm + max(x_r - xm, 5.0) * config.xmax_pad
    return x_l, x_r


def _wkb_start(lam, V, dVdx, outgoing_sign):
    """First-order WKB value/derivative of the outgoing solution."""
    lam2 = lam * lam
    local = lam * cmath.sqrt(1.0 - V / lam2)
    dv = outgoing_sign * 1j * local + dVdx / (4.0 * (lam2 - V))
    return 1.0 + 0.0j, dv


def wronskian(params, l, lam, config=None):
    """Scaled Wronskian of the two outgoing solutions at the match point.

    Zeros in lambda are the resonances.  Entire in lambda; evaluates on
    both half-planes (the physical side Im lambda >= 0 must come out
    zero-free).  Raises DampingCapExceeded beyond the damping band and
    StiffIntegration if the stepper dies.
    """
    cfg = config or _DEFAULT
    lam = complex(lam)
    if abs(lam) < 1e-6:
        raise ValueError("0 is outside the evaluator's frequency domain")
    cap = damping_cap_value(params, cfg)
    if abs(lam.imag) > cap:
        raise DampingCapExceeded(
            f"|Im lambda| = {abs(lam.imag):.4g} exceeds cap {cap:.4g}")
    tm = _tmap(params)
    hd = tm.hd
    m, Lam = params.m, params.Lambda
    rb, rs, r0 = hd.r_bH, hd.r_sI, hd.r_0
    ll1 = l * (l + 1)
    lam2 = lam * lam
    x_l, x_r = _truncation_points(params, l, abs(lam), cfg)
    xm = cfg.match_point

    exp = math.exp

    def rhs_left(x, v, dv, w, _L=Lam, _m=m):
        u = exp(w)
        r = rb + u
        g = -(_L / (3.0 * r)) * (r - rs) * (r - r0)
        b = _m / (r * r) - _L * r / 3.0
        V = u * g * (ll1 / (r * r) + 2.0 * b / r)
        return dv, (V - lam2) * v, g

    def rhs_right(x, v, dv, w, _L=Lam, _m=m):
        u = exp(w)
        r = rs - u
        g = (_L / (3.0 * r)) * (r - rb) * (r - r0)
        b = _m / (r * r) - _L * r / 3.0
        V = u * g * (ll1 / (r * r) + 2.0 * b / r)
        return dv, (V - lam2) * v, -g

    u0 = tm.left_distance(x_l)
    V0, dV0 = _potential_pieces(rb + u0, m, Lam, ll1, rb, rs, r0)
    v0, dv0 = _wkb_start(lam, V0, dV0, -1)
    vL, dvL, _, _ = _ode.integrate(
        rhs_left, x_l, xm, (v0, dv0, math.log(u0)),
        cfg.rtol, cfg.atol, cfg.max_step, cfg.step_scale, cfg.max_steps)

    u0 = tm.right_distance(x_r)
    V0, dV0 = _potential_pieces(rs - u0, m, Lam, ll1, rb, rs, r0)
    v0, dv0 = _wkb_start(lam, V0, dV0, +1)
    vR, dvR, _, _ = _ode.integrate(
        rhs_right, x_r, xm, (v0, dv0, math.log(u0)),
        cfg.rtol, cfg.atol, cfg.max_step, cfg.step_scale, cfg.max_steps)

    return (vL * dvR - dvL * vR) * cmath.exp(1j * lam * (x_r - x_l))


def qnm_near(params, l, guess, config=None, tol=1e-10):
    """Refine one Wronskian zero from a seed frequency.

    Muller iteration runs until |W| <= tol or the step underflows tol
    (the evaluator has a finite noise floor, so the step criterion is
    the one that usually fires).  The result must still pass the
    configured residual gate or NoConvergence is raised.
    """
    cfg = config or _DEFAULT
    rep = zscan.refine_zero(lambda z: wronskian(params, l, z, cfg),
                            guess, tol=tol)
    if rep.residual > cfg.residual_gate:
        raise NoConvergence(
            f"Wronskian residual {rep.residual:.2e} above the "
            f"{cfg.residual_gate:.0e} gate at {rep.location}; the noise "
            "floor rises with |Im lambda| and with smaller xmax_tol")
    return rep


def qnm_shooting(params, window, config=None, tol=1e-10, quad_points=16,
                 threads=None):
    """Wronskian zeros in a lower-half-plane window, sorted by Re.

    The truncation points are frozen across the whole scan so the counted
    function is a single analytic object.  A chopped domain has spurious
    resonances of its own (a comb with spacing pi / (X_right - X_left)
    whose depth depends on the truncation quality), so every candidate is
    re-polished against the adaptively re-truncated evaluator; candidates
    that fail its residual gate, drift out of the window, or collapse
    onto an already-accepted zero are dropped as truncation artifacts.
    """
    cfg = config or _DEFAULT
    if window.method != "shooting":
        raise ValueError("window.method must be 'shooting' here")
    rect, l = window.rect, window.l
    cap = damping_cap_value(params, cfg)
    if abs(rect.im_min) > cap:
        raise DampingCapExceeded(
            f"window floor Im = {rect.im_min:.4g} beyond cap {cap:.4g}")
    # freeze truncation using the window point closest to the origin,
    # which asks for the farthest-out (most conservative) X pair
    re_ref = min(abs(rect.re_min), abs(rect.re_max))
    if rect.re_min < 0 < rect.re_max:
        re_ref = 0.0
    lam_ref = max(math.hypot(re_ref, abs(rect.im_max)), 1e-3)
    x_l, x_r = _truncation_points(params, l, lam_ref, cfg)
    frozen = replace(cfg, x_left=x_l, x_right=x_r)
    zeros = zscan.find_zeros(lambda z: wronskian(params, l, z, frozen),
                             rect, tol=tol, quad_points=quad_points,
                             threads=threads)
    out = []
    for z in zeros:
        try:
            polished = qnm_near(params, l, z.location, cfg, tol=tol)
        except (NoConvergence, DampingCapExceeded):
            continue
        loc = polished.location
        if not rect.contains(loc, slack=1e-6 * max(1.0, abs(loc))):
            continue
        if any(abs(prev.location - loc) < 1e-6 * max(1.0, abs(loc))
               for prev in out):
            continue
        out.append(ZeroReport(loc, z.multiplicity, polished.residual,
                              z.refine_iterations
                              + polished.refine_iterations))
    out.sort(key=lambda r: r.location.real)
    return out
