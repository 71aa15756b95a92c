"""Mass recovery from a single resonance, and stability probing.

Closed-form path: a lattice point factors as mu = n c(m) with
n = re_sign (l + 1/2) - (i/2)(k + 1/2), so the quotient lambda / n must
land on the positive real axis, and 27 c^2 m^2 = 1 - 9 Lambda m^2 gives
m = 1/sqrt(27 c^2 + 9 Lambda).  Numeric path: a safeguarded secant on
real m drives F(m) = (tracked shooting zero) - lambda* to zero.

Identifiability caveats, stated once: with a single mode and unknown
indices the quotient phase depends only on the ratio
(k + 1/2)/(2l + 1), so distinct hypotheses can alias each other exactly
(e.g. (l,k) = (1,0) and (4,1)), and the modulus is always absorbed into
c.  Blind scans therefore return every consistent hypothesis instead of
picking one.
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import spectrum
from .errors import (DegenerateSlope, ExcludedResonance, InadmissibleParams,
                     InconsistentIndices, NoLocalResonance, NonConvergence)
from .geometry import (BlackHoleParams, lattice_scale,
                       lattice_scale_derivative, mass_upper_bound)

USABLE = "usable"
EXCLUDED = "imaginary_axis_excluded"
TRIVIAL = "trivial"


@dataclass(frozen=True)
class ResonanceClass:
    """Usability verdict for a resonance offered to the inverse problem."""

    kind: str

    def __post_init__(self):
        if self.kind not in (USABLE, EXCLUDED, TRIVIAL):
            raise ValueError(f"unknown resonance class {self.kind!r}")


@dataclass(frozen=True)
class RecoveryResult:
    """Outcome of one mass recovery.

    residual is the consistency defect the accepting gate was checked
    against (quotient phase in radians for the lattice path, |F(m_hat)|
    for the numeric path).  condition estimates |dm/dlambda|.
    delta_neighborhood is the local-uniqueness radius actually probed
    (distance traveled from the starting guess, floored at the m
    resolution the residual tolerance implies).
    """

    m_hat: float
    residual: float
    condition: float
    holder_N: float
    delta_neighborhood: float

    def __post_init__(self):
        if not self.m_hat > 0:
            raise ValueError("m_hat must be positive")
        if self.residual < 0 or self.condition <= 0:
            raise ValueError("residual must be >= 0 and condition > 0")
        if self.holder_N < 0.85:
            raise ValueError("holder_N below the estimator's trust floor")
        if not self.delta_neighborhood > 0:
            raise ValueError("delta_neighborhood must be positive")


def classify_resonance(lam, tol_axis=1e-9):
    """Sort a frequency into usable / excluded-axis / trivial.

    Total and idempotent: any complex input maps to exactly one class.
    """
    lam = complex(lam)
    if tol_axis <= 0:
        raise ValueError("tol_axis must be positive")
    if abs(lam) <= tol_axis:
        return ResonanceClass(TRIVIAL)
    if abs(lam.real) < tol_axis and lam.imag <= 0:
        return ResonanceClass(EXCLUDED)
    return ResonanceClass(USABLE)


def _require_usable(lam, what):
    kind = classify_resonance(lam).kind
    if kind != USABLE:
        raise ExcludedResonance(f"{what} is {kind}: lambda = {lam:.6g}")


def _index_factor(l, k, re_sign):
    if l < 0 or k < 0:
        raise ValueError("l and k must be nonnegative integers")
    if re_sign not in (1, -1):
        raise ValueError("re_sign must be +1 or -1")
    return re_sign * (l + 0.5) - 0.5j * (k + 0.5)


def recover_mass_lattice(lam, Lambda, l, k, re_sign, gate=1e-3):
    """Invert one pseudo-pole: exact algebra plus a consistency gate.

    The quotient lambda/n must sit on the positive real axis; its phase
    defect (radians) is the residual, and a defect above ``gate`` means
    the (l, k, re_sign) hypothesis does not fit this frequency.
    """
    lam = complex(lam)
    if Lambda <= 0:
        raise ValueError("Lambda must be positive")
    _require_usable(lam, "input resonance")
    n = _index_factor(l, k, re_sign)
    c_hat = lam / n
    defect = abs(cmath.phase(c_hat))
    if defect > gate:
        raise InconsistentIndices(
            f"quotient phase defect {defect:.3e} rad exceeds the "
            f"{gate:.0e} gate for (l={l}, k={k}, sign={re_sign:+d})")
    c = c_hat.real
    m_hat = 1.0 / math.sqrt(27.0 * c * c + 9.0 * Lambda)
    hi = mass_upper_bound(Lambda)
    assert m_hat < hi  # 27 c^2 + 9 Lambda > 9 Lambda for every c > 0
    params = BlackHoleParams(m_hat, Lambda)
    condition = 1.0 / (abs(n) * abs(lattice_scale_derivative(params)))
    return RecoveryResult(m_hat=m_hat, residual=defect, condition=condition,
                          holder_N=1.0,
                          delta_neighborhood=min(m_hat, hi - m_hat))


@dataclass(frozen=True)
class BlindCandidate:
    """One passing hypothesis of a blind index scan."""

    l: int
    k: int
    re_sign: int
    result: RecoveryResult


def recover_mass_lattice_blind(lam, Lambda, l_max, k_max, gate=1e-3):
    """Scan all index hypotheses; keep every one that passes the gate.

    Returns candidates sorted by residual (ties by ascending indices);
    an empty list is a valid outcome, and is what excluded or trivial
    inputs produce.  Distinct passing hypotheses are expected: the
    quotient phase cannot tell aliased index pairs apart, and each
    candidate carries its own m_hat.
    """
    lam = complex(lam)
    if classify_resonance(lam).kind != USABLE:
        return []
    out = []
    for l in range(l_max + 1):
        for k in range(k_max + 1):
            for sign in (1, -1):
                try:
                    res = recover_mass_lattice(lam, Lambda, l, k, sign,
                                               gate=gate)
                except InconsistentIndices:
                    continue
                out.append(BlindCandidate(l, k, sign, res))
    out.sort(key=lambda c: (c.result.residual, c.l, c.k, -c.re_sign))
    return out


def _damping_index(lam_star, params, config):
    """Damping band k the input frequency most plausibly belongs to.

    The shooting spectrum's observed damping spacing is (k + 1/2) c;
    the index is clipped so the seed stays inside the damping cap.
    """
    c = lattice_scale(params)
    cap = spectrum.damping_cap_value(params, config)
    k = max(int(round(-lam_star.imag / c - 0.5)), 0)
    while k > 0 and (k + 0.5) * c > 0.95 * cap:
        k -= 1
    if (k + 0.5) * c > 0.95 * cap:
        raise NoLocalResonance(
            f"least-damped band expects |Im lambda| ~ {0.5 * c:.3g}, beyond "
            f"the damping cap {cap:.3g} at m = {params.m:.6g}")
    return k


def _tracked_zero(seed, Lambda, l, m, config, refine_tol):
    """Shooting zero near the continuation seed, with a drift guard."""
    params = BlackHoleParams(m, Lambda)
    rep = spectrum.qnm_near(params, l, seed, config, tol=refine_tol)
    radius = 0.5 * lattice_scale(params)
    drift = abs(rep.location - seed)
    if drift > radius:
        raise NoLocalResonance(
            f"zero drifted {drift:.3g} from the tracking seed at m = "
            f"{m:.6g} (radius {radius:.3g}); the band was lost")
    return rep.location


def recover_mass_numeric(lam_star, Lambda, l, m_init, tol=1e-8, *,
                         config=None, max_iter=40, refine_tol=1e-10):
    """Recover m by driving the tracked shooting zero onto lambda*.

    F(m) = zero(m) - lambda* is complex while m is real, so each secant
    step is the least-squares projection -Re(F conj(s))/|s|^2 onto the
    measured slope s = dF/dm, trust-limited to 20% of m and reflected
    at the admissible-interval boundaries.  Stops when |F| <= tol; a
    collapsed step with |F| still above tol raises NonConvergence (tol
    doubles as the acceptance gate on the reported residual, so set it
    no tighter than the noise on lambda*).
    """
    lam_star = complex(lam_star)
    _require_usable(lam_star, "target resonance")
    if Lambda <= 0:
        raise ValueError("Lambda must be positive")
    if tol <= 0:
        raise ValueError("tol must be positive")
    hi = mass_upper_bound(Lambda)
    if not 0.0 < m_init < hi:
        raise InadmissibleParams(
            f"m_init = {m_init:.6g} outside the admissible (0, {hi:.6g})")
    cfg = config or spectrum.ShootingConfig()
    lo_m, hi_m = 1e-9 * hi, (1.0 - 1e-9) * hi

    m = float(m_init)
    params = BlackHoleParams(m, Lambda)
    sign = 1 if lam_star.real > 0 else -1
    k_hat = _damping_index(lam_star, params, cfg)
    # seed from the observed band law Im ~ -(k + 1/2) c, not the lattice's
    # asymptotic -(k + 1/2) c / 2, so Muller starts inside the right basin
    n_emp = sign * (l + 0.5) - 1j * (k_hat + 0.5)
    seed = n_emp * lattice_scale(params)
    s = n_emp * lattice_scale_derivative(params)   # bootstrap slope
    m_prev = None
    f_prev = None
    for _ in range(max_iter):
        z = _tracked_zero(seed, Lambda, l, m, cfg, refine_tol)
        f = z - lam_star
        if abs(f) <= tol:
            condition = 1.0 / abs(s)
            delta = max(abs(m - m_init), tol * condition)
            return RecoveryResult(m_hat=m, residual=abs(f),
                                  condition=condition, holder_N=1.0,
                                  delta_neighborhood=delta)
        if m_prev is not None and m != m_prev:
            s_meas = (f - f_prev) / (m - m_prev)
            if abs(s_meas) > 1e-14:
                s = s_meas
        if abs(s) < 1e-14:
            raise NonConvergence(
                "secant slope degenerated; the zero does not move with m")
        step = -(f.real * s.real + f.imag * s.imag) / (abs(s) ** 2)
        limit = 0.2 * m
        step = max(-limit, min(limit, step))
        if abs(step) < 1e-15 * max(1.0, m):
            raise NonConvergence(
                f"step collapsed with residual {abs(f):.3e} above tol "
                f"{tol:.0e}; loosen tol toward the noise on lambda*")
        m_prev, f_prev = m, f
        m_new = m + step
        for _ in range(4):   # reflect back into the open interval
            if m_new < lo_m:
                m_new = lo_m + (lo_m - m_new)
            elif m_new > hi_m:
                m_new = hi_m - (m_new - hi_m)
            else:
                break
        else:
            m_new = 0.5 * (lo_m + hi_m)
        seed = z + s * (m_new - m)
        m = m_new
    raise NonConvergence(
        f"no convergence in {max_iter} secant iterations (last residual "
        f"{abs(f):.3e}, tol {tol:.0e})")


def holder_exponent(lambda_of_m, m0, deltas=(1e-2, 1e-3, 1e-4)):
    """Least-squares slope of log|dlambda| against log|dm|.

    This is the empirical Holder exponent denominator: ~1 for smooth
    one-to-one dependence, ~N when |dlambda| ~ |dm|^N.  Requires at
    least three step decades; a frequency that does not move raises
    DegenerateSlope (the trivial-resonance direction).
    """
    if len(deltas) < 3:
        raise DegenerateSlope("need at least three step decades to fit")
    lam0 = lambda_of_m(m0)
    xs, ys = [], []
    for d in deltas:
        if d <= 0:
            raise ValueError("deltas must be positive")
        move = abs(lambda_of_m(m0 + d) - lam0)
        if move < 1e-14:
            raise DegenerateSlope(
                f"|dlambda| = {move:.2e} at dm = {d:.0e}: no usable signal")
        xs.append(math.log(d))
        ys.append(math.log(move))
    n = len(xs)
    mx = sum(xs) / n
    my = sum(ys) / n
    sxx = sum((x - mx) ** 2 for x in xs)
    sxy = sum((x - mx) * (y - my) for x, y in zip(xs, ys))
    return sxy / sxx


def stability_probe(m_hat, Lambda, l, k, mode="lattice", re_sign=1, *,
                    config=None, refine_tol=1e-10):
    """Empirical condition number and Holder exponent at m_hat.

    Returns (condition, holder_N) where condition estimates |dm/dlambda|
    (closed form in lattice mode, central difference of the tracked zero
    in shooting mode).  These are desk-scale surrogates for the abstract
    stability constants, not their values.
    """
    params = BlackHoleParams(m_hat, Lambda)
    n = _index_factor(l, k, re_sign)
    if mode == "lattice":
        def lam_of_m(mm):
            return n * lattice_scale(BlackHoleParams(mm, Lambda))

        slope = abs(n) * abs(lattice_scale_derivative(params))
        if slope < 1e-14:
            raise DegenerateSlope("lattice frequency insensitive to m")
        return 1.0 / slope, holder_exponent(lam_of_m, m_hat)
    if mode != "shooting":
        raise ValueError(f"unknown probe mode {mode!r}")

    cfg = config or spectrum.ShootingConfig()
    n_emp = re_sign * (l + 0.5) - 1j * (k + 0.5)
    c0 = lattice_scale(params)
    base = _tracked_zero(n_emp * c0, Lambda, l, m_hat, cfg, refine_tol)

    def lam_of_m(mm):
        cc = lattice_scale(BlackHoleParams(mm, Lambda))
        return _tracked_zero(base + n_emp * (cc - c0), Lambda, l, mm,
                             cfg, refine_tol)

    h = 1e-6 * m_hat
    dlam = (lam_of_m(m_hat + h) - lam_of_m(m_hat - h)) / (2.0 * h)
    if abs(dlam) < 1e-14:
        raise DegenerateSlope("tracked zero insensitive to m")
    return 1.0 / abs(dlam), holder_exponent(lam_of_m, m_hat)
