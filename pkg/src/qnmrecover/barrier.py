"""Rectangular potential barrier: scattering matrix, resonances, recovery.

The barrier has unit height on [-L, L].  With q**2 = sigma**2 - 1, the
transmission/reflection coefficients and the resonance denominator K come
out of matching plane waves at the interfaces:

    K = ((q+s)/(q-s)) e^{-2iqL} - ((q-s)/(q+s)) e^{2iqL}
      = 2i (2s^2 - 1) sin(2qL) - 4qs cos(2qL)

(the second line uses q^2 - s^2 = -1 and is manifestly single-valued:
it is even under q -> -q up to an overall sign, so the principal branch
choice never moves a zero).  Resonances are the zeros of K in the lower
half-plane; the half-width is recovered from a single resonance via

    L = -ln|(q+s)/(q-s)| / (2 Im q).
"""
from __future__ import annotations

import cmath
import math
from dataclasses import dataclass

from . import zscan
from .errors import BranchPointInput, DegenerateResonance
from .zscan import ComplexRect

_DEFAULT_WINDOW = (0.01, 5.0, -2.0, -0.01)


@dataclass(frozen=True)
class BarrierModel:
    """Barrier of unit height supported on [-L, L]."""

    L: float

    def __post_init__(self):
        if not self.L > 0:
            raise ValueError("half-width L must be positive")


@dataclass(frozen=True)
class ScatteringData:
    sigma: complex
    q: complex
    r: complex
    t: complex
    r_prime: complex
    t_prime: complex
    K: complex


def _branch_value(sigma):
    return cmath.sqrt(sigma * sigma - 1.0)


def _is_branch_point(sigma, include_zero):
    eps = 1e-14 * max(1.0, abs(sigma))
    if include_zero and abs(sigma) < eps:
        return True
    return abs(sigma - 1.0) < eps or abs(sigma + 1.0) < eps


def _K_entire(sigma, q, L):
    # sin(2qL) and q*cos(2qL) are both odd in q, so this expression only
    # changes overall sign under a branch flip; its zero set is fixed
    return (2j * (2.0 * sigma * sigma - 1.0) * cmath.sin(2.0 * q * L)
            - 4.0 * q * sigma * cmath.cos(2.0 * q * L))


def scattering_matrix(model, sigma):
    """Full scattering data at complex frequency sigma.

    Raises BranchPointInput for sigma in {0, +1, -1} where the matching
    formulas degenerate.
    """
    sigma = complex(sigma)
    if _is_branch_point(sigma, include_zero=True):
        raise BranchPointInput(f"sigma = {sigma} is a degenerate frequency")
    q = _branch_value(sigma)
    L = model.L
    K = _K_entire(sigma, q, L)
    plus = (q + sigma) / (q - sigma)
    r = (cmath.exp(-2j * sigma * L + 2j * q * L)
         - cmath.exp(-2j * sigma * L - 2j * q * L)) / K
    t = (cmath.exp(-2j * sigma * L - 2j * q * L)
         + r * plus * cmath.exp(-2j * q * L))
    return ScatteringData(sigma=sigma, q=q, r=r, t=t,
                          r_prime=r, t_prime=t, K=K)


def resonance_function(model, sigma):
    """K(sigma; L): resonances are its zeros in the lower half-plane."""
    sigma = complex(sigma)
    if _is_branch_point(sigma, include_zero=False):
        raise BranchPointInput(f"sigma = {sigma} is a branch point")
    return _K_entire(sigma, _branch_value(sigma), model.L)


def barrier_resonances(model, window=None, tol=1e-10, quad_points=16,
                       threads=None):
    """Zeros of K inside the window, refined and sorted by Re sigma."""
    if window is None:
        window = ComplexRect(*_DEFAULT_WINDOW)
    zeros = zscan.find_zeros(lambda s: resonance_function(model, s),
                             window, tol=tol, quad_points=quad_points,
                             threads=threads)
    return sorted(zeros, key=lambda z: z.location.real)


def recover_length(sigma_res):
    """Barrier half-width from one resonance frequency.

    Uses L = -ln|(q+s)/(q-s)| / (2 Im q); both factors flip sign under
    q -> -q so the principal branch choice drops out exactly.
    """
    sigma = complex(sigma_res)
    q = _branch_value(sigma)
    if abs(q.imag) < 1e-12:
        raise DegenerateResonance(
            f"Im q = {q.imag:.2e} is too small to invert at sigma = {sigma}")
    return -math.log(abs((q + sigma) / (q - sigma))) / (2.0 * q.imag)
