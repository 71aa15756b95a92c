"""Argument-principle scanner against polynomial and entire oracles."""
import cmath
import math

import pytest

from qnmrecover.errors import NoConvergence
from qnmrecover.zscan import (ComplexRect, count_zeros, find_zeros,
                              refine_zero)

ROOTS = [1.0 + 0.0j, 2j, -1.0 + 1.0j]


def poly(z):
    out = 1.0 + 0.0j
    for r in ROOTS:
        out *= z - r
    return out


def test_rect_validation():
    with pytest.raises(ValueError):
        ComplexRect(1.0, 0.0, -1.0, 1.0)
    r = ComplexRect(-1.0, 1.0, -2.0, 2.0)
    assert r.width == 2.0 and r.height == 4.0
    assert r.center == 0.0 - 0.0j
    assert r.contains(0.5 + 1.0j)
    assert not r.contains(3.0)


def test_count_all_roots():
    rect = ComplexRect(-2.0, 3.0, -1.0, 3.0)
    assert count_zeros(poly, rect) == 3


def test_count_subregion():
    assert count_zeros(poly, ComplexRect(0.5, 1.5, -0.5, 0.5)) == 1
    assert count_zeros(poly, ComplexRect(3.0, 4.0, 3.0, 4.0)) == 0


def test_count_entire_function():
    # sin has zeros at integer multiples of pi
    rect = ComplexRect(0.5, 7.0, -1.0, 1.0)
    assert count_zeros(cmath.sin, rect) == 2


def test_boundary_zero_is_jittered():
    # zero of f(z) = z sits exactly on a contour node; one jitter absorbs it
    rect = ComplexRect(0.0, 1.0, -0.5, 0.5)
    assert count_zeros(lambda z: z, rect) == 1


def test_find_zeros_matches_roots():
    rect = ComplexRect(-2.0, 3.0, -1.0, 3.0)
    found = find_zeros(poly, rect, tol=1e-12)
    assert len(found) == 3
    assert sum(z.multiplicity for z in found) == 3
    got = sorted((z.location for z in found), key=lambda w: (w.real, w.imag))
    want = sorted(ROOTS, key=lambda w: (w.real, w.imag))
    for g, w in zip(got, want):
        assert abs(g - w) < 1e-10


def test_find_zeros_reports_multiplicity():
    f = lambda z: (z - 0.5) ** 2 * (z + 1.5)
    rect = ComplexRect(-2.0, 2.0, -1.0, 1.0)
    found = find_zeros(f, rect, tol=1e-10)
    assert sum(z.multiplicity for z in found) == 3
    double = [z for z in found if z.multiplicity == 2]
    assert len(double) == 1
    # |f| <= tol at a double zero pins the location only to ~sqrt(tol)
    assert abs(double[0].location - 0.5) < 1e-4


def test_find_zeros_sorted_and_thread_stable():
    rect = ComplexRect(-2.0, 3.0, -1.0, 3.0)
    one = find_zeros(poly, rect, tol=1e-12, threads=1)
    many = find_zeros(poly, rect, tol=1e-12, threads=4)
    assert [z.location for z in one] == [z.location for z in many]
    locs = [z.location for z in one]
    assert locs == sorted(locs, key=lambda w: (w.real, w.imag))


def test_refine_zero_quadratic_target():
    rep = refine_zero(cmath.sin, 3.0 + 0.2j, tol=1e-12)
    assert abs(rep.location - math.pi) < 1e-10
    assert rep.residual <= 1e-12
    assert rep.refine_iterations < 20


def test_refine_zero_stops_by_step_on_noise_floor():
    # linear zero buried under a deterministic 1e-9 evaluation noise: |f|
    # cannot reach tol, but the steps near the floor are ~|f|/slope ~ 1e-11
    # so the iteration must stop by step size and report the best point
    def noisy(z):
        u = (hash((z.real, z.imag)) % 1000) / 500.0 - 1.0
        return 100.0 * (z - 1.0) + 1e-9 * u

    rep = refine_zero(noisy, 1.1, tol=1e-10)
    assert abs(rep.location - 1.0) < 1e-6
    assert rep.residual < 1e-7


def test_refine_zero_raises_when_no_zero_nearby():
    # exp has no zeros: |f| keeps shrinking along the iteration but never
    # reaches tol, and the steps stay O(1), so the stall must be reported
    with pytest.raises(NoConvergence):
        refine_zero(cmath.exp, 50.0, tol=1e-12, max_iter=12)


def test_count_respects_quad_points_floor():
    with pytest.raises(ValueError):
        count_zeros(poly, ComplexRect(-2.0, 3.0, -1.0, 3.0), quad_points=8)
