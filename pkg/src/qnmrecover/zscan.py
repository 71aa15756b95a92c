"""Zeros of holomorphic functions on axis-aligned rectangles.

The counting step walks the rectangle boundary and sums phase increments
of f (argument principle without f'); edges are bisected until every
increment is below pi/2.  Location runs a quad-tree subdivision until each
leaf encloses at most one zero, then polishes with a derivative-free
Muller iteration.  Everything works off plain function handles so callers
can pass Wronskian-type evaluators whose derivatives are unavailable.
"""
from __future__ import annotations

import cmath
import math
import os
from concurrent.futures import ThreadPoolExecutor
from dataclasses import dataclass

from .errors import BoundaryZero, MaxDepthExceeded, NoConvergence, NonIntegerWinding

_REL_FLOOR = 1e-13     # boundary-zero threshold relative to typical |f|
_EDGE_SPLIT_DEPTH = 48
_DEFAULT_TOL = 1e-10


def _worker_count():
    raw = os.environ.get("QNM_THREADS", "")
    try:
        n = int(raw)
    except ValueError:
        n = 1
    return max(1, n)


@dataclass(frozen=True)
class ComplexRect:
    """Axis-aligned search window in the complex frequency plane."""

    re_min: float
    re_max: float
    im_min: float
    im_max: float

    def __post_init__(self):
        if not (self.re_min < self.re_max and self.im_min < self.im_max):
            raise ValueError("rectangle must have nonempty interior")

    @property
    def width(self):
        return self.re_max - self.re_min

    @property
    def height(self):
        return self.im_max - self.im_min

    @property
    def center(self):
        return complex(0.5 * (self.re_min + self.re_max),
                       0.5 * (self.im_min + self.im_max))

    def contains(self, z, slack=0.0):
        return (self.re_min - slack <= z.real <= self.re_max + slack
                and self.im_min - slack <= z.imag <= self.im_max + slack)

    def dilated(self, factor):
        dw = 0.5 * (factor - 1.0) * self.width
        dh = 0.5 * (factor - 1.0) * self.height
        return ComplexRect(self.re_min - dw, self.re_max + dw,
                           self.im_min - dh, self.im_max + dh)

    def corners(self):
        # counterclockwise, starting at the lower-left corner
        return (complex(self.re_min, self.im_min),
                complex(self.re_max, self.im_min),
                complex(self.re_max, self.im_max),
                complex(self.re_min, self.im_max))


@dataclass(frozen=True)
class ZeroReport:
    """One located zero: position, multiplicity, |f| left over, work done."""

    location: complex
    multiplicity: int = 1
    residual: float = 0.0
    refine_iterations: int = 0


class _Evaluator:
    """Memoizing wrapper around f, shared across counting and refinement."""

    def __init__(self, f, threads=None):
        self.f = f
        self.cache = {}
        self.threads = _worker_count() if threads is None else max(1, threads)

    def __call__(self, z):
        v = self.cache.get(z)
        if v is None:
            v = complex(self.f(z))
            self.cache[z] = v
        return v

    def prime(self, points):
        """Evaluate many points, optionally on a thread pool."""
        missing = [z for z in points if z not in self.cache]
        if not missing:
            return
        if self.threads > 1 and len(missing) > 1:
            with ThreadPoolExecutor(max_workers=self.threads) as pool:
                for z, v in zip(missing, pool.map(self.f, missing)):
                    self.cache[z] = complex(v)
        else:
            for z in missing:
                self.cache[z] = complex(self.f(z))


def _phase_sum(ev, z1, z2, f1, f2, floor, depth=0):
    """Phase increment of f along [z1, z2], bisecting until jumps < pi/2."""
    if abs(f2) <= floor:
        raise BoundaryZero(f"|f| ~ {abs(f2):.2e} on the contour near {z2}")
    dphi = cmath.phase(f2 / f1)
    if abs(dphi) < 0.5 * math.pi:
        return dphi
    if depth >= _EDGE_SPLIT_DEPTH:
        # a jump that survives this many bisections means f pivots through
        # 0 between two boundary points that are machine-adjacent
        raise BoundaryZero(f"phase jump will not settle near {z1}")
    zm = 0.5 * (z1 + z2)
    fm = ev(zm)
    if abs(fm) <= floor:
        raise BoundaryZero(f"|f| ~ {abs(fm):.2e} on the contour near {zm}")
    return (_phase_sum(ev, z1, zm, f1, fm, floor, depth + 1)
            + _phase_sum(ev, zm, z2, fm, f2, floor, depth + 1))


def _winding(ev, rect, quad_points):
    corners = rect.corners()
    nodes = []
    for a, b in zip(corners, corners[1:] + corners[:1]):
        for j in range(quad_points):
            nodes.append(a + (b - a) * (j / quad_points))
    ev.prime(nodes)
    mags = sorted(abs(ev(z)) for z in nodes)
    typical = mags[len(mags) // 2]
    if typical == 0.0:
        raise BoundaryZero("f vanishes on half the contour nodes")
    floor = _REL_FLOOR * typical
    total = 0.0
    for i, z1 in enumerate(nodes):
        z2 = nodes[(i + 1) % len(nodes)]
        f1, f2 = ev(z1), ev(z2)
        if abs(f1) <= floor:
            raise BoundaryZero(f"|f| ~ {abs(f1):.2e} on the contour near {z1}")
        total += _phase_sum(ev, z1, z2, f1, f2, floor)
    w = total / (2.0 * math.pi)
    n = round(w)
    if abs(w - n) > 0.25:
        raise NonIntegerWinding(
            f"phase total {w:.3f} turns is not near an integer")
    return n


def _jittered(rect):
    d = 1e-6 * rect.width
    return ComplexRect(rect.re_min - d, rect.re_max + 1.3 * d,
                       rect.im_min - 0.7 * d, rect.im_max + 1.1 * d)


def _count(ev, rect, quad_points):
    try:
        return _winding(ev, rect, quad_points), rect
    except BoundaryZero:
        shifted = _jittered(rect)
        return _winding(ev, shifted, quad_points), shifted


def count_zeros(f, rect, quad_points=16):
    """Number of zeros of f inside rect, counted with multiplicity.

    f must be holomorphic on the closed rectangle and nonvanishing on its
    boundary.  If a contour node lands on a zero the rectangle is jittered
    by 1e-6 of its width once before giving up.
    """
    if quad_points < 16:
        raise ValueError("quad_points must be at least 16 per edge")
    n, _ = _count(_Evaluator(f), rect, quad_points)
    return n


def refine_zero(f, z0, tol=_DEFAULT_TOL, max_iter=200, _ev=None,
                stall_ok=False):
    """Polish a zero near z0 by damped Muller iteration.

    Stops when |f| <= tol or the step falls below tol.  Accepted steps
    never increase |f|; steps that would are halved up to eight times
    before the iteration gives up.  With stall_ok a stall above tol
    returns the best point found instead of raising (the window scanner
    uses this: its winding counts already guarantee a zero is present,
    so the best point plus its residual is the honest answer).
    """
    ev = _ev if _ev is not None else _Evaluator(f)
    d = max(abs(z0) * 1e-4, 1e-6)
    xs = [z0 - d, z0 + d * complex(0.7, 0.7), z0]
    fs = [ev(x) for x in xs]
    best_x, best_f = min(zip(xs, fs), key=lambda p: abs(p[1]))
    if abs(best_f) <= tol:
        return ZeroReport(best_x, 1, abs(best_f), 0)
    for it in range(1, max_iter + 1):
        (x0, x1, x2), (f0, f1, f2) = xs, fs
        h1, h2 = x1 - x0, x2 - x1
        if h1 == 0 or h2 == 0 or h1 + h2 == 0:
            break
        d1, d2 = (f1 - f0) / h1, (f2 - f1) / h2
        a = (d2 - d1) / (h2 + h1)
        b = a * h2 + d2
        disc = cmath.sqrt(b * b - 4.0 * a * f2)
        denom = b + disc if abs(b + disc) >= abs(b - disc) else b - disc
        if denom == 0:
            dx = -f2 / d2 if d2 != 0 else 0.0
        else:
            dx = -2.0 * f2 / denom
        if dx == 0.0:
            break
        full_step = abs(dx)
        x3 = x2 + dx
        f3 = ev(x3)
        halvings = 0
        while abs(f3) > abs(f2) and halvings < 8:
            dx *= 0.5
            x3 = x2 + dx
            f3 = ev(x3)
            halvings += 1
        if abs(f3) > abs(f2):
            if full_step < tol or stall_ok:
                # converged by step size: |f| sits on its attainable floor
                return ZeroReport(best_x, 1, abs(best_f), it)
            break
        xs = [x1, x2, x3]
        fs = [f1, f2, f3]
        if abs(f3) < abs(best_f):
            best_x, best_f = x3, f3
        if abs(f3) <= tol or abs(dx) < tol:
            return ZeroReport(x3, 1, abs(f3), it)
    if stall_ok or abs(best_f) <= tol:
        return ZeroReport(best_x, 1, abs(best_f), max_iter)
    raise NoConvergence(
        f"|f| stalled at {abs(best_f):.2e} near {best_x} (tol {tol:.1e})")


def _subdivide(ev, rect, count, quad_points, tol, depth, max_depth, out):
    if count == 0:
        return
    scale = max(abs(rect.center), 1.0)
    cluster_span = max(4.0 * tol, 64.0 * 2.2e-16 * scale)
    at_cluster = max(rect.width, rect.height) <= cluster_span
    if count == 1 or at_cluster:
        rep = refine_zero(None, rect.center, tol=tol, _ev=ev, max_iter=60,
                          stall_ok=True)
        slack = max(tol, 1e-9 * max(rect.width, 1.0))
        if (rect.contains(rep.location, slack=slack) or at_cluster
                or depth >= max_depth):
            out.append((ZeroReport(rep.location, count, rep.residual,
                                   rep.refine_iterations), rect))
            return
        # the polish hopped to a zero outside this cell (the center of a
        # wide cell can sit closer to a neighbor); shrink the cell around
        # the zero that was actually counted and try again
    if depth >= max_depth:
        raise MaxDepthExceeded(
            f"{count} zeros still clustered in a cell of width "
            f"{rect.width:.2e} at depth {depth}")
    last_err = None
    for frac in (0.5, 0.53, 0.47, 0.59, 0.41):
        xm = rect.re_min + frac * rect.width
        ym = rect.im_min + frac * rect.height
        cells = [ComplexRect(rect.re_min, xm, rect.im_min, ym),
                 ComplexRect(xm, rect.re_max, rect.im_min, ym),
                 ComplexRect(rect.re_min, xm, ym, rect.im_max),
                 ComplexRect(xm, rect.re_max, ym, rect.im_max)]
        try:
            counted = [_winding(ev, c, quad_points) for c in cells]
        except BoundaryZero as err:
            last_err = err
            continue
        if sum(counted) != count:
            raise NonIntegerWinding(
                f"children count {sum(counted)} != parent count {count}")
        for c, n in zip(cells, counted):
            _subdivide(ev, c, n, quad_points, tol, depth + 1, max_depth, out)
        return
    raise last_err


def find_zeros(f, rect, tol=_DEFAULT_TOL, quad_points=16, max_depth=40,
               threads=None):
    """All zeros of f inside rect, each reported once with multiplicity.

    The reported multiplicities always sum to count_zeros(f, rect); a
    cluster tighter than tol is returned as one zero carrying the whole
    enclosed count.  Results are sorted by (Re, Im).
    """
    if quad_points < 16:
        raise ValueError("quad_points must be at least 16 per edge")
    ev = _Evaluator(f, threads=threads)
    total, base = _count(ev, rect, quad_points)
    found = []
    _subdivide(ev, base, total, quad_points, tol, 0, max_depth, found)
    merged = []
    for rep, cell in found:
        loc = rep.location
        if not cell.contains(loc, slack=max(tol, 1e-9 * max(cell.width, 1.0))):
            # refinement slid past the leaf edge; the zero is still the one
            # that was counted, so keep it as long as the window holds it
            if not base.contains(loc, slack=tol):
                raise NoConvergence(
                    f"refined zero {loc} escaped the search window")
        for i, other in enumerate(merged):
            if abs(other.location - loc) < 10.0 * tol:
                merged[i] = ZeroReport(
                    other.location,
                    other.multiplicity + rep.multiplicity,
                    min(other.residual, rep.residual),
                    max(other.refine_iterations, rep.refine_iterations))
                break
        else:
            merged.append(rep)
    merged.sort(key=lambda r: (r.location.real, r.location.imag))
    return merged
