"""Exception types shared across the library.

Every error carries a short ``remedy`` string so the CLI can print a
one-line hint next to the error name.
"""
from __future__ import annotations


class QnmError(Exception):
    """Base class for all domain errors raised by this package."""

    remedy = "check the inputs against the documented preconditions"

    def __init__(self, message="", remedy=None):
        super().__init__(message)
        if remedy is not None:
            self.remedy = remedy


# ---- zero finding ----------------------------------------------------------

class BoundaryZero(QnmError):
    """|f| vanishes (to tolerance) on the contour of a counting rectangle."""

    remedy = "perturb or dilate the rectangle so no zero sits on its boundary"


class NonIntegerWinding(QnmError):
    """Accumulated phase around the contour is not close to 2*pi*integer."""

    remedy = "increase quad_points, or verify f is holomorphic on the window"


class MaxDepthExceeded(QnmError):
    """Quad-tree subdivision hit the depth cap before isolating zeros."""

    remedy = "loosen tol, shrink the window, or expect a tight zero cluster"


class NoConvergence(QnmError):
    """Local refinement exhausted its iteration budget."""

    remedy = "start closer to a zero or relax the residual tolerance"


# ---- barrier model ---------------------------------------------------------

class BranchPointInput(QnmError):
    """Frequency sits on a branch point of q = sqrt(sigma^2 - 1)."""

    remedy = "evaluate away from sigma in {0, +1, -1}"


class DegenerateResonance(QnmError):
    """Recovery formula undefined: Im q vanishes for this frequency."""

    remedy = "use a resonance with |Im q| > 1e-12"


# ---- geometry --------------------------------------------------------------

class InadmissibleParams(QnmError):
    """(m, Lambda) violates 0 < 9 m^2 Lambda < 1."""

    remedy = "choose mass in the open interval (0, 1/(3*sqrt(Lambda)))"


class OutOfDomain(QnmError):
    """Radius outside the static region (r_bH, r_sI)."""

    remedy = "evaluate strictly between the two horizon radii"


# ---- spectrum --------------------------------------------------------------

class DampingCapExceeded(QnmError):
    """|Im lambda| beyond the configured direct-integration cap."""

    remedy = "raise --damping-cap knowingly, or target a less damped mode"


class StiffIntegration(QnmError):
    """Adaptive step size underflowed or the step budget ran out."""

    remedy = "loosen --rtol or move the frequency away from the horizons' cap"


# ---- recovery --------------------------------------------------------------

class InconsistentIndices(QnmError):
    """Lattice quotient is not positive-real: wrong (l, k, sign) hypothesis."""

    remedy = "try other indices or run the blind hypothesis scan"


class ExcludedResonance(QnmError):
    """Input is a trivial resonance or lies on the excluded imaginary axis."""

    remedy = "recovery needs a mode with Re lambda != 0"


class NoLocalResonance(QnmError):
    """No shooting zero within the tracking radius of the seed."""

    remedy = "start from a mass closer to the truth or widen the radius"


class NonConvergence(QnmError):
    """Mass iteration failed to drive the residual below tolerance."""

    remedy = "improve m_init, loosen tol, or check the mode indices"


class DegenerateSlope(QnmError):
    """|d lambda / d m| below 1e-14: stability probe has no signal."""

    remedy = "probe a mode whose frequency actually moves with the mass"
