"""Scattering resonances and single-mode parameter recovery.

Two solvable models: a square potential barrier on [-L, L] (resonances
in closed form up to a root search, half-width recoverable from one
resonance) and the de Sitter-Schwarzschild black hole (quasinormal
frequencies from a shooting Wronskian plus an asymptotic pseudo-pole
lattice, mass recoverable from one mode).  A generic argument-principle
zero scanner underlies both.
"""
from .barrier import (BarrierModel, ScatteringData, barrier_resonances,
                      recover_length, resonance_function, scattering_matrix)
from .errors import (BoundaryZero, BranchPointInput, DampingCapExceeded,
                     DegenerateResonance, DegenerateSlope, ExcludedResonance,
                     InadmissibleParams, InconsistentIndices,
                     MaxDepthExceeded, NoConvergence, NoLocalResonance,
                     NonConvergence, NonIntegerWinding, OutOfDomain,
                     QnmError, StiffIntegration)
from .geometry import (BlackHoleParams, HorizonData, alpha_sq, beta,
                       critical_radius, horizons, lattice_scale,
                       lattice_scale_derivative, mass_upper_bound,
                       radius_from_tortoise, rw_potential, tortoise,
                       trivial_set)
from .recovery import (BlindCandidate, RecoveryResult, ResonanceClass,
                       classify_resonance, holder_exponent,
                       recover_mass_lattice, recover_mass_lattice_blind,
                       recover_mass_numeric, stability_probe)
from .spectrum import (LatticePoint, QnmWindow, ShootingConfig,
                       damping_cap_value, lattice_point, pseudo_poles,
                       qnm_near, qnm_shooting, wronskian)
from .zscan import ComplexRect, ZeroReport, count_zeros, find_zeros, refine_zero

__version__ = "0.1.0"

__all__ = [
    "BarrierModel", "ScatteringData", "barrier_resonances",
    "recover_length", "resonance_function", "scattering_matrix",
    "BoundaryZero", "BranchPointInput", "DampingCapExceeded",
    "DegenerateResonance", "DegenerateSlope", "ExcludedResonance",
    "InadmissibleParams", "InconsistentIndices", "MaxDepthExceeded",
    "NoConvergence", "NoLocalResonance", "NonConvergence",
    "NonIntegerWinding", "OutOfDomain", "QnmError", "StiffIntegration",
    "BlackHoleParams", "HorizonData", "alpha_sq", "beta",
    "critical_radius", "horizons", "lattice_scale",
    "lattice_scale_derivative", "mass_upper_bound", "radius_from_tortoise",
    "rw_potential", "tortoise", "trivial_set",
    "BlindCandidate", "RecoveryResult", "ResonanceClass",
    "classify_resonance", "holder_exponent", "recover_mass_lattice",
    "recover_mass_lattice_blind", "recover_mass_numeric", "stability_probe",
    "LatticePoint", "QnmWindow", "ShootingConfig", "damping_cap_value",
    "lattice_point", "pseudo_poles", "qnm_near", "qnm_shooting", "wronskian",
    "ComplexRect", "ZeroReport", "count_zeros", "find_zeros", "refine_zero",
    "__version__",
]
