"""Exact Witt vectors, arithmetic jet spaces and the lateral Frobenius."""

from .errors import IntegrityError, NotInImage, VerificationFailure
from .gallery import group_compat_check, kernel_ring, preset, ses_check, verify_kernel_prolongation
from .jets import AffinePresentation, ProlongSeq, delta_poly, jet_ring, phi_map, prolong_seq_make, u_map
from .lateral import (
    LateralMap,
    compare_maps,
    descend,
    fiber_ring,
    lateral_map_affine_space,
    pi_derivation_of,
    verify_lift_of_frobenius,
    verify_prop31,
    witt_frobenius_formula_map,
)
from .poly import MultiPoly, Var, parse_poly
from .rings import BaseSetup, coeff_ring_make
from .witt import WittVec, exp_delta, frobenius, ghost, teichmuller, unghost, verschiebung, witt_table

__version__ = "0.1.0"

__all__ = [
    "AffinePresentation", "BaseSetup", "IntegrityError", "LateralMap", "MultiPoly", "NotInImage",
    "ProlongSeq", "Var", "VerificationFailure", "WittVec", "coeff_ring_make", "compare_maps", "delta_poly",
    "descend", "exp_delta", "fiber_ring", "frobenius", "ghost", "group_compat_check", "jet_ring",
    "kernel_ring", "lateral_map_affine_space", "parse_poly", "phi_map", "pi_derivation_of", "preset",
    "prolong_seq_make", "ses_check", "teichmuller", "u_map", "unghost", "verify_kernel_prolongation",
    "verify_lift_of_frobenius", "verify_prop31", "verschiebung", "witt_frobenius_formula_map", "witt_table",
]
