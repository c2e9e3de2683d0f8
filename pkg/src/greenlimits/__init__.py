"""Multipole pluricomplex Green functions and limits of their ideals."""

from .errors import (
    CertificationError,
    ConvergenceError,
    DegenerateConfigurationError,
    DomainError,
    MultipleZeroError,
    NotCertifiedError,
    RegionError,
)
from .estimators import FamilyLimit, GreenSandwich, VanishingIdeal
from .ideals import (
    IdealSpec,
    hilbert_samuel_multiplicity,
    is_complete_intersection,
    jet_membership,
    local_length,
)
from .limits import PointFamily, builtin_family, family_limit, predict_green_convergence
from .numcore import JetSubspace, MultiPoly, jet_of, subspace_gap
from .residues import PolyMap2, local_residue, map_zeros, membership_test, simple_residue_sum

__version__ = "0.1.0"

__all__ = [
    "MultiPoly", "JetSubspace", "jet_of", "subspace_gap",
    "IdealSpec", "local_length", "jet_membership", "hilbert_samuel_multiplicity",
    "is_complete_intersection",
    "PointFamily", "builtin_family", "family_limit", "predict_green_convergence",
    "PolyMap2", "map_zeros", "simple_residue_sum", "local_residue", "membership_test",
    "VanishingIdeal", "FamilyLimit", "GreenSandwich",
    "DomainError", "RegionError", "DegenerateConfigurationError", "MultipleZeroError",
    "ConvergenceError", "CertificationError", "NotCertifiedError",
]
