"""Quaternionic linear algebra, exterior algebra, invariant 4-forms on quaternionic
flag orbits, and tri-momentum maps for spheroid actions."""

from ._backend import BACKEND
from .exterior import AltForm, MultiVector, ce_differential, interior, wedge
from .orbit_forms import HermitianPoint, four_commutator, orbit_report, psi_y
from .qlinalg import HermitianQ, QMatrix, SpNElement, dieudonne_det, qr_gram_schmidt, study_determinant
from .quat import ImQuaternion, Quaternion, UnitQuaternion
from .trimomentum import GrassmannPoint, Hypersimplex, SpheroidElement, grassmann_coords, mu_standard, orbit_scan

__version__ = "0.1.0"

__all__ = [
    "BACKEND",
    "AltForm",
    "GrassmannPoint",
    "HermitianPoint",
    "HermitianQ",
    "Hypersimplex",
    "ImQuaternion",
    "MultiVector",
    "QMatrix",
    "Quaternion",
    "SpNElement",
    "SpheroidElement",
    "UnitQuaternion",
    "ce_differential",
    "dieudonne_det",
    "four_commutator",
    "grassmann_coords",
    "interior",
    "mu_standard",
    "orbit_report",
    "orbit_scan",
    "psi_y",
    "qr_gram_schmidt",
    "study_determinant",
    "wedge",
]
