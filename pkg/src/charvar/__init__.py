"""Graph coordinate systems and the canonical symplectic two-form on
SL(2,C) character varieties of compact Riemann surfaces.

The package builds embedded graphs with SL(2,C) jump matrices (admissible
pairs), evaluates the canonical two-form exactly by forward-mode directional
differentiation, and verifies at desk scale that the form has constant
coefficients in the log-coordinates attached to contour systems and trinion
decompositions.
"""

from .jets import Jet
from .mat2 import Mat2, DiagPair, shear_matrix, a_matrix, b_matrix, diag_lower, toric_conjugate
from .ribbon import AdmissiblePair, Vertex, Edge, Germ, PathSpec
from .twoform import TwoFormMatrix, PoissonMatrix, omega_eval, omega_matrix

__all__ = [
    "Jet",
    "Mat2",
    "DiagPair",
    "shear_matrix",
    "a_matrix",
    "b_matrix",
    "diag_lower",
    "toric_conjugate",
    "AdmissiblePair",
    "Vertex",
    "Edge",
    "Germ",
    "PathSpec",
    "TwoFormMatrix",
    "PoissonMatrix",
    "omega_eval",
    "omega_matrix",
]

__version__ = "0.1.0"
