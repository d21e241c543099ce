"""Eigenvalues and eigenvectors of complex symmetric matrices.

The dense matrix is reduced to tridiagonal form with generalized Householder
reflectors and then diagonalized by implicitly shifted QL iteration with
complex orthogonal plane rotations.  All transformations preserve the
bilinear form sum_i x_i y_i rather than the Hermitian inner product.
"""

__version__ = "0.1.0"

from .errors import (
    BreakdownError,
    CSEigError,
    IsotropicBreakdown,
    NoConvergence,
    NonFiniteError,
    NotSymmetricError,
    RotationBreakdown,
)
from .indefinite import Reflector, indefinite_dot, make_reflector, pseudo_norm
from .oracle import eig_small
from .oscillator import OscillatorModel, build_hamiltonian, lowest_levels
from .tql import ConvergenceOptions, Spectrum, eigen, eigen_tridiagonal
from .tridiag import TridiagonalMatrix, tridiagonalize

__all__ = [
    "BreakdownError",
    "CSEigError",
    "ConvergenceOptions",
    "IsotropicBreakdown",
    "NoConvergence",
    "NonFiniteError",
    "NotSymmetricError",
    "OscillatorModel",
    "Reflector",
    "RotationBreakdown",
    "Spectrum",
    "TridiagonalMatrix",
    "build_hamiltonian",
    "eig_small",
    "eigen",
    "eigen_tridiagonal",
    "indefinite_dot",
    "lowest_levels",
    "make_reflector",
    "pseudo_norm",
    "tridiagonalize",
]
