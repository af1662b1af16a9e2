"""Numerical tolerances shared by every module.

All defaults live in one frozen record so tests and library code agree on
what "equal" means.  Pass a modified copy (``dataclasses.replace``) to any
function taking a ``tol`` argument to override.
"""

from dataclasses import dataclass


@dataclass(frozen=True)
class Tolerances:
    # orthogonality / unitarity of computed bases
    orth: float = 1e-10
    # reconstruction, relative to 1 + ||A||_F
    recon: float = 1e-10
    # +/- pairing of skew spectra
    pair: float = 1e-10
    # slack on |gamma_k| <= 1
    physical: float = 1e-12
    # omega_from_gamma refuses |gamma_k| > 1 - pure
    pure: float = 1e-12
    # |gamma_j gamma_k - 1| below this is a singular pair
    singular: float = 1e-10
    # tangent entries on singular pairs above this (times ||dG||_F) are errors
    tangent: float = 1e-8
    # J considered singular below this (times ||J||_max)
    inverse: float = 1e-12
    # dense SLD: p_a + p_b below this is kernel
    kernel: float = 1e-12
    # dense SLD: kernel entries of drho above this are errors
    kernel_tangent: float = 1e-8
    # classical FI: outcomes with p_x below this are dropped
    prob: float = 1e-14


DEFAULT_TOL = Tolerances()

#: Largest mode count the dense Fock-space oracle accepts (Hilbert dim 64).
N_MAX = 6
