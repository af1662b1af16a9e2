"""Quantum Fisher information of fermionic Gaussian states from correlation matrices."""

from .config import DEFAULT_TOL, N_MAX, Tolerances
from .errors import (
    DomainError,
    ExtremalState,
    FermiFisherError,
    KernelTangent,
    NonPdCost,
    NonPhysicalState,
    NonPhysicalTangent,
    OracleSizeError,
    SingularPair,
    SingularQfim,
)
from .gaussian import (
    CorrelationMatrix,
    GeneratorMatrix,
    gamma_from_omega,
    log_partition_function,
    omega_from_gamma,
    partition_function,
    purity,
    wick_2p,
    wick_four,
)
from .models import (
    StateFamily,
    build_family,
    family_kitaev_chain,
    family_rotation,
    family_single_mode,
    family_thermal,
    finite_diff,
)
from .skewlin import canonical_form, hermitian_eig, pfaffian, tanh_of_i_halved
from .sld import (
    QfimResult,
    SldQuadratic,
    assemble_residual,
    compatibility_check,
    cr_bound_scalar,
    qfim,
    solve_k,
    uhlmann_curvature,
)

__version__ = "0.1.0"
