r"""Fermionic Gaussian states in the Majorana picture.

A state on ``n`` modes is

.. math::

    \rho = e^{-\frac{i}{4}\omega^T \Omega \omega} / Z ,

with real antisymmetric generator :math:`\Omega`, and is fixed by its
correlation matrix :math:`\Gamma_{jk} = \frac12 \mathrm{Tr}\,\rho[\omega_j,
\omega_k] = \tanh(i\Omega/2)`.  Both matrices are stored through real
representatives: ``GeneratorMatrix.rep`` is :math:`\Omega` itself and
``CorrelationMatrix.rep`` is ``G`` with :math:`\Gamma = iG`.

Majorana indices in the correlator functions are 1-based, ``1..2n``.
"""

import json
from dataclasses import dataclass

import numpy as np

from . import skewlin
from .config import DEFAULT_TOL
from .errors import ExtremalState, NonPhysicalState


@dataclass(frozen=True)
class CorrelationMatrix:
    """Two-point correlation matrix ``Gamma = i * rep`` of a Gaussian state."""

    rep: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rep", skewlin.antisymmetrize(self.rep, "correlation matrix"))

    @property
    def modes(self):
        return self.rep.shape[0] // 2

    @property
    def gamma(self):
        """The complex Hermitian matrix Gamma."""
        return 1j * self.rep

    def eigenvalues(self):
        """Eigenvalues of Gamma, ascending; they come in +/- pairs."""
        return np.linalg.eigvalsh(self.gamma)

    def check_physical(self, slack=DEFAULT_TOL.physical):
        top = np.abs(self.eigenvalues()).max()
        if top > 1 + slack:
            raise NonPhysicalState(f"correlation matrix has |gamma| = {top!r} > 1")
        return self

    def to_json(self):
        return _dump_matrix(self.modes, self.rep)

    @classmethod
    def from_json(cls, text):
        return cls(_load_matrix(text))


@dataclass(frozen=True)
class GeneratorMatrix:
    """Real antisymmetric generator Omega of ``exp(-(i/4) w^T Omega w)``."""

    rep: np.ndarray

    def __post_init__(self):
        object.__setattr__(self, "rep", skewlin.antisymmetrize(self.rep, "generator matrix"))

    @property
    def modes(self):
        return self.rep.shape[0] // 2

    def canonical(self):
        return skewlin.canonical_form(self.rep)

    def to_json(self):
        return _dump_matrix(self.modes, self.rep)

    @classmethod
    def from_json(cls, text):
        return cls(_load_matrix(text))


def _dump_matrix(modes, rep):
    # float repr is the shortest string that round-trips exactly
    return json.dumps({"modes": int(modes), "rep": rep.tolist()})


def _load_matrix(text):
    obj = json.loads(text) if isinstance(text, str) else text
    rep = np.array(obj["rep"], dtype=float)
    if rep.shape != (2 * obj["modes"], 2 * obj["modes"]):
        raise ValueError(f"rep has shape {rep.shape}, expected {2 * obj['modes']} square")
    return rep


def as_correlation(g, check=True):
    """Coerce ``g`` to a :class:`CorrelationMatrix`.

    Real arrays are taken as the representative ``G``; complex arrays as
    Gamma itself (which must be purely imaginary).
    """
    if isinstance(g, CorrelationMatrix):
        out = g
    else:
        g = np.asarray(g)
        if np.iscomplexobj(g):
            if np.abs(g.real).max(initial=0.0) > DEFAULT_TOL.recon:
                raise ValueError("correlation matrix Gamma must be purely imaginary")
            g = g.imag
        out = CorrelationMatrix(g)
    if check:
        out.check_physical()
    return out


def as_generator(w):
    return w if isinstance(w, GeneratorMatrix) else GeneratorMatrix(w)


def gamma_from_omega(w):
    """Correlation matrix ``Gamma = tanh(i Omega / 2)``."""
    w = as_generator(w)
    return CorrelationMatrix(skewlin.tanh_of_i_halved(w.rep))


def omega_from_gamma(g, eps_pure=DEFAULT_TOL.pure):
    """Invert :func:`gamma_from_omega` blockwise with ``2 artanh``.

    Raises
    ------
    ExtremalState
        If some ``|gamma_k| > 1 - eps_pure``; such a state has no finite
        generator.
    """
    g = as_correlation(g)
    cf = skewlin.canonical_form(g.rep)
    if cf.angles.size and cf.angles.max() > 1 - eps_pure:
        raise ExtremalState(
            f"|gamma_k| = {cf.angles.max()!r} exceeds 1 - {eps_pure}; no finite generator"
        )
    return GeneratorMatrix(cf.apply(lambda x: 2 * np.arctanh(x)))


def partition_function(w):
    """``Z = prod_k 2 cosh(Omega_k / 2)``; overflows past ``|Omega_k|`` ~ 1400."""
    angles = as_generator(w).canonical().angles
    return float(np.prod(2 * np.cosh(0.5 * angles)))


def log_partition_function(w):
    """``log Z`` without overflow.

    Uses ``log(2 cosh(x/2)) = |x|/2 + log1p(exp(-|x|))``.
    """
    x = np.abs(as_generator(w).canonical().angles)
    return float(np.sum(0.5 * x + np.log1p(np.exp(-x))))


def purity(g):
    """``Tr rho^2 = sqrt(det((1 + Gamma^2) / 2))``."""
    g = as_correlation(g)
    dim = g.rep.shape[0]
    # Gamma^2 = -G^2 for Gamma = iG
    sign, logdet = np.linalg.slogdet(0.5 * (np.eye(dim) - g.rep @ g.rep))
    if sign <= 0:
        return 0.0
    return float(np.exp(0.5 * logdet))


def purity_from_spectrum(g):
    """``Tr rho^2 = prod_k (1 + gamma_k^2) / 2`` from the canonical angles."""
    angles = skewlin.canonical_form(as_correlation(g).rep).angles
    return float(np.prod(0.5 * (1 + angles**2)))


def _check_index(i, dim):
    if not 1 <= i <= dim:
        raise IndexError(f"Majorana index {i} outside 1..{dim}")
    return i - 1


def wick_four(g, j, k, l, m):
    """Four-point correlator ``Tr(rho w_j w_k w_l w_m)``.

    ``a_jk a_lm - a_jl a_km + a_jm a_kl`` with ``a = Gamma + 1``; repeated
    indices are allowed.
    """
    g = as_correlation(g, check=False)
    dim = g.rep.shape[0]
    j, k, l, m = (_check_index(i, dim) for i in (j, k, l, m))

    def a(x, y):
        return 1j * g.rep[x, y] + (x == y)

    return complex(a(j, k) * a(l, m) - a(j, l) * a(k, m) + a(j, m) * a(k, l))


def wick_2p(g, idx):
    """``Tr(rho w_{k1} ... w_{k2p})`` as the Pfaffian of a Gamma submatrix.

    ``idx`` must be strictly increasing and of even length.
    """
    g = as_correlation(g, check=False)
    idx = [int(i) for i in idx]
    if len(idx) % 2:
        raise ValueError(f"odd-length index tuple {idx}; odd correlators vanish")
    if any(b <= a for a, b in zip(idx, idx[1:])):
        raise ValueError(f"index tuple {idx} is not strictly increasing")
    if not idx:
        return 1.0 + 0j
    rows = [_check_index(i, g.rep.shape[0]) for i in idx]
    p = len(idx) // 2
    # Pf(i G) = i^p Pf(G)
    return complex(1j**p * skewlin.pfaffian(g.rep[np.ix_(rows, rows)]))
