"""Dense Fock-space brute force for small mode counts.

Everything here works with explicit ``2**n x 2**n`` matrices and is meant as
ground truth for the closed-form routines, never as a production path.

Jordan-Wigner convention: mode ``j`` occupies tensor slot ``j`` (slot 1 is
the most significant), with Pauli-Z strings on the slots to its left, and

    w_{2j-1} = Z ... Z X 1 ... 1,    w_{2j} = Z ... Z Y 1 ... 1.
"""

from functools import lru_cache

import numpy as np

from . import skewlin
from .config import DEFAULT_TOL, N_MAX
from .errors import KernelTangent, OracleSizeError
from .gaussian import as_correlation, as_generator

_I2 = np.eye(2, dtype=complex)
_X = np.array([[0, 1], [1, 0]], dtype=complex)
_Y = np.array([[0, -1j], [1j, 0]], dtype=complex)
_Z = np.array([[1, 0], [0, -1]], dtype=complex)


def _guard(n, n_max=N_MAX):
    if not 1 <= n <= n_max:
        raise OracleSizeError(f"dense oracle supports 1..{n_max} modes, got {n}")


@lru_cache(maxsize=None)
def _majoranas(n):
    ops = []
    for j in range(n):
        for pauli in (_X, _Y):
            factors = [_Z] * j + [pauli] + [_I2] * (n - j - 1)
            m = factors[0]
            for f in factors[1:]:
                m = np.kron(m, f)
            m.setflags(write=False)
            ops.append(m)
    return tuple(ops)


def majorana_matrices(n, n_max=N_MAX):
    """The ``2n`` Majorana operators as dense ``2**n`` square matrices.

    Entries are exactly 0, +-1 or +-1j, so ``{w_j, w_k} = 2 delta_jk`` holds
    with no rounding.  The returned arrays are read-only and cached.
    """
    _guard(n, n_max)
    return list(_majoranas(n))


def quadratic_form(a, n=None):
    """Dense ``sum_jk a_jk w_j w_k`` for a (possibly complex) 2n x 2n matrix."""
    a = np.asarray(a)
    n = a.shape[0] // 2 if n is None else n
    w = np.array(majorana_matrices(n))
    return np.einsum("jk,jab,kbc->ac", a, w, w, optimize=True)


def dense_quadratic(k_rep, eta):
    """Dense ``L = 1/2 w^T K w + eta`` with ``K = i * k_rep``."""
    k_rep = np.asarray(k_rep, dtype=float)
    n = k_rep.shape[0] // 2
    return 0.5j * quadratic_form(k_rep, n) + eta * np.eye(2**n)


def dense_state(g):
    """Dense rho from a correlation matrix via the eigenmode product form.

    ``rho = prod_k (1 - i gamma_k z_{2k-1} z_{2k}) / 2`` with ``z = Q w``,
    taking ``(Q, gamma_k)`` from the canonical form of ``G``.  Works for
    pure modes (``|gamma_k| = 1``) as well.
    """
    g = as_correlation(g)
    n = g.modes
    _guard(n)
    cf = skewlin.canonical_form(g.rep)
    w = np.array(majorana_matrices(n))
    z = np.einsum("ab,bxy->axy", cf.rotation.astype(complex), w)
    rho = np.eye(2**n, dtype=complex)
    for k, gam in enumerate(cf.angles):
        factor = 0.5 * (np.eye(2**n) - 1j * gam * (z[2 * k] @ z[2 * k + 1]))
        rho = rho @ factor
    return 0.5 * (rho + rho.conj().T)


def _eigh_hamiltonian(omega):
    n = omega.shape[0] // 2
    _guard(n)
    # H = (i/4) w^T Omega w is Hermitian; rho = exp(-H) / Z
    h = 0.25j * quadratic_form(omega, n)
    return np.linalg.eigh(0.5 * (h + h.conj().T)), h


def dense_state_exp(w, normalize=True):
    """Dense ``exp(-(i/4) w^T Omega w)``, divided by its trace by default."""
    w = as_generator(w)
    (e, v), _ = _eigh_hamiltonian(w.rep)
    if normalize:
        p = np.exp(-(e - e.min()))
        p /= p.sum()
    else:
        p = np.exp(-e)
    return (v * p) @ v.conj().T


def _divided_artanh2(a, b):
    # divided difference of x -> 2 artanh(x) on [-1, 1]
    u = (a - b) / (1 - a * b)
    small = np.abs(u) < 1e-4
    us = np.where(small, 0.5, u)
    ratio = np.where(small, 1 + u**2 / 3 + u**4 / 5, np.arctanh(us) / us)
    return 2 * ratio / (1 - a * b)


def _divided_exp(e):
    # divided difference of x -> exp(-x) on the spectrum e (already shifted)
    a = e[:, None]
    b = e[None, :]
    d = a - b
    small = np.abs(d) < 1e-12
    ds = np.where(small, 1.0, d)
    return np.where(small, -np.exp(-0.5 * (a + b)), np.exp(-b) * np.expm1(-ds) / ds)


def generator_tangent(g, gdot):
    """Derivative of ``Omega = 2 artanh(Gamma)`` along ``gdot`` (real reps).

    Daleckii-Krein formula in the eigenbasis of Gamma; requires a full-rank
    state.
    """
    g = as_correlation(g)
    gdot = skewlin.antisymmetrize(gdot, "tangent")
    eig = skewlin.hermitian_eig(g.rep)
    v, lam = eig.vectors, eig.values
    dbar = v.conj().T @ (1j * gdot) @ v
    domega = v @ (_divided_artanh2(lam[:, None], lam[None, :]) * dbar) @ v.conj().T
    # i Omega = 2 artanh(Gamma), so Omega_dot = -i * d(i Omega)
    return (-1j * domega).real


def dense_tangent(g, gdot):
    """Dense ``(rho, drho)`` for a full-rank state moving along ``gdot``.

    The path is ``Gamma(t) = Gamma + t * Gamma_dot``; ``drho`` is obtained
    analytically through the generator picture, with no finite differences.
    """
    g = as_correlation(g)
    eig = skewlin.canonical_form(g.rep)
    if eig.angles.size and eig.angles.max() >= 1:
        raise ValueError("dense_tangent needs a full-rank state")
    omega = eig.apply(lambda x: 2 * np.arctanh(x))
    domega = generator_tangent(g, gdot)
    (e, v), _ = _eigh_hamiltonian(omega)
    e = e - e.min()
    n = g.modes
    hdot = 0.25j * quadratic_form(domega, n)
    hbar = v.conj().T @ hdot @ v
    p = np.exp(-e)
    z = p.sum()
    # d exp(-H) = V (f[e_a, e_b] * (V^+ H_dot V)) V^+ with f(x) = exp(-x)
    dexp_bar = _divided_exp(e) * hbar
    dz = np.trace(dexp_bar).real
    drho_bar = dexp_bar / z - np.diag(p / z) * (dz / z)
    rho = (v * (p / z)) @ v.conj().T
    drho = v @ drho_bar @ v.conj().T
    return _herm(rho), _herm(drho)


def _herm(m):
    return 0.5 * (m + m.conj().T)


def dense_correlation(rho):
    """Real representative of ``Gamma_jk = 1/2 Tr rho [w_j, w_k]``."""
    n = int(round(np.log2(rho.shape[0])))
    w = np.array(majorana_matrices(n))
    rw = np.einsum("ab,jbc->jac", rho, w)
    # Tr(rho w_j w_k) for all pairs
    two = np.einsum("jab,kba->jk", rw, w)
    gamma = 0.5 * (two - two.T)
    return gamma.imag


def dense_correlator(rho, idx):
    """``Tr(rho w_{k1} w_{k2} ...)`` for 1-based indices (any order, repeats ok)."""
    n = int(round(np.log2(rho.shape[0])))
    w = majorana_matrices(n)
    m = rho
    for i in idx:
        m = m @ w[i - 1]
    return complex(np.trace(m))


def dense_sld(rho, drho, tol=DEFAULT_TOL, strict=False):
    """Spectral solution of ``drho = (L rho + rho L) / 2``.

    In the eigenbasis of rho, ``L_ab = 2 drho_ab / (p_a + p_b)``; entries with
    ``p_a + p_b <= tol.kernel`` are set to zero.

    Raises
    ------
    KernelTangent
        If a zeroed entry of ``drho`` exceeds ``tol.kernel_tangent``, or, with
        ``strict=True``, if any entry is zeroed at all.
    """
    p, u = np.linalg.eigh(_herm(rho))
    d = u.conj().T @ drho @ u
    denom = p[:, None] + p[None, :]
    kernel = denom <= tol.kernel
    if kernel.any():
        worst = np.abs(d[kernel]).max()
        if strict or worst > tol.kernel_tangent:
            raise KernelTangent(f"drho has weight {worst!r} outside the support of rho")
    lbar = np.where(kernel, 0.0, 2 * d / np.where(kernel, 1.0, denom))
    return _herm(u @ lbar @ u.conj().T)


def dense_qfi(rho, drhos, tol=DEFAULT_TOL):
    """Dense QFIM and mean Uhlmann curvature.

    Returns
    -------
    j, u : (d, d) ndarray
        ``J_mn = 1/2 Tr rho {L_m, L_n}`` and ``U_mn = -(i/4) Tr rho [L_m, L_n]``.
    """
    sld = [dense_sld(rho, dr, tol) for dr in drhos]
    d = len(sld)
    prod = np.empty((d, d), dtype=complex)
    for m in range(d):
        rl = rho @ sld[m]
        for n in range(d):
            # Tr(rho L_m L_n) computed as sum((rho L_m) * L_n^T)
            prod[m, n] = np.sum(rl * sld[n].T)
    j = 0.5 * (prod + prod.T).real
    u = (-0.25j * (prod - prod.T)).real
    return j, u


def measurement_fi(rho, drho, basis, tol=DEFAULT_TOL):
    """Classical Fisher information of a projective measurement.

    ``basis`` holds the measurement vectors as columns.  Outcomes with
    ``p_x <= tol.prob`` are skipped.
    """
    basis = np.asarray(basis)
    p = np.einsum("ax,ab,bx->x", basis.conj(), rho, basis).real
    dp = np.einsum("ax,ab,bx->x", basis.conj(), drho, basis).real
    keep = p > tol.prob
    return float(np.sum(dp[keep] ** 2 / p[keep]))
