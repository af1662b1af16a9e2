r"""Symmetric logarithmic derivative of a Gaussian state and derived metrics.

For a Gaussian state with correlation matrix :math:`\Gamma` moving along a
tangent :math:`\dot\Gamma`, the SLD is quadratic,

.. math::

    L = \tfrac12 \omega^T K \omega + \eta ,\qquad
    \dot\Gamma = \Gamma K \Gamma - K ,\qquad \eta = \tfrac12 \mathrm{Tr}(K\Gamma),

with no linear term.  In the eigenbasis of :math:`\Gamma` the matrix
equation is diagonal: :math:`\bar K_{jk} = \bar{\dot\Gamma}_{jk} /
(\gamma_j\gamma_k - 1)`.

Two routes to the QFIM and the mean Uhlmann curvature are provided:

``"wick"``
    Expands :math:`\mathrm{Tr}\,\rho L_\mu L_\nu` with the four-point Wick
    rule over all index quadruples.  O(n^4) memory; kept as the reference.
``"eigen"``
    The same contraction collapsed in the eigenbasis of :math:`\Gamma`:
    :math:`J_{\mu\nu} = \frac12 \sum_{jk} \bar K^\mu_{jk} \bar K^\nu_{kj}
    (1 - \gamma_j\gamma_k)` and :math:`U_{\mu\nu} = \frac{i}{4}\sum_{jk}
    (\gamma_j - \gamma_k) \bar K^\mu_{jk} \bar K^\nu_{kj}`.  O(n^3); checked
    against the dense oracle in the test suite.

Matrices are passed as real representatives throughout (``Gamma = i G``,
``Gamma_dot = i Gdot``, ``K = i K_rep``).
"""

import json
from dataclasses import dataclass, field

import numpy as np

from . import skewlin
from .config import DEFAULT_TOL
from .errors import NonPdCost, NonPhysicalTangent, SingularPair, SingularQfim
from .gaussian import as_correlation


@dataclass(frozen=True)
class SldQuadratic:
    """``L = 1/2 w^T K w + eta`` with ``K = i * k_rep``.

    ``singular_pairs`` counts eigen-entries zeroed as removable
    singularities.
    """

    k_rep: np.ndarray
    eta: float
    singular_pairs: int = 0

    @property
    def modes(self):
        return self.k_rep.shape[0] // 2

    @property
    def kmatrix(self):
        return 1j * self.k_rep

    def to_dict(self):
        return {
            "modes": self.modes,
            "k_rep": self.k_rep.tolist(),
            "eta": float(self.eta),
            "singular_pairs": int(self.singular_pairs),
        }

    @classmethod
    def from_dict(cls, obj):
        return cls(np.array(obj["k_rep"], dtype=float), float(obj["eta"]), int(obj.get("singular_pairs", 0)))


@dataclass(frozen=True)
class QfimResult:
    """QFIM ``j_matrix`` and mean Uhlmann curvature ``u_matrix``.

    ``slds`` holds the per-parameter quadratic SLDs; ``singular_pairs`` and
    ``residuals`` are the per-parameter solver diagnostics.
    """

    j_matrix: np.ndarray
    u_matrix: np.ndarray
    slds: tuple = field(default=())
    singular_pairs: tuple = field(default=())
    residuals: tuple = field(default=())

    @property
    def dim(self):
        return self.j_matrix.shape[0]

    def to_dict(self):
        return {
            "dim": self.dim,
            "j_matrix": self.j_matrix.tolist(),
            "u_matrix": self.u_matrix.tolist(),
            "singular_pairs": [int(s) for s in self.singular_pairs],
            "residuals": [float(r) for r in self.residuals],
        }

    def to_json(self):
        return json.dumps(self.to_dict())


@dataclass(frozen=True)
class Compatibility:
    compatible: bool
    max_abs_u: float
    pair: tuple = None


def _as_tangent(gdot, dim):
    gdot = np.asarray(gdot)
    if np.iscomplexobj(gdot):
        if np.abs(gdot.real).max(initial=0.0) > DEFAULT_TOL.recon:
            raise NonPhysicalTangent("tangent Gamma_dot must be purely imaginary")
        gdot = gdot.imag
    if gdot.shape != (dim, dim):
        raise NonPhysicalTangent(f"tangent has shape {gdot.shape}, expected {(dim, dim)}")
    if not np.all(np.isfinite(gdot)):
        raise NonPhysicalTangent("tangent has non-finite entries")
    scale = 1 + np.abs(gdot).max()
    if np.abs(gdot + gdot.T).max() > DEFAULT_TOL.recon * scale:
        raise NonPhysicalTangent("tangent is not antisymmetric")
    return 0.5 * (gdot - gdot.T)


def _solve_eigenbasis(eig, gdot, policy, tol):
    """Eigenbasis SLD kernel; returns (kbar, dbar, nonsingular mask, count)."""
    if policy not in ("zero", "strict"):
        raise ValueError(f"unknown singular-pair policy {policy!r}")
    v, lam = eig.vectors, eig.values
    dbar = v.conj().T @ (1j * gdot) @ v
    denom = lam[:, None] * lam[None, :] - 1
    singular = np.abs(denom) < tol.singular
    count = 0
    if singular.any():
        mags = np.abs(np.where(singular, dbar, 0))
        j, k = np.unravel_index(np.argmax(mags), mags.shape)
        worst = mags[j, k]
        limit = tol.tangent * np.linalg.norm(gdot)
        if policy == "strict" or worst > limit:
            raise SingularPair(
                f"tangent entry {worst!r} on eigenpair ({j}, {k}) with gamma_j gamma_k = 1",
                pair=(int(j), int(k)),
                magnitude=float(worst),
            )
        count = int(singular.sum())
    kbar = np.where(singular, 0.0, dbar / np.where(singular, 1.0, denom))
    return kbar, dbar, ~singular, count


def _from_eigenbasis(eig, kbar):
    v = eig.vectors
    k = v @ kbar @ v.conj().T
    # K = i K_rep
    return skewlin.antisymmetrize((-1j * k).real)


def solve_k(g, gdot, policy="zero", tol=DEFAULT_TOL):
    """Quadratic SLD for the tangent ``gdot`` at the state ``g``.

    Parameters
    ----------
    g : CorrelationMatrix or array_like
        The state, as a real representative or complex Gamma.
    gdot : array_like
        Derivative of the same representative along one parameter.
    policy : {"zero", "strict"}
        Handling of eigenpairs with ``|gamma_j gamma_k - 1| < tol.singular``.
        ``"zero"`` drops them when the tangent has no weight there (a
        removable singularity) and raises otherwise; ``"strict"`` always
        raises.

    Returns
    -------
    SldQuadratic

    Raises
    ------
    SingularPair
        The tangent leaves the physical manifold at an extremal point.
    NonPhysicalTangent
        ``gdot`` is not an antisymmetric matrix of the right shape.
    """
    g = as_correlation(g)
    gdot = _as_tangent(gdot, g.rep.shape[0])
    eig = skewlin.hermitian_eig(g.rep)
    kbar, _, _, count = _solve_eigenbasis(eig, gdot, policy, tol)
    k_rep = _from_eigenbasis(eig, kbar)
    # eta = 1/2 Tr(K Gamma) = -1/2 Tr(K_rep G)
    eta = -0.5 * float(np.sum(k_rep * g.rep.T))
    return SldQuadratic(k_rep, eta, count)


def solve_k_direct(g, gdot):
    """Solve ``Gamma K Gamma - K = Gamma_dot`` as a dense linear system.

    Vectorizes the adjoint action, ``(Gamma (x) Gamma - 1) vec K = vec
    Gamma_dot``, which involves ``(2n)**4`` unknowns-squared; for small
    full-rank states only.  Shares nothing with :func:`solve_k` beyond the
    input, so the two cross-check each other.
    """
    g = as_correlation(g)
    dim = g.rep.shape[0]
    gdot = _as_tangent(gdot, dim)
    gamma = 1j * g.rep
    # row-major vec: vec(A X B) = (A (x) B^T) vec X, and Gamma^T = -Gamma
    op = np.kron(gamma, gamma.T) - np.eye(dim * dim)
    k = np.linalg.solve(op, (1j * gdot).ravel()).reshape(dim, dim)
    k_rep = skewlin.antisymmetrize((-1j * k).real)
    eta = -0.5 * float(np.sum(k_rep * g.rep.T))
    return SldQuadratic(k_rep, eta)


def assemble_residual(g, gdot, sld, tol=DEFAULT_TOL):
    """``|| Gamma_dot - (Gamma K Gamma - K) ||_F`` on the non-singular pairs."""
    g = as_correlation(g)
    gdot = _as_tangent(gdot, g.rep.shape[0])
    eig = skewlin.hermitian_eig(g.rep)
    v, lam = eig.vectors, eig.values
    dbar = v.conj().T @ (1j * gdot) @ v
    kbar = v.conj().T @ (1j * np.asarray(sld.k_rep)) @ v
    denom = lam[:, None] * lam[None, :] - 1
    res = dbar - denom * kbar
    res[np.abs(denom) < tol.singular] = 0
    return float(np.linalg.norm(res))


def four_point_tensor(g):
    """``T_abcd = Tr(rho w_a w_b w_c w_d)`` for all index quadruples (0-based).

    ``a_ab a_cd - a_ac a_bd + a_ad a_bc`` with ``a = Gamma + 1``.
    """
    g = as_correlation(g, check=False)
    a = 1j * g.rep + np.eye(g.rep.shape[0])
    return (
        np.einsum("ab,cd->abcd", a, a)
        - np.einsum("ac,bd->abcd", a, a)
        + np.einsum("ad,bc->abcd", a, a)
    )


def _second_moments_wick(g, slds):
    """``P_mn = Tr(rho L_m L_n)`` by direct Wick expansion."""
    t = four_point_tensor(g)
    a = 1j * g.rep + np.eye(g.rep.shape[0])
    ks = [1j * s.k_rep for s in slds]
    etas = [s.eta for s in slds]
    # <1/2 w^T K w> = 1/2 sum_ab K_ab a_ab
    firsts = [0.5 * np.sum(k * a) for k in ks]
    d = len(slds)
    p = np.empty((d, d), dtype=complex)
    for m in range(d):
        for n in range(d):
            quartic = 0.25 * np.einsum("ab,abcd,cd->", ks[m], t, ks[n])
            p[m, n] = quartic + etas[m] * firsts[n] + etas[n] * firsts[m] + etas[m] * etas[n]
    return p


def qfim(g, gdots, method="eigen", policy="zero", tol=DEFAULT_TOL):
    """Quantum Fisher information matrix and mean Uhlmann curvature.

    Parameters
    ----------
    g : CorrelationMatrix or array_like
        The state.
    gdots : sequence of array_like
        One tangent per parameter, in parameter order.
    method : {"eigen", "wick"}
        Evaluation route; see the module docstring.
    policy : {"zero", "strict"}
        Singular-pair handling passed to :func:`solve_k`.

    Returns
    -------
    QfimResult
    """
    g = as_correlation(g)
    dim = g.rep.shape[0]
    gdots = [_as_tangent(t, dim) for t in gdots]
    if not gdots:
        raise ValueError("need at least one tangent")
    eig = skewlin.hermitian_eig(g.rep)
    lam = eig.values

    kbars, slds, counts, residuals = [], [], [], []
    for gdot in gdots:
        kbar, dbar, mask, count = _solve_eigenbasis(eig, gdot, policy, tol)
        k_rep = _from_eigenbasis(eig, kbar)
        eta = -0.5 * float(np.sum(k_rep * g.rep.T))
        slds.append(SldQuadratic(k_rep, eta, count))
        kbars.append(kbar)
        counts.append(count)
        denom = lam[:, None] * lam[None, :] - 1
        residuals.append(float(np.linalg.norm(np.where(mask, dbar - denom * kbar, 0))))

    if method == "eigen":
        weight_j = 1 - lam[:, None] * lam[None, :]
        weight_u = lam[:, None] - lam[None, :]
        d = len(kbars)
        j = np.empty((d, d))
        u = np.zeros((d, d))
        for m in range(d):
            for n in range(m, d):
                # sum_jk A_jk B_kj w_jk = sum(A * B.T * w)
                cross = kbars[m] * kbars[n].T
                j[m, n] = j[n, m] = 0.5 * np.sum(cross * weight_j).real
                if n > m:
                    val = (0.25j * np.sum(cross * weight_u)).real
                    u[m, n], u[n, m] = val, -val
    elif method == "wick":
        p = _second_moments_wick(g, slds)
        j = 0.5 * (p + p.T).real
        u = (-0.25j * (p - p.T)).real
        u = 0.5 * (u - u.T)
        np.fill_diagonal(u, 0.0)
    else:
        raise ValueError(f"unknown method {method!r}")

    return QfimResult(j, u, tuple(slds), tuple(counts), tuple(residuals))


def uhlmann_curvature(g, gdots, method="eigen", policy="zero", tol=DEFAULT_TOL):
    """Mean Uhlmann curvature ``U_mn = -(i/4) Tr rho [L_m, L_n]``."""
    return qfim(g, gdots, method=method, policy=policy, tol=tol).u_matrix


def compatibility_check(result, tol=1e-10):
    """Whether ``max |U_mn| <= tol * (1 + max |J_mn|)``.

    Returns a :class:`Compatibility` carrying ``max |U|`` and, when the check
    fails, the offending parameter pair (0-based, ``m < n``).
    """
    u = np.abs(result.u_matrix)
    worst = float(u.max(initial=0.0))
    scale = 1 + float(np.abs(result.j_matrix).max(initial=0.0))
    if worst <= tol * scale:
        return Compatibility(True, worst)
    m, n = np.unravel_index(np.argmax(np.triu(u, 1)), u.shape)
    return Compatibility(False, worst, (int(m), int(n)))


def cr_bound_scalar(result, cost, tol=DEFAULT_TOL):
    """Scalar quantum Cramer-Rao bound ``tr(W J^-1)``.

    ``result`` may be a :class:`QfimResult` or a bare QFIM array.

    Raises
    ------
    NonPdCost
        ``cost`` is not symmetric positive definite.
    SingularQfim
        ``J`` has an eigenvalue below ``tol.inverse * max |J_mn|``.
    """
    j = result.j_matrix if isinstance(result, QfimResult) else np.asarray(result, dtype=float)
    w = np.atleast_2d(np.asarray(cost, dtype=float))
    if w.shape != j.shape:
        raise NonPdCost(f"cost matrix has shape {w.shape}, QFIM has {j.shape}")
    if not np.allclose(w, w.T, rtol=0, atol=1e-12 * (1 + np.abs(w).max())):
        raise NonPdCost("cost matrix is not symmetric")
    try:
        np.linalg.cholesky(w)
    except np.linalg.LinAlgError:
        raise NonPdCost("cost matrix is not positive definite") from None
    scale = np.abs(j).max(initial=0.0)
    if scale == 0 or np.linalg.eigvalsh(j).min() <= tol.inverse * scale:
        raise SingularQfim("QFIM is singular; some parameter combination is unidentifiable")
    return float(np.trace(w @ np.linalg.inv(j)))
