r"""Linear algebra for real antisymmetric matrices.

Every imaginary antisymmetric matrix :math:`M` (a correlation matrix, an SLD
kernel) is handled through its real representative :math:`A` with
:math:`M = iA`, so the routines here take and return real arrays only,
except for :func:`hermitian_eig`, whose eigenvectors are complex.

The canonical form of a real antisymmetric ``A`` is

.. math::

    A = Q^T \left(\bigoplus_k \begin{pmatrix} 0 & \Omega_k \\
        -\Omega_k & 0\end{pmatrix}\right) Q ,

with ``Q`` real orthogonal, ``Omega_k >= 0`` sorted in descending order.
"""

from dataclasses import dataclass

import numpy as np

from .config import DEFAULT_TOL


def antisymmetrize(a, name="matrix"):
    """Return ``(a - a.T) / 2`` as a float array, checking the shape.

    Raises ``ValueError`` for non-square, odd-sized, complex or non-finite
    input.
    """
    a = np.asarray(a)
    if np.iscomplexobj(a):
        raise ValueError(f"{name} must be real; pass the real representative")
    a = np.asarray(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"{name} must be square, got shape {a.shape}")
    if a.shape[0] == 0 or a.shape[0] % 2:
        raise ValueError(f"{name} must have even positive dimension, got {a.shape[0]}")
    if not np.all(np.isfinite(a)):
        raise ValueError(f"{name} has non-finite entries")
    return 0.5 * (a - a.T)


def random_antisym(dim, rng=None, scale=1.0):
    """Random real antisymmetric matrix with Gaussian entries."""
    rng = np.random.default_rng(rng)
    x = rng.normal(scale=scale, size=(dim, dim))
    return x - x.T


def block_matrix(angles):
    r"""The block-diagonal :math:`\bigoplus_k [[0, a_k], [-a_k, 0]]`."""
    angles = np.asarray(angles, dtype=float)
    n = angles.shape[0]
    out = np.zeros((2 * n, 2 * n))
    idx = np.arange(n)
    out[2 * idx, 2 * idx + 1] = angles
    out[2 * idx + 1, 2 * idx] = -angles
    return out


@dataclass(frozen=True)
class CanonicalForm:
    """Orthogonal block decomposition ``A = Q.T @ block_matrix(angles) @ Q``."""

    rotation: np.ndarray
    angles: np.ndarray

    @property
    def modes(self):
        return self.angles.shape[0]

    def reconstruct(self, angles=None):
        """Rebuild the matrix, optionally with replaced block angles."""
        if angles is None:
            angles = self.angles
        q = self.rotation
        return q.T @ _blocks_times(angles, q)

    def apply(self, func):
        """Return ``Q.T (+)_k [[0, f(a_k)], [-f(a_k), 0]] Q``.

        This is the real representative of ``f(iA)`` for any odd function
        ``f`` that is real on the reals.
        """
        return self.reconstruct(func(self.angles))


def _blocks_times(angles, q):
    # block_matrix(angles) @ q without forming the block matrix
    out = np.empty_like(q)
    out[0::2] = angles[:, None] * q[1::2]
    out[1::2] = -angles[:, None] * q[0::2]
    return out


@dataclass(frozen=True)
class HermitianEigensystem:
    """Eigen-decomposition ``iA = V diag(values) V^dagger``, values ascending."""

    vectors: np.ndarray
    values: np.ndarray

    def reconstruct(self):
        v = self.vectors
        return (v * self.values) @ v.conj().T


def hermitian_eig(a):
    """Diagonalize the Hermitian matrix ``iA`` for real antisymmetric ``A``.

    Returns
    -------
    HermitianEigensystem
        Eigenvalues are in ascending order and come in +/- pairs.  For the
        zero matrix the eigenvectors are the identity.
    """
    a = antisymmetrize(a)
    if not a.any():
        return HermitianEigensystem(np.eye(a.shape[0], dtype=complex), np.zeros(a.shape[0]))
    values, vectors = np.linalg.eigh(1j * a)
    return HermitianEigensystem(vectors, values)


def canonical_form(a):
    """Canonical block decomposition of a real antisymmetric matrix.

    The positive half of the spectrum of ``iA`` is diagonalized; each
    eigenvector ``v = x + iy`` with eigenvalue ``w > 0`` spans the rotation
    plane ``(sqrt(2) y, sqrt(2) x)`` with angle ``w``.  Conjugate partners are
    never used, so degenerate +/- pairs cannot be mismatched.  Eigenvalues
    below the noise floor form the kernel, which is completed to a real
    orthonormal basis and given zero angles.

    Parameters
    ----------
    a : (2n, 2n) array_like
        Real antisymmetric matrix.

    Returns
    -------
    CanonicalForm
        ``rotation`` Q and ``angles`` (length n, non-negative, descending).
    """
    a = antisymmetrize(a)
    dim = a.shape[0]
    n = dim // 2
    norm = np.linalg.norm(a, 2) if a.any() else 0.0
    if norm == 0.0:
        return CanonicalForm(np.eye(dim), np.zeros(n))

    values, vectors = np.linalg.eigh(1j * a)
    floor = 64 * np.finfo(float).eps * dim * norm
    positive = np.flatnonzero(values > floor)[::-1]
    # at most n planes; eigh noise may push a kernel value over the floor
    positive = positive[:n]
    p = positive.shape[0]

    q = np.empty((dim, dim))
    v = vectors[:, positive]
    # phase convention: the largest component of each v is +i|v_j|, which
    # makes Q the identity on input that is already canonical
    lead = v[np.argmax(np.abs(v) > (1 - 1e-8) * np.abs(v).max(axis=0), axis=0), np.arange(p)]
    v = v * (1j * lead.conj() / np.abs(lead))
    q[0 : 2 * p : 2] = np.sqrt(2.0) * v.imag.T
    q[1 : 2 * p : 2] = np.sqrt(2.0) * v.real.T
    angles = np.zeros(n)
    angles[:p] = values[positive]

    if p < n:
        if p == 0:
            q[:] = np.eye(dim)
        else:
            u, _, _ = np.linalg.svd(q[: 2 * p].T, full_matrices=True)
            q[2 * p :] = u[:, 2 * p :].T

    # near-degenerate eigenvalues (tiny angles next to the kernel) leave Q
    # only approximately orthogonal; snap to the nearest orthogonal matrix
    # and re-read the angles from the rotated matrix
    if np.abs(q @ q.T - np.eye(dim)).max() > 1e-13:
        u, _, vt = np.linalg.svd(q)
        q = u @ vt
        rotated = q @ a @ q.T
        angles = rotated[0::2, 1::2].diagonal().copy()
        flip = angles < 0
        q[0::2][flip], q[1::2][flip] = q[1::2][flip].copy(), q[0::2][flip].copy()
        angles = np.abs(angles)
        order = np.argsort(-angles, kind="stable")
        q = q.reshape(n, 2, dim)[order].reshape(dim, dim)
        angles = angles[order]
    return CanonicalForm(q, angles)


def tanh_of_i_halved(a):
    """Real representative ``G`` of ``tanh(iA/2) = iG``.

    Computed blockwise on the canonical form, so the eigenvalues of ``iG``
    are exactly ``+/- tanh(Omega_k/2)``.
    """
    return canonical_form(a).apply(lambda w: np.tanh(0.5 * w))


def pfaffian(a):
    """Pfaffian of a real antisymmetric matrix.

    Parlett-Reid reduction to tridiagonal form with partial pivoting, so
    ``pfaffian([[0, 1], [-1, 0]]) == 1``.  Odd dimension gives 0.  Large
    entries can overflow; no rescaling is attempted.
    """
    a = np.array(a, dtype=float)
    if a.ndim != 2 or a.shape[0] != a.shape[1]:
        raise ValueError(f"matrix must be square, got shape {a.shape}")
    a = 0.5 * (a - a.T)
    dim = a.shape[0]
    if dim % 2:
        return 0.0
    pf = 1.0
    for k in range(0, dim - 1, 2):
        kp = k + 1 + np.argmax(np.abs(a[k + 1 :, k]))
        if kp != k + 1:
            a[[k + 1, kp], :] = a[[kp, k + 1], :]
            a[:, [k + 1, kp]] = a[:, [kp, k + 1]]
            pf = -pf
        if a[k + 1, k] == 0.0:
            return 0.0
        pf *= a[k, k + 1]
        if k + 2 < dim:
            tau = a[k, k + 2 :] / a[k, k + 1]
            col = a[k + 2 :, k + 1]
            a[k + 2 :, k + 2 :] += np.outer(tau, col) - np.outer(col, tau)
    return float(pf)


def is_antisymmetric(a, atol=DEFAULT_TOL.recon):
    a = np.asarray(a)
    return a.ndim == 2 and a.shape[0] == a.shape[1] and np.allclose(a, -a.T, rtol=0, atol=atol)
