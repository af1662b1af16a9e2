r"""Parameterized Gaussian-state families ``lambda -> (Gamma, dGamma/dlambda)``.

A :class:`StateFamily` is a plain value: a name, a mode count, parameter
names, an open domain box and two callables.  The callables evaluate real
representatives (``Gamma = i G``).  Families are built from a registry by
name plus JSON-compatible arguments (see :func:`build_family`), which is how
run configurations refer to them.

Kitaev-chain convention
-----------------------
With ``a_j = w_{2j-1} = c_j + c_j^dagger`` and
``b_j = w_{2j} = i (c_j - c_j^dagger)``, so ``c_j = (a_j - i b_j) / 2``, the
Hamiltonian

.. math::

    H = -\mu\sum_j (c_j^\dagger c_j - \tfrac12)
        - t\sum_j (c_j^\dagger c_{j+1} + h.c.)
        + \Delta\sum_j (c_j c_{j+1} + h.c.)

equals :math:`\frac{i}{4}\omega^T A\omega` with the nonzero upper entries

* ``A[a_j, b_j] = mu``
* ``A[a_j, b_{j+1}] = t - Delta``
* ``A[a_{j+1}, b_j] = t + Delta``

and the thermal state is ``exp(-beta H) / Z``, i.e. generator ``beta * A``.
``boundary="periodic"`` adds the bond between the last and first site in
this Majorana form directly (no fermion-parity-dependent sign).
"""

from dataclasses import dataclass
from typing import Callable, Optional

import numpy as np
from scipy.linalg import expm

from . import skewlin
from .errors import DomainError
from .gaussian import as_correlation


@dataclass(frozen=True)
class StateFamily:
    name: str
    modes: int
    parameter_names: tuple
    domain: tuple  # open box: one (lo, hi) per parameter
    evaluator: Callable
    analytic_derivatives: Optional[Callable] = None

    @property
    def dim(self):
        return len(self.parameter_names)

    def check_point(self, point):
        point = np.atleast_1d(np.asarray(point, dtype=float))
        if point.shape != (self.dim,):
            raise DomainError(f"{self.name}: expected {self.dim} parameters, got {point.shape[0]}")
        for x, (lo, hi), name in zip(point, self.domain, self.parameter_names):
            if not lo < x < hi:
                raise DomainError(f"{self.name}: {name} = {x!r} outside ({lo}, {hi})")
        return point

    def correlation(self, point):
        """Real representative of Gamma at ``point``."""
        return np.asarray(self.evaluator(self.check_point(point)), dtype=float)

    def derivatives(self, point, h=1e-4, richardson=True):
        """Tangents at ``point``, analytic when available."""
        point = self.check_point(point)
        if self.analytic_derivatives is not None:
            return [np.asarray(t, dtype=float) for t in self.analytic_derivatives(point)]
        return [finite_diff(self, point, mu, h, richardson) for mu in range(self.dim)]


def finite_diff(family, point, mu, h=1e-4, richardson=True):
    """Central-difference tangent along parameter ``mu``.

    Plain second-order difference, or with ``richardson`` the fourth-order
    four-point stencil.  The result is antisymmetrized exactly.
    """
    point = family.check_point(point)
    reach = 2 if richardson else 1
    step = np.zeros_like(point)
    step[mu] = h
    for s in (-reach, reach):
        family.check_point(point + s * step)

    def f(s):
        return family.evaluator(point + s * step)

    if richardson:
        out = (8 * (f(1) - f(-1)) - (f(2) - f(-2))) / (12 * h)
    else:
        out = (f(1) - f(-1)) / (2 * h)
    return 0.5 * (out - out.T)


def family_single_mode():
    """One mode with ``gamma = lambda`` in a fixed basis, ``lambda`` in (-1, 1)."""
    unit = skewlin.block_matrix([1.0])
    return StateFamily(
        name="single_mode",
        modes=1,
        parameter_names=("lambda",),
        domain=((-1.0, 1.0),),
        evaluator=lambda p: p[0] * unit,
        analytic_derivatives=lambda p: [unit.copy()],
    )


def _tanh_frechet(cf, direction):
    """Derivative of ``A -> tanh_of_i_halved(A)`` along ``direction``.

    Daleckii-Krein on the Hermitian matrix ``iA/2``, reusing the canonical
    basis: ``iA`` has eigenvalues ``+/- Omega_k`` on the vectors of each
    rotation plane.
    """
    q = cf.rotation
    # eigenvectors of iA from the planes: (q1 -+ i q2)/sqrt(2) for +/- Omega
    q1, q2 = q[0::2], q[1::2]
    v = np.concatenate([(q1 - 1j * q2), (q1 + 1j * q2)]).T / np.sqrt(2)
    lam = 0.5 * np.concatenate([cf.angles, -cf.angles])
    f = np.tanh(lam)
    a, b = lam[:, None], lam[None, :]
    diff = a - b
    close = np.abs(diff) < 1e-8
    dd = np.where(close, 1 - np.tanh(0.5 * (a + b)) ** 2, (f[:, None] - f[None, :]) / np.where(close, 1, diff))
    dbar = v.conj().T @ (0.5j * direction) @ v
    out = v @ (dd * dbar) @ v.conj().T
    # d(iG) = out
    return skewlin.antisymmetrize((-1j * out).real)


def family_thermal(a, beta_max=100.0):
    """Thermal family ``Gamma(beta) = tanh(i beta A / 2)``, ``beta > 0``.

    The derivative is diagonal in the canonical basis of ``A``: each plane
    contributes ``(A_k / 2) (1 - tanh^2(beta A_k / 2))``.
    """
    a = skewlin.antisymmetrize(a, "Hamiltonian coefficient matrix")
    cf = skewlin.canonical_form(a)

    def evaluate(p):
        return cf.apply(lambda w: np.tanh(0.5 * p[0] * w))

    def derivative(p):
        return [cf.apply(lambda w: 0.5 * w * (1 - np.tanh(0.5 * p[0] * w) ** 2))]

    return StateFamily(
        name="thermal",
        modes=a.shape[0] // 2,
        parameter_names=("beta",),
        domain=((0.0, beta_max),),
        evaluator=evaluate,
        analytic_derivatives=derivative,
    )


def family_rotation(g0, generators, bound=np.pi):
    """Orbit ``Gamma(lambda) = O Gamma_0 O^T`` with ``O = prod_mu exp(lambda_mu G_mu)``.

    Each ``lambda_mu`` ranges over ``(-bound, bound)``.  Tangents are
    analytic everywhere on the orbit; at ``lambda = 0`` they reduce to
    ``[G_mu, Gamma_0]``.
    """
    g0 = as_correlation(g0).rep
    gens = [skewlin.antisymmetrize(x, "generator") for x in generators]
    if not gens:
        raise ValueError("need at least one generator")
    for x in gens:
        if x.shape != g0.shape:
            raise ValueError(f"generator shape {x.shape} does not match state {g0.shape}")
    d = len(gens)

    def factors(p):
        return [expm(lam * x) for lam, x in zip(p, gens)]

    def product(mats):
        out = np.eye(g0.shape[0])
        for m in mats:
            out = out @ m
        return out

    def evaluate(p):
        o = product(factors(p))
        return o @ g0 @ o.T

    def derivative(p):
        fs = factors(p)
        o = product(fs)
        out = []
        for mu in range(d):
            do = product(fs[: mu + 1]) @ gens[mu] @ product(fs[mu + 1 :])
            t = do @ g0 @ o.T
            out.append(t - t.T)
        return out

    return StateFamily(
        name="rotation",
        modes=g0.shape[0] // 2,
        parameter_names=tuple(f"lambda{mu + 1}" for mu in range(d)),
        domain=((-bound, bound),) * d,
        evaluator=evaluate,
        analytic_derivatives=derivative,
    )


def kitaev_matrix(sites, mu, t, delta, boundary="open"):
    """Majorana coefficient matrix ``A`` of the Kitaev chain (``H = (i/4) w^T A w``)."""
    if sites < 2:
        raise ValueError(f"Kitaev chain needs at least 2 sites, got {sites}")
    if boundary not in ("open", "periodic"):
        raise ValueError(f"boundary must be 'open' or 'periodic', got {boundary!r}")
    a = np.zeros((2 * sites, 2 * sites))
    bonds = sites if boundary == "periodic" else sites - 1
    for j in range(sites):
        a[2 * j, 2 * j + 1] += mu
    for j in range(bonds):
        k = (j + 1) % sites
        a[2 * j, 2 * k + 1] += t - delta
        a[2 * k, 2 * j + 1] += t + delta
    return a - a.T


def family_kitaev_chain(sites, boundary="open", beta=1.0, bound=10.0):
    """Thermal Kitaev chain at inverse temperature ``beta``.

    Parameters ``(mu, t, delta)`` each range over ``(-bound, bound)``.  Since
    ``A`` is linear in the parameters, tangents are the Frechet derivative of
    ``tanh(i beta A / 2)`` along ``beta * dA/dparam``.
    """
    if sites < 2:
        raise ValueError(f"Kitaev chain needs at least 2 sites, got {sites}")
    units = [
        kitaev_matrix(sites, 1.0, 0.0, 0.0, boundary),
        kitaev_matrix(sites, 0.0, 1.0, 0.0, boundary),
        kitaev_matrix(sites, 0.0, 0.0, 1.0, boundary),
    ]

    def hamiltonian(p):
        return sum(x * u for x, u in zip(p, units))

    def evaluate(p):
        return skewlin.tanh_of_i_halved(beta * hamiltonian(p))

    def derivative(p):
        cf = skewlin.canonical_form(beta * hamiltonian(p))
        return [_tanh_frechet(cf, beta * u) for u in units]

    return StateFamily(
        name="kitaev_chain",
        modes=sites,
        parameter_names=("mu", "t", "delta"),
        domain=((-bound, bound),) * 3,
        evaluator=evaluate,
        analytic_derivatives=derivative,
    )


def _build_single_mode():
    return family_single_mode()


def _build_thermal(hamiltonian, beta_max=100.0):
    return family_thermal(np.array(hamiltonian, dtype=float), beta_max)


def _build_rotation(state, generators, bound=np.pi):
    return family_rotation(np.array(state, dtype=float), [np.array(x, dtype=float) for x in generators], bound)


def _build_kitaev(sites, boundary="open", beta=1.0, bound=10.0):
    return family_kitaev_chain(int(sites), boundary, float(beta), float(bound))


REGISTRY = {
    "single_mode": _build_single_mode,
    "thermal": _build_thermal,
    "rotation": _build_rotation,
    "kitaev_chain": _build_kitaev,
}


def build_family(name, **kwargs):
    """Construct a registered family from JSON-style keyword arguments."""
    try:
        factory = REGISTRY[name]
    except KeyError:
        raise ValueError(f"unknown family {name!r}; known: {sorted(REGISTRY)}") from None
    return factory(**kwargs)
