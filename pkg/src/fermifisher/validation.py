"""Randomized cross-validation of the closed-form routines against the oracle.

:func:`run_checks` draws full-rank random states with random tangents and
records, for each named check, the worst deviation seen and the instance
that produced it.  The ``check`` CLI verb is a thin wrapper around it.
"""

import itertools
from dataclasses import dataclass, field

import numpy as np
from scipy.stats import unitary_group

from . import gaussian, oracle, sampling, sld
from .config import N_MAX

#: check name -> (tolerance, description)
CHECKS = {
    "sld_residual": (1e-9, "||drho - {L, rho}/2||_F / ||drho||_F"),
    "lyapunov": (1e-10, "||Gdot - (G K G - K)||_F / (1 + ||Gdot||_F)"),
    "qfim_eigen": (1e-8, "||J - J_dense||_F / ||J_dense||_F"),
    "qfim_wick": (1e-8, "||J_wick - J_dense||_F / ||J_dense||_F"),
    "uhlmann": (1e-8, "||U - U_dense||_F / max(||U_dense||_F, ||J_dense||_F)"),
    "wick_pfaffian": (1e-10, "max |Tr(rho w_k1..w_k2p) - Pf|, p <= 3"),
    "wick_four": (1e-12, "max |Tr(rho w_j w_k w_l w_m) - four-point rule|"),
    "purity": (1e-12, "|Tr rho^2 - sqrt(det((1 + Gamma^2)/2))|"),
    "partition": (1e-10, "|Z_dense / Z - 1|"),
    "fi_saturation": (1e-6, "|FI(SLD eigenbasis) / QFI - 1|"),
    "fi_monotone": (1e-10, "max(FI(random basis) - QFI), 100 bases, n <= 3"),
}


@dataclass
class CheckOutcome:
    name: str
    tolerance: float
    worst: float = 0.0
    worst_instance: tuple = None
    samples: int = 0
    failures: list = field(default_factory=list)

    @property
    def passed(self):
        return not self.failures

    def record(self, value, instance):
        value = float(value)
        self.samples += 1
        if value > self.worst or self.worst_instance is None:
            self.worst = max(value, self.worst)
            self.worst_instance = instance
        if not value <= self.tolerance:
            self.failures.append((instance, value))


def _rel(a, b, floor=None):
    denom = np.linalg.norm(b) if floor is None else max(np.linalg.norm(b), floor)
    return np.linalg.norm(a - b) / denom


def dense_four_point(rho, n):
    """All ``Tr(rho w_j w_k w_l w_m)`` (0-based) from dense matrices."""
    w = np.array(oracle.majorana_matrices(n))
    pairs = np.einsum("jab,kbc->jkac", w, w)
    rp = np.einsum("xa,jkab->jkxb", rho, pairs)
    return np.einsum("jkab,lmba->jklm", rp, pairs)


def check_instance(g, tangents, outcomes, instance, random_bases=100, rng=None):
    """Run every check on one (state, tangents) instance."""
    rng = np.random.default_rng(rng)
    n = g.modes
    rho = oracle.dense_state(g)
    pairs = [oracle.dense_tangent(g, t) for t in tangents]
    drhos = [dr for _, dr in pairs]

    for t, dr in zip(tangents, drhos):
        s = sld.solve_k(g, t)
        ell = oracle.dense_quadratic(s.k_rep, s.eta)
        res = dr - 0.5 * (ell @ rho + rho @ ell)
        outcomes["sld_residual"].record(np.linalg.norm(res) / np.linalg.norm(dr), instance)
        lyap = sld.assemble_residual(g, t, s)
        outcomes["lyapunov"].record(lyap / (1 + np.linalg.norm(t)), instance)

    j_dense, u_dense = oracle.dense_qfi(rho, drhos)
    fast = sld.qfim(g, tangents, method="eigen")
    ref = sld.qfim(g, tangents, method="wick")
    outcomes["qfim_eigen"].record(_rel(fast.j_matrix, j_dense), instance)
    outcomes["qfim_wick"].record(_rel(ref.j_matrix, j_dense), instance)
    outcomes["uhlmann"].record(
        _rel(fast.u_matrix, u_dense, floor=np.linalg.norm(j_dense)), instance
    )

    worst = 0.0
    for p in range(1, min(3, n) + 1):
        for idx in itertools.combinations(range(1, 2 * n + 1), 2 * p):
            diff = abs(oracle.dense_correlator(rho, idx) - gaussian.wick_2p(g, idx))
            worst = max(worst, diff)
    outcomes["wick_pfaffian"].record(worst, instance)

    four = dense_four_point(rho, n)
    outcomes["wick_four"].record(np.abs(four - sld.four_point_tensor(g)).max(), instance)

    outcomes["purity"].record(abs(np.trace(rho @ rho).real - gaussian.purity(g)), instance)

    omega = gaussian.omega_from_gamma(g)
    z_dense = np.trace(oracle.dense_state_exp(omega, normalize=False)).real
    outcomes["partition"].record(abs(z_dense / gaussian.partition_function(omega) - 1), instance)

    worst_sat, worst_mono = 0.0, -np.inf
    for dr in drhos:
        ell = oracle.dense_sld(rho, dr)
        qfi = np.trace(rho @ ell @ ell).real
        _, basis = np.linalg.eigh(ell)
        fi = oracle.measurement_fi(rho, dr, basis)
        worst_sat = max(worst_sat, abs(fi / qfi - 1))
        if n <= 3 and random_bases:
            us = unitary_group.rvs(2**n, size=random_bases, random_state=rng)
            for u in np.reshape(us, (random_bases, 2**n, 2**n)):
                worst_mono = max(worst_mono, oracle.measurement_fi(rho, dr, u) - qfi)
    outcomes["fi_saturation"].record(worst_sat, instance)
    if np.isfinite(worst_mono):
        outcomes["fi_monotone"].record(max(worst_mono, 0.0), instance)


def run_checks(n, trials, seed, d=3, random_bases=100):
    """Cross-validate ``trials`` random instances with ``n`` modes.

    Instance ``i`` is drawn from ``numpy.random.default_rng([seed, i])``, so
    any failure can be replayed from the ``(seed, i)`` pair alone.

    Returns
    -------
    dict of str -> CheckOutcome
    """
    if not 1 <= n <= N_MAX:
        raise ValueError(f"modes must be in 1..{N_MAX}, got {n}")
    if trials < 1:
        raise ValueError(f"trials must be positive, got {trials}")
    outcomes = {name: CheckOutcome(name, tol) for name, (tol, _) in CHECKS.items()}
    for i in range(trials):
        rng = np.random.default_rng([seed, i])
        g = sampling.random_state(n, rng)
        tangents = sampling.random_tangents(n, d, rng)
        check_instance(g, tangents, outcomes, (seed, i), random_bases, rng)
    return outcomes
