# %% [markdown]
# # The SLD as a measurement
#
# The SLD of a Gaussian state is a quadratic form `L = 1/2 w^T K w + eta`.
# Measuring in its eigenbasis gives a classical Fisher information equal
# to the QFI, while a random projective measurement does worse.

# %%
import numpy as np
from scipy.stats import unitary_group

from fermifisher import oracle, solve_k
from fermifisher.sampling import random_state, random_tangents

rng = np.random.default_rng(7)
g = random_state(3, rng)
(gdot,) = random_tangents(3, 1, rng)

# %%
sld = solve_k(g, gdot)
print("K (real representative) has shape", sld.k_rep.shape, "and eta =", sld.eta)

rho, drho = oracle.dense_tangent(g, gdot)
ell = oracle.dense_quadratic(sld.k_rep, sld.eta)
print("SLD equation residual:", np.linalg.norm(drho - 0.5 * (ell @ rho + rho @ ell)))

# %%
qfi = np.trace(rho @ ell @ ell).real
_, eigenbasis = np.linalg.eigh(ell)
print("QFI                    ", qfi)
print("FI in the SLD eigenbasis", oracle.measurement_fi(rho, drho, eigenbasis))
random_fi = [oracle.measurement_fi(rho, drho, u) for u in unitary_group.rvs(8, size=20, random_state=rng)]
print("best of 20 random bases", max(random_fi))
