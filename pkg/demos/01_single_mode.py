# %% [markdown]
# # One fermionic mode
#
# The simplest Gaussian state has a single mode with correlation
# `Gamma = i [[0, lambda], [-lambda, 0]]`.  Its quantum Fisher information is
# `1 / (1 - lambda^2)`, which diverges as the state becomes pure.

# %%
import numpy as np

from fermifisher import family_single_mode, purity, qfim
from fermifisher import oracle

family = family_single_mode()

# %% [markdown]
# Closed-form QFI next to the exact curve, across the interior of the domain.

# %%
for lam in np.linspace(-0.9, 0.9, 7):
    g = family.correlation([lam])
    res = qfim(g, family.derivatives([lam]))
    print(f"lambda={lam:+.2f}  J={res.j_matrix[0, 0]:.6f}  exact={1 / (1 - lam**2):.6f}  purity={purity(g):.4f}")

# %% [markdown]
# The same number from a brute-force density matrix: build rho, its
# derivative, and solve for the SLD spectrally.

# %%
lam = 0.5
g = family.correlation([lam])
rho, drho = oracle.dense_tangent(g, family.derivatives([lam])[0])
j_dense, _ = oracle.dense_qfi(rho, [drho])
print("dense J at lambda = 0.5:", j_dense[0, 0], "(4/3 =", 4 / 3, ")")

# %% [markdown]
# Close to the pure edge the denominators `1 - gamma_j gamma_k` are tiny
# but non-zero, so no pair is flagged as singular and the closed form keeps
# its accuracy.

# %%
edge = 1 - 1e-6
res = qfim(family.correlation([edge]), family.derivatives([edge]), policy="zero")
print("J near the edge:", res.j_matrix[0, 0], "exact:", 1 / (1 - edge**2), "singular pairs:", res.singular_pairs)
