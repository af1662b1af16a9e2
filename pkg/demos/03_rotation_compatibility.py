# %% [markdown]
# # Incompatible parameters on a rotation orbit
#
# Two modes with `gamma = (0.3, 0.7)` are rotated by two Majorana
# generators.  A non-zero mean Uhlmann curvature means the two SLDs do not
# commute on average, so the scalar Cramer-Rao bound `tr(W J^-1)` is not
# attainable jointly.

# %%
import numpy as np

from fermifisher import compatibility_check, cr_bound_scalar, family_rotation, qfim
from fermifisher.skewlin import block_matrix

g0 = block_matrix([0.3, 0.7])
x1 = np.zeros((4, 4)); x1[0, 2], x1[2, 0] = 1.0, -1.0
x2 = np.zeros((4, 4)); x2[0, 3], x2[3, 0], x2[1, 2], x2[2, 1] = 1.0, -1.0, 1.0, -1.0
family = family_rotation(g0, [x1, x2])

# %%
for point in ([0.0, 0.0], [0.2, -0.1], [0.5, 0.4]):
    res = qfim(family.correlation(point), family.derivatives(point))
    comp = compatibility_check(res)
    print("point", point)
    print("  J =", np.round(res.j_matrix, 6).tolist())
    print("  U_12 =", round(res.u_matrix[0, 1], 6), "compatible:", comp.compatible)
    print("  tr(J^-1) =", cr_bound_scalar(res, np.eye(2)))

# %% [markdown]
# A single generator, or two proportional ones, always gives `U = 0`.

# %%
res = qfim(g0, [x1 @ g0 - g0 @ x1, 2 * (x1 @ g0 - g0 @ x1)])
print("proportional tangents:", compatibility_check(res))
