"""Certificates and counterexamples for polyconvexity at a point.

Run with ``python demos/polyconvexity_witnesses.py``.
"""
# %%
import numpy as np

from semiconvexity import checks as ck
from semiconvexity import integrands as itg
from semiconvexity import matrixcore as mc

# %% [markdown]
# For p >= n, c (det^+)^{p/n} with c = B_p(Id) lies below B_p^+ and touches it at Id,
# so it certifies polyconvexity there.

# %%
scale = float(itg.evaluate(itg.burkholder(4.0, 2), np.eye(2)))
rep = ck.polyconvexity_certificate_check(
    itg.burkholder_plus(4.0, 2), np.eye(2), ck.det_plus_certificate(4.0, 2, scale), samples=20_000
)
print("certificate holds:", rep.passed, " worst:", rep.worst_residual)

# %% [markdown]
# The anisotropic F_p(A) = (ad + (b^2 + c^2)/2)^{p/2}, clipped at zero, is
# rank-one convex.  Three diagonal matrices with equal weights reproduce the
# identity and its determinant on average, while F_p vanishes on all three.
# Jensen's inequality for a polyconvex F would force F_p(Id) <= 0.

# %%
Fp = itg.fp_aniso(3)
dec = ck.diagonal_ansatz(1 / 3, 3.0)
for P in dec.points:
    print(np.diag(P), " det:", round(float(mc.det(P)), 12), " F_p:", float(itg.evaluate(Fp, P)))
print("minors residual:", np.max(np.abs(dec.minors_residual())), " Jensen gap:", dec.jensen_gap(Fp))

# %% [markdown]
# A triple such as diag(-3,-3), diag(9,-3), diag(-3,9) averages to the identity
# but not in the determinant, so it is not a valid witness.

# %%
triple = np.array(ck.STATED_TRIPLE)
print("mean det:", float(np.mean(mc.det(triple))))

# %% [markdown]
# For B_p^+ with p < 2 the search finds a minors-exact decomposition with a
# negative Jensen gap at the identity.

# %%
found = ck.polyconvexity_violation_search(itg.burkholder_plus(1.5, 2), np.eye(2))
print("weights:", found.weights, " Jensen gap:", found.jensen_gap(itg.burkholder_plus(1.5, 2)))
