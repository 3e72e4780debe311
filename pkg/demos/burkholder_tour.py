"""A tour of the Burkholder integrand and the matrix quantities behind it.

Run with ``python demos/burkholder_tour.py``.
"""
# %%
import numpy as np

from semiconvexity import integrands as itg
from semiconvexity import matrixcore as mc

np.set_printoptions(precision=6, suppress=True)

# %% [markdown]
# B_p(A) = (|1 - n/p| |A|^n + det A) |A|^{p-n}, with |A| the operator norm.
# At the identity it equals n/p when p <= n.  At the reflection Id-bar it is
# negative for p >= n.

# %%
for n, p in [(2, 1.0), (2, 1.5), (2, 2.0), (3, 3.0)]:
    print(f"B_{p:g}(Id), n={n}:", float(itg.evaluate(itg.burkholder(p, n), np.eye(n))), " n/p =", n / p)
for p in (2.0, 3.0, 4.0):
    print(f"B_{p:g}(Id-bar), n=2:", float(itg.evaluate(itg.burkholder(p, 2), mc.id_bar(2))))

# %% [markdown]
# Signed singular values: ordered, the last one carries the sign of det A.

# %%
rng = np.random.default_rng(0)
A = rng.normal(size=(3, 3))
spec = mc.signed_singular_values(A)
print("A =\n", A)
print("signed singular values:", spec.lam, " det:", float(mc.det(A)), " product:", np.prod(spec.lam))

# %% [markdown]
# Conformal parts.  Their norms add up to |A|^{n/2} and the difference of
# their squares is det A.  For n = 2, B_1 = 2 |A^+|.

# %%
plus, minus, coords = mc.conformal_parts(A[:2, :2])
print("|A+| + |A-| =", float(mc.operator_norm(plus) + mc.operator_norm(minus)),
      " |A| =", float(mc.operator_norm(A[:2, :2])))
print("B_1(A) =", float(itg.evaluate(itg.burkholder(1.0, 2), A[:2, :2])), " 2|A+| =", 2 * coords.plus_norm)

# %% [markdown]
# B_p is rank-one convex for p >= n/2.  A sampled scan finds no negative
# second difference along rank-one lines; a concave control fails at once.

# %%
from semiconvexity import checks as ck

print(ck.rank_one_convexity_scan(itg.burkholder(1.5, 2), samples=20_000).to_dict()["passed"])
ctrl = itg.custom(lambda M: -M[..., 0, 0] ** 2, 2, label="-a^2")
rep = ck.rank_one_convexity_scan(ctrl, samples=1000)
print("control passed:", rep.passed, " witness:", rep.witness)
