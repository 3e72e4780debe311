"""Energies of radial stretchings x -> rho(|x|) x / |x| on the unit ball.

Run with ``python demos/radial_stretchings.py``.
"""
# %%
import numpy as np

from semiconvexity import integrands as itg
from semiconvexity import radial as rd

# %% [markdown]
# Profiles are piecewise: linear up to a knot, then a power r^alpha.  The
# profile is non-expanding when |rho'| <= rho / r.

# %%
profiles = {a: rd.RadialProfile.thm41(a) for a in (-1.0, -0.5, 0.0, 0.5, 1.0)}
for a, rho in profiles.items():
    print(f"alpha={a:+.1f}  {rd.describe_profile(rho):<40} non-expanding: {rd.nonexpanding_check(rho).passed}")
print("r^2 non-expanding:", rd.nonexpanding_check(rd.RadialProfile.power(2.0)).passed)

# %% [markdown]
# Along non-expanding profiles the averaged B_p energy equals B_p(Id) = n/p.

# %%
for n, p in [(2, 1.5), (3, 2.0)]:
    F = itg.burkholder(p, n)
    energies = [rd.radial_energy(F, rho, n) for rho in profiles.values()]
    print(f"n={n} p={p:g}: energies", np.round(energies, 12), " n/p =", n / p)

# %% [markdown]
# The conjugated map (last coordinate reflected) gives -n/p for p >= n.

# %%
F = itg.burkholder(4.0, 2)
print("conjugate energies:", [round(rd.radial_energy(F, rho, 2, conjugate=True), 12) for rho in profiles.values()])

# %% [markdown]
# A search over the profile family never drives the energy below the value
# at the identity for B_p.  For the concave -|A|_F^2 it does.

# %%
print(rd.radial_quasiconvexity_search(itg.burkholder(1.5, 2), 2, restarts=4).details["min_gap"])
neg = itg.custom(lambda A: -np.sum(A * A, axis=(-2, -1)), 2, 2.0, label="-|A|_F^2")
print(rd.radial_quasiconvexity_search(neg, 2, restarts=2).details["min_gap"])
