"""
Rains relative entropy and PPT relative entropy
===============================================

Both measures minimize a relative entropy over a convex set. For isotropic
two-qubit states they share the closed form ``1 - h2(F)``.
"""

import numpy as np

from channel_bounds import linalg as la
from channel_bounds.entmeasures import SubsystemCut, e_ppt, measure, rains
from channel_bounds.entropy import h2
from channel_bounds.sampling import random_density

phi = la.max_entangled(2)
for fn in (rains, e_ppt):
    res = fn(phi)
    print(f"{fn.__name__:6s} on a Bell state: {res.value:.8f}  certificate {res.certificate:.1e}")

print("\n  F     rains     e_ppt     1-h2(F)")
for F in (0.55, 0.7, 0.85, 1.0):
    tau = F * phi + (1 - F) * (np.eye(4) - phi) / 3
    print(f"{F:4.2f}  {rains(tau).value:.6f}  {e_ppt(tau).value:.6f}  {1 - h2(F):.6f}")

# a three-qubit state split as A : BC
rng = np.random.default_rng(0)
tau = 0.6 * la.proj(la.ket(8, 0) + la.ket(8, 7)) / 2 + 0.4 * random_density(8, rng)
res = measure("rains", tau, SubsystemCut([2, 2, 2], [0]))
print("\nA:BC Rains value", round(res.value, 6), "after", res.iterations, "iterations")
