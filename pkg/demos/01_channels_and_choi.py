"""
Channels, Choi states and dilations
===================================

Build the amplitude-damping/depolarizing mixture, look at its Choi state and
check that three ways of applying it agree.
"""

import numpy as np

from channel_bounds import linalg as la
from channel_bounds.channels import (
    apply_via_choi,
    choi_state,
    covariance_deviation,
    mixed_channel_np,
    stinespring,
)
from channel_bounds.sampling import random_density
from channel_bounds.twirl import named_rep

rng = np.random.default_rng(1)
N = mixed_channel_np(0.3)
print(N)

# the Choi state has reference R first and output B second
J = choi_state(N)
print("Choi spectrum:", np.round(np.linalg.eigvalsh(J), 6))

# Kraus form, Choi contraction and Stinespring isometry give the same output
rho = random_density(2, rng)
V = stinespring(N)
via_kraus = N(rho)
via_choi = apply_via_choi(J, rho, 2)
via_iso = la.partial_trace(V(rho), V.dims, [0])
print("Kraus vs Choi:", np.max(np.abs(via_kraus - via_choi)))
print("Kraus vs isometry:", np.max(np.abs(via_kraus - via_iso)))

# covariant under {I, Z}, only approximately under {I, X}
print("{I,Z} deviation:", covariance_deviation(N, list(named_rep("iz"))))
print("{I,X} deviation:", covariance_deviation(N, list(named_rep("ix"))))
