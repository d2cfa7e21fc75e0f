"""
Twirling by teleportation
=========================

Teleporting through the Choi state of a channel with the one-design POVM
and undoing the correction on the output realizes the twirled channel.
"""

import numpy as np

from channel_bounds.channels import mixed_channel_np
from channel_bounds.sampling import random_density
from channel_bounds.twirl import named_rep, one_design_deviation, teleport_simulate_twirl, twirl_channel

pauli = named_rep("pauli")
print("one-design deviation, Pauli:", one_design_deviation(pauli))
print("one-design deviation, {I,X}:", one_design_deviation(named_rep("ix")))

rng = np.random.default_rng(7)
N = mixed_channel_np(0.3)
NG = twirl_channel(N, pauli)
worst = max(
    np.max(np.abs(teleport_simulate_twirl(N, pauli, rho) - NG(rho)))
    for rho in (random_density(2, rng) for _ in range(20))
)
print("teleportation vs direct twirl, worst entry:", worst)
