"""
Diamond distance to the twirled channel
=======================================

The mixture channel is close to its X-twirl, which is Pauli covariant and
therefore simulable by teleportation through its own Choi state. The SDP
value is bracketed by a pure-state lower bound.
"""

from channel_bounds.bounds import twirled_np
from channel_bounds.channels import mixed_channel_np
from channel_bounds.diamond import diamond_distance

print("   p    value       lower       p^2/2")
for p in (0.1, 0.3, 0.5, 0.7, 0.9):
    res = diamond_distance(mixed_channel_np(p), twirled_np(p))
    print(f"{p:4.1f}  {res.value:.8f}  {res.lower_bound:.8f}  {p * p / 2:.8f}")
