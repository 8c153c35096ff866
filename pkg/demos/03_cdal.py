"""
Channel distribution and the CDAL cost
======================================

Every adjacent pair that shares channels picks one of them uniformly at
random, so each common channel receives 1/p of a link. The cost is the
population standard deviation of the per-channel expected link count.
"""

# %%
from wmnca import ChannelAssignment, ChannelSet, Node, WmnGraph, cdal_cost, estimate, generate_grid

print("std of (9, 8, 6):", round(cdal_cost([9, 8, 6]), 5))

# %%
# Two nodes, two shared channels: half a link each, perfectly even.
g = WmnGraph((Node(0, 0, 0, 2), Node(1, 200, 0, 2)))
ca = ChannelAssignment({(0, 0): 1, (0, 1): 2, (1, 0): 1, (1, 1): 2})
est = estimate(g, ca, ChannelSet((1, 2)))
print(est.to_dict())

# %%
# Everything on one channel piles all 40 pairs of a 5x5 grid onto it.
grid = generate_grid(5, 5)
flat = ChannelAssignment({r: 1 for r in grid.radios})
est = estimate(grid, flat, ChannelSet.of_size(3))
print({k: float(v) for k, v in est.distribution.link_count.items()}, round(est.cost, 4))

# %%
# Relabelling channels only permutes the distribution, so the cost is unchanged.
relabeled = flat.relabel({1: 3, 2: 1, 3: 2})
print(estimate(grid, relabeled, ChannelSet.of_size(3)).cost == est.cost)
