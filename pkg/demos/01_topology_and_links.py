"""
Grid topologies, channel assignments and the link set
=====================================================

A 5x5 mesh, 200 m apart, two radios per router. Nodes within 250 m can
talk, so only horizontal and vertical neighbours are adjacent.
"""

# %%
from collections import Counter

from wmnca import ChannelAssignment, ChannelSet, adjacency, find_link_set, generate_grid

g = generate_grid(5, 5, spacing_m=200, radios_per_node=2)
adj = adjacency(g)
print(g.n, "nodes,", len(g.radios), "radios,", len(g.adjacent_pairs), "adjacent pairs")
print("degree histogram:", sorted(Counter(len(v) for v in adj.values()).items()))

# %%
# A radio-level link appears for every radio pair on the same channel
# between adjacent nodes. Give every radio r the channel r + 1:
ca = ChannelAssignment({(n, r): r + 1 for n, r in g.radios})
links = find_link_set(g, ca)
print(len(links), "links, e.g.", links[0].id)

# %%
# Putting both radios of every node on channel 1 doubles nothing at the node
# level but quadruples the radio pairings.
same = ChannelAssignment({radio: 1 for radio in g.radios})
print(len(find_link_set(g, same)), "links when every radio sits on channel 1")
print(ChannelSet.of_size(3).channels)
