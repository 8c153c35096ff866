"""
Conflict graphs and total interference degree
=============================================

Two links conflict under the conventional protocol model when they share a
channel and some pair of their endpoints is within 500 m. The enhanced
model adds radio co-location interference: links that meet at a node
through different radios conflict regardless of channel.
"""

# %%
from wmnca import ChannelAssignment, ConflictModel, Node, WmnGraph, build_mmcg, tid

# B relays between A and C on two orthogonal channels
g = WmnGraph((Node(0, 0, 0, 1), Node(1, 200, 0, 2), Node(2, 400, 0, 1)))
ca = ChannelAssignment({(0, 0): 1, (1, 0): 1, (1, 1): 2, (2, 0): 2})
for model in ConflictModel:
    cg = build_mmcg(g, ca, model)
    print(f"{model.value:13s} links={len(cg.vertices)} TID={tid(cg)}")

# %%
# On a full grid the gap between the two models grows with how many nodes
# use their radios on different channels.
from wmnca import ChannelSet, SchemeSpec, assign, generate_grid

grid = generate_grid(5, 5)
cs = ChannelSet.of_size(3)
for name in ("CEN", "BFS", "MIS", "OIS"):
    a = assign(SchemeSpec(name), grid, cs)
    tc = tid(build_mmcg(grid, a, ConflictModel.CONVENTIONAL))
    te = tid(build_mmcg(grid, a, ConflictModel.ENHANCED))
    print(f"{name:4s} TID_C={tc:4d}  TID_E={te:4d}")
