"""
How the two estimators scale
============================

CDAL only looks at adjacent node pairs and their channel sets, while TID
has to build the conflict graph over every radio-level link pair. Timing
both on growing grids makes the difference visible.
"""

# %%
import time

from wmnca import ChannelSet, SchemeSpec, assign, build_mmcg, estimate, generate_grid, tid

cs = ChannelSet.of_size(3)
for size in (5, 10, 15, 20):
    for radios in (2, 3):
        g = generate_grid(size, size, radios_per_node=radios)
        ca = assign(SchemeSpec("CEN"), g, cs)
        t0 = time.perf_counter()
        estimate(g, ca, cs)
        t1 = time.perf_counter()
        tid(build_mmcg(g, ca))
        t2 = time.perf_counter()
        print(f"{size:2d}x{size:<2d} m={radios}: cdal {1e3 * (t1 - t0):7.2f} ms   tid {1e3 * (t2 - t1):8.2f} ms")
