"""
The channel assignment population
=================================

Nine assignments span the range from a static round robin (CEN) to a brute
force TID minimiser (GSCA). OIS is MIS with an evenness pass on top, which
is what the CDAL cost rewards.
"""

# %%
import statistics

from wmnca import ChannelSet, ConflictModel, SchemeSpec, assign, build_mmcg, estimate, generate_grid, tid
from wmnca.schemes import standard_population

g = generate_grid(5, 5)
cs = ChannelSet.of_size(3)
for spec in standard_population(seed=0):
    ca = assign(spec, g, cs)
    print(f"{spec.label:6s} TID_C={tid(build_mmcg(g, ca)):4d} "
          f"TID_E={tid(build_mmcg(g, ca, ConflictModel.ENHANCED)):4d} "
          f"CDAL={estimate(g, ca, cs).cost:.3f}")

# %%
# Evenness of OIS against plain MIS over a handful of seeds and grid sizes.
for size in (5, 6, 7, 8):
    grid = generate_grid(size, size)
    ois = [estimate(grid, assign(SchemeSpec("OIS", seed=s), grid, cs), cs).cost for s in range(10)]
    mis = [estimate(grid, assign(SchemeSpec("MIS", seed=s), grid, cs), cs).cost for s in range(10)]
    print(f"{size}x{size}: median OIS {statistics.median(ois):.3f}  median MIS {statistics.median(mis):.3f}")
