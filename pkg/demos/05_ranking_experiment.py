"""
Simulated performance and estimator confidence
==============================================

Each assignment carries the 5, 8, 10 and 12 flow scenarios through the flow
level simulator. Ordering the CAs by average throughput gives the reference
sequence; ordering them by TID or CDAL cost gives the predicted ones. EIS
counts the pairs the prediction gets wrong and DoC turns it into a
percentage.
"""

# %%
from wmnca.experiment import ExperimentConfig, run_repetition

cfg = ExperimentConfig(budget=5000)
for seed in range(3):
    reports = run_repetition(cfg, seed)
    line = ", ".join(
        f"{r.estimator}={r.doc_percent:.1f}%"
        for r in reports if r.performance_metric == "avg_throughput"
    )
    print(f"seed {seed}: {line}")

# %%
# The published sequences, for comparison.
from wmnca import CaSequence, doc, eis

ref = CaSequence.from_order("CEN_C CLQ_C CEN_E CLQ_E BFS_C BFS_E MIS_C MIS_E GSCA".split())
by_tid = CaSequence.from_order("BFS_E CLQ_C MIS_E BFS_C CEN_E CEN_C CLQ_E MIS_C GSCA".split())
by_cdal = CaSequence.from_order("CEN_C CEN_E CLQ_C CLQ_E MIS_C BFS_E BFS_C MIS_E GSCA".split())
for name, s in (("TID", by_tid), ("CDAL", by_cdal)):
    e = eis(ref, s)
    print(f"{name}: EIS={e} DoC={doc(e, 9):.2f}%")
