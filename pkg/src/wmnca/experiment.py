"""End-to-end ranking experiment: assign, estimate, simulate, evaluate.

Every writer emits rows in canonical sorted order so that a fixed
configuration reproduces byte-identical files.
"""

from __future__ import annotations

import csv
import json
import statistics
from concurrent.futures import ProcessPoolExecutor
from dataclasses import asdict, dataclass
from pathlib import Path

from . import cdal
from .conflict import ConflictModel, build_mmcg, tid
from .evaluation import Direction, RankingReport, evaluate, rank, write_discordant_json, write_report_csv
from .flowsim import SCENARIO_SIZES, grid_flow_scenario, read_results_csv, simulate, write_results_csv
from .schemes import assign, standard_population
from .topology import ChannelAssignment, ChannelSet, WmnGraph, generate_grid, save_assignment, save_topology

METRIC_COLUMNS = ["ca_label", "tid_c", "tid_e", "cdal_cost", "cdal_rule"]
NON_ESTIMATOR_COLUMNS = {"ca_label", "cdal_rule"}

PERFORMANCE_METRICS = {
    "avg_throughput": ("aggregate_throughput_mbps", Direction.HIGHER_IS_BETTER),
    "avg_plr": ("plr_proxy", Direction.LOWER_IS_BETTER),
}


class InconsistentInputs(ValueError):
    """Metrics and simulation inputs do not describe the same CA population."""


@dataclass(frozen=True)
class ExperimentConfig:
    rows: int = 5
    cols: int = 5
    spacing_m: float = 200.0
    radios: int = 2
    channels: int = 3
    tx_range_m: float = 250.0
    if_range_m: float = 500.0
    seeds: tuple[int, ...] = tuple(range(10))
    scenarios: tuple[int, ...] = SCENARIO_SIZES
    sim_model: str = "e"
    budget: int = 20000
    cdal_rule: str = cdal.UNIFORM
    tie_policy: str = "half"
    gsca_objective: str = "tid"

    def graph(self) -> WmnGraph:
        return generate_grid(self.rows, self.cols, self.spacing_m, self.radios,
                             self.tx_range_m, self.if_range_m)

    def channel_set(self) -> ChannelSet:
        return ChannelSet.of_size(self.channels)


def build_population(g, cs, seed, budget=20000, gsca_objective="tid") -> dict[str, ChannelAssignment]:
    return {spec.label: assign(spec, g, cs) for spec in standard_population(seed, budget, gsca_objective)}


def metric_rows(g: WmnGraph, cas: dict[str, ChannelAssignment], cs: ChannelSet,
                rule: str = cdal.UNIFORM) -> list[dict]:
    rows = []
    for label in sorted(cas):
        ca = cas[label]
        rows.append({
            "ca_label": label,
            "tid_c": tid(build_mmcg(g, ca, ConflictModel.CONVENTIONAL)),
            "tid_e": tid(build_mmcg(g, ca, ConflictModel.ENHANCED)),
            "cdal_cost": cdal.estimate(g, ca, cs, rule=rule).cost,
            "cdal_rule": rule,
        })
    return rows


def write_metrics_csv(rows: list[dict], path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.DictWriter(fh, fieldnames=METRIC_COLUMNS)
        w.writeheader()
        for row in sorted(rows, key=lambda r: r["ca_label"]):
            w.writerow(row)


def read_metrics_csv(path) -> dict[str, dict[str, float]]:
    """``{estimator: {ca_label: value}}`` for every numeric estimator column."""
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        if not reader.fieldnames or "ca_label" not in reader.fieldnames:
            raise ValueError("metrics CSV needs a ca_label column")
        estimators = [c for c in reader.fieldnames if c not in NON_ESTIMATOR_COLUMNS]
        if not estimators:
            raise ValueError("metrics CSV has no estimator columns")
        out: dict[str, dict[str, float]] = {e: {} for e in estimators}
        seen = set()
        for row in reader:
            label = row["ca_label"]
            if label in seen:
                raise ValueError(f"duplicate CA label {label!r}")
            seen.add(label)
            for e in estimators:
                out[e][label] = float(row[e])
    return out


def simulate_population(g, cas, scenarios, model) -> list[tuple]:
    rows = []
    for label in sorted(cas):
        for k in scenarios:
            spec = grid_flow_scenario_for(g, k)
            rows.append((label, k, simulate(g, cas[label], spec, model)))
    return rows


def grid_flow_scenario_for(g: WmnGraph, k: int):
    rows = len({nd.y for nd in g.nodes})
    cols = len({nd.x for nd in g.nodes})
    if rows * cols != g.n:
        raise ValueError("flow scenarios need a rectangular grid topology")
    return grid_flow_scenario(rows, cols, k)


def average_performance(sim_rows: list[dict]) -> dict[str, dict[str, float]]:
    """Mean over scenarios per CA, for each performance metric."""
    out = {}
    for name, (column, _) in PERFORMANCE_METRICS.items():
        per_ca: dict[str, list[float]] = {}
        for row in sim_rows:
            per_ca.setdefault(row["ca_label"], []).append(row[column])
        out[name] = {lab: statistics.fmean(v) for lab, v in sorted(per_ca.items())}
    return out


def evaluate_estimators(estimates: dict[str, dict[str, float]], performance: dict[str, dict[str, float]],
                        tie_policy: str = "half") -> list[RankingReport]:
    reports = []
    for pname, values in sorted(performance.items()):
        labels = set(values)
        if len(labels) < 2:
            raise InconsistentInputs("need >= 2 CAs")
        reference = rank(values, PERFORMANCE_METRICS[pname][1])
        for ename, est in sorted(estimates.items()):
            if set(est) != labels:
                diff = sorted(set(est) ^ labels)
                raise InconsistentInputs(f"CA labels differ between metrics and simulation: {diff}")
            predicted = rank(est, Direction.LOWER_IS_BETTER)
            reports.append(evaluate(reference, predicted, ename, pname, tie_policy))
    return reports


PLOT_STUB = '''"""Scatter each estimator against each observed metric (matplotlib)."""
import csv
import glob

import matplotlib.pyplot as plt

for path in sorted(glob.glob("plot_*.csv")):
    with open(path) as fh:
        rows = list(csv.DictReader(fh))
    fig, ax = plt.subplots()
    xs = [float(r["estimate"]) for r in rows]
    ys = [float(r["performance"]) for r in rows]
    ax.scatter(xs, ys)
    for r, x, y in zip(rows, xs, ys):
        ax.annotate(r["ca_label"], (x, y))
    ax.set_xlabel("estimate")
    ax.set_ylabel("performance")
    ax.set_title(path[5:-4])
    fig.savefig(path[:-4] + ".png", dpi=120)
'''


def write_plot_data(estimates, performance, out_dir) -> None:
    out_dir = Path(out_dir)
    for pname, perf in sorted(performance.items()):
        for ename, est in sorted(estimates.items()):
            with open(out_dir / f"plot_{pname}_vs_{ename}.csv", "w", newline="") as fh:
                w = csv.writer(fh)
                w.writerow(["ca_label", "estimate", "performance"])
                for lab in sorted(perf):
                    w.writerow([lab, est[lab], perf[lab]])
    (out_dir / "plot.py").write_text(PLOT_STUB)


def evaluate_files(metrics_path, simulation_path, out_dir, tie_policy="half") -> list[RankingReport]:
    estimates = read_metrics_csv(metrics_path)
    performance = average_performance(read_results_csv(simulation_path))
    reports = evaluate_estimators(estimates, performance, tie_policy)
    out_dir = Path(out_dir)
    out_dir.mkdir(parents=True, exist_ok=True)
    write_report_csv(reports, out_dir / "ranking.csv")
    write_discordant_json(reports, out_dir / "discordant.json")
    write_plot_data(estimates, performance, out_dir)
    return reports


def run_repetition(cfg: ExperimentConfig, seed: int, out_dir=None) -> list[RankingReport]:
    g, cs = cfg.graph(), cfg.channel_set()
    cas = build_population(g, cs, seed, cfg.budget, cfg.gsca_objective)
    mrows = metric_rows(g, cas, cs, cfg.cdal_rule)
    srows = simulate_population(g, cas, cfg.scenarios, cfg.sim_model)
    if out_dir is None:
        estimates = {e: {r["ca_label"]: float(r[e]) for r in mrows}
                     for e in METRIC_COLUMNS if e not in NON_ESTIMATOR_COLUMNS}
        sim_dicts = [{"ca_label": lab, "scenario": k,
                      "aggregate_throughput_mbps": res.aggregate_throughput,
                      "plr_proxy": res.plr_proxy} for lab, k, res in srows]
        return evaluate_estimators(estimates, average_performance(sim_dicts), cfg.tie_policy)
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    save_topology(g, out / "topology.json")
    for label, ca in sorted(cas.items()):
        save_assignment(ca, cs, out / f"ca_{label}.json", label=label)
    write_metrics_csv(mrows, out / "metrics.csv")
    write_results_csv(srows, out / "simulation.csv")
    return evaluate_files(out / "metrics.csv", out / "simulation.csv", out, cfg.tie_policy)


def _run_one(args):
    cfg, seed, out_dir = args
    return seed, run_repetition(cfg, seed, out_dir)


SUMMARY_COLUMNS = ["seed", "estimator", "performance_metric", "eis", "n", "doc_percent"]


def run_all(cfg: ExperimentConfig, out_dir, jobs: int = 1) -> dict[int, list[RankingReport]]:
    """Run every seeded repetition; writes ``seed_<k>/`` folders plus ``summary.csv``."""
    out = Path(out_dir)
    out.mkdir(parents=True, exist_ok=True)
    tasks = [(cfg, s, out / f"seed_{s}") for s in cfg.seeds]
    if jobs > 1:
        with ProcessPoolExecutor(max_workers=jobs) as pool:
            results = dict(pool.map(_run_one, tasks))
    else:
        results = dict(map(_run_one, tasks))
    with open(out / "summary.csv", "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SUMMARY_COLUMNS)
        for seed in sorted(results):
            for r in sorted(results[seed], key=lambda r: (r.estimator, r.performance_metric)):
                w.writerow([seed, r.estimator, r.performance_metric, r.eis, r.n, f"{r.doc_percent:.4f}"])
    (out / "config.json").write_text(json.dumps(asdict(cfg), indent=2))
    return results


def cdal_vs_tid_wins(results: dict[int, list[RankingReport]], tid_column: str = "tid_c",
                     metric: str = "avg_throughput") -> int:
    """Repetitions in which CDAL's DoC is at least TID's for ``metric``."""
    wins = 0
    for reports in results.values():
        d = {r.estimator: r.doc_percent for r in reports if r.performance_metric == metric}
        wins += d["cdal_cost"] >= d[tid_column]
    return wins

