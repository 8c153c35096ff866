"""Command-line front end.

Exit codes: 0 ok, 2 bad arguments, 3 bad input data, 4 inconsistent
experiment inputs.
"""

from __future__ import annotations

import argparse
import json
import logging
import re
import sys
from pathlib import Path

from . import cdal
from .experiment import (
    ExperimentConfig,
    InconsistentInputs,
    cdal_vs_tid_wins,
    evaluate_files,
    grid_flow_scenario_for,
    metric_rows,
    run_all,
    write_metrics_csv,
)
from .flowsim import SCENARIO_SIZES, RoutingError, simulate, write_flow_json, write_results_csv
from .schemes import SchemeSpec, assign, standard_population, validate
from .topology import (
    ChannelSet,
    IncompleteAssignmentError,
    assignment_label,
    generate_grid,
    load_assignment,
    load_topology,
    save_assignment,
    save_topology,
)

EXIT_OK, EXIT_ARGS, EXIT_DATA, EXIT_INCONSISTENT = 0, 2, 3, 4


class CliError(Exception):
    def __init__(self, message, code):
        super().__init__(message)
        self.code = code


def _grid(text: str) -> tuple[int, int]:
    m = re.fullmatch(r"(-?\d+)[xX](-?\d+)", text)
    if not m:
        raise CliError(f"invalid dimensions {text!r} (expected RxC)", EXIT_ARGS)
    rows, cols = int(m.group(1)), int(m.group(2))
    if rows < 1 or cols < 1:
        raise CliError(f"invalid dimensions {text}", EXIT_ARGS)
    return rows, cols


def _out_dir(path) -> Path:
    out = Path(path)
    out.mkdir(parents=True, exist_ok=True)
    return out


def _load_inputs(topology, ca_files):
    try:
        g = load_topology(topology)
        cas, cs = {}, None
        for path in ca_files:
            ca, cs_i = load_assignment(path)
            label = assignment_label(path)
            if label in cas:
                raise CliError(f"duplicate CA label {label!r}", EXIT_INCONSISTENT)
            problems = validate(ca, g, cs_i)
            if problems:
                raise CliError(f"{path}: {problems[0]}", EXIT_DATA)
            if cs is not None and cs_i != cs:
                raise CliError(f"{path}: channel set differs from other CA files", EXIT_INCONSISTENT)
            cas[label], cs = ca, cs_i
    except (OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    if not cas:
        raise CliError("no CA files given", EXIT_ARGS)
    return g, cas, cs


def cmd_gen(args) -> int:
    rows, cols = _grid(args.grid)
    try:
        g = generate_grid(rows, cols, args.spacing, args.radios, args.tx_range, args.if_range)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ARGS) from exc
    path = _out_dir(args.out) / "topology.json"
    save_topology(g, path)
    print(f"wrote {path} ({g.n} nodes, {len(g.radios)} radios)")
    return EXIT_OK


def cmd_assign(args) -> int:
    try:
        g = load_topology(args.topology)
    except (OSError, ValueError) as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    cs = ChannelSet.of_size(args.channels)
    if args.scheme.lower() == "population":
        specs = standard_population(args.seed, args.budget, args.gsca_objective)
    else:
        try:
            specs = [SchemeSpec(args.scheme, args.model, args.seed, args.budget, args.gsca_objective)]
        except ValueError as exc:
            raise CliError(str(exc), EXIT_ARGS) from exc
    out = _out_dir(args.out)
    for spec in specs:
        ca = assign(spec, g, cs)
        path = out / f"ca_{spec.label}.json"
        save_assignment(ca, cs, path, label=spec.label)
        print(f"wrote {path}")
    return EXIT_OK


def cmd_estimate(args) -> int:
    g, cas, cs = _load_inputs(args.topology, args.ca)
    rule = cdal.LITERAL_KP if args.literal_kp else cdal.UNIFORM
    rows = metric_rows(g, cas, cs, rule)
    out = _out_dir(args.out)
    if args.format == "json":
        path = out / "metrics.json"
        payload = []
        for row in rows:
            est = cdal.estimate(g, cas[row["ca_label"]], cs, rule=rule)
            payload.append({**row, **est.to_dict()})
        path.write_text(json.dumps(payload, indent=2))
    else:
        path = out / "metrics.csv"
        write_metrics_csv(rows, path)
    print(f"wrote {path} ({len(rows)} CAs, cdal rule {rule})")
    return EXIT_OK


def cmd_simulate(args) -> int:
    g, cas, _ = _load_inputs(args.topology, args.ca)
    scenarios = args.scenario or list(SCENARIO_SIZES)
    out = _out_dir(args.out)
    rows = []
    try:
        for label in sorted(cas):
            for k in scenarios:
                res = simulate(g, cas[label], grid_flow_scenario_for(g, k), args.model)
                rows.append((label, k, res))
                if args.format == "json":
                    write_flow_json(res, out / f"flows_{label}_{k}.json")
    except RoutingError as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ARGS) from exc
    path = out / "simulation.csv"
    write_results_csv(rows, path)
    print(f"wrote {path} ({len(rows)} rows)")
    return EXIT_OK


def cmd_evaluate(args) -> int:
    try:
        reports = evaluate_files(args.metrics, args.simulation, args.out, args.tie_policy)
    except InconsistentInputs as exc:
        raise CliError(str(exc), EXIT_INCONSISTENT) from exc
    except (OSError, ValueError, KeyError) as exc:
        raise CliError(str(exc), EXIT_DATA) from exc
    for r in reports:
        ties = f" ({len(r.tied_pairs)} tied pairs, policy {args.tie_policy})" if r.tied_pairs else ""
        print(f"{r.performance_metric:15s} {r.estimator:10s} EIS={r.eis:<5} DoC={r.doc_percent:6.2f}%{ties}")
    return EXIT_OK


def cmd_run_all(args) -> int:
    rows, cols = _grid(args.grid)
    cfg = ExperimentConfig(
        rows=rows, cols=cols, spacing_m=args.spacing, radios=args.radios, channels=args.channels,
        tx_range_m=args.tx_range, if_range_m=args.if_range,
        seeds=tuple(range(args.seed, args.seed + args.reps)),
        scenarios=tuple(args.scenario or SCENARIO_SIZES), sim_model=args.model,
        budget=args.budget, cdal_rule=cdal.LITERAL_KP if args.literal_kp else cdal.UNIFORM,
        tie_policy=args.tie_policy, gsca_objective=args.gsca_objective,
    )
    try:
        results = run_all(cfg, args.out, jobs=args.jobs)
    except ValueError as exc:
        raise CliError(str(exc), EXIT_ARGS) from exc
    wins = cdal_vs_tid_wins(results)
    print(f"wrote {Path(args.out) / 'summary.csv'}; "
          f"DoC(CDAL) >= DoC(TID_C) on avg throughput in {wins}/{len(results)} repetitions")
    return EXIT_OK


def _topology_flags(p):
    p.add_argument("--grid", default="5x5", help="RxC")
    p.add_argument("--spacing", type=float, default=200.0)
    p.add_argument("--radios", type=int, default=2)
    p.add_argument("--tx-range", type=float, default=250.0)
    p.add_argument("--if-range", type=float, default=500.0)


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="wmnca", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", help="generate a grid topology")
    _topology_flags(p)
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_gen)

    p = sub.add_parser("assign", help="produce channel assignments")
    p.add_argument("--topology", required=True)
    p.add_argument("--scheme", required=True, help="CEN, BFS, CLQ, MIS, OIS, GSCA or 'population'")
    p.add_argument("--model", choices=["c", "e"], default="c")
    p.add_argument("--channels", type=int, default=3)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--gsca-objective", choices=["tid", "coverage"], default="tid",
                   help="GSCA search target: plain TID, or coverage of adjacent pairs first")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_assign)

    p = sub.add_parser("estimate", help="compute TID and CDAL cost")
    p.add_argument("--topology", required=True)
    p.add_argument("--ca", nargs="+", required=True)
    p.add_argument("--literal-kp", action="store_true", help="use the k/p increment as printed")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_estimate)

    p = sub.add_parser("simulate", help="flow-level throughput proxy")
    p.add_argument("--topology", required=True)
    p.add_argument("--ca", nargs="+", required=True)
    p.add_argument("--scenario", type=int, action="append", choices=list(SCENARIO_SIZES))
    p.add_argument("--model", choices=["c", "e"], default="e")
    p.add_argument("--format", choices=["csv", "json"], default="csv")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_simulate)

    p = sub.add_parser("evaluate", help="EIS / DoC of each estimator")
    p.add_argument("--metrics", required=True)
    p.add_argument("--simulation", required=True)
    p.add_argument("--tie-policy", choices=["half", "full", "none"], default="half")
    p.add_argument("--out", default=".")
    p.set_defaults(func=cmd_evaluate)

    p = sub.add_parser("run-all", help="seeded end-to-end ranking experiment")
    _topology_flags(p)
    p.add_argument("--channels", type=int, default=3)
    p.add_argument("--seed", type=int, default=0, help="first seed")
    p.add_argument("--reps", type=int, default=10)
    p.add_argument("--scenario", type=int, action="append", choices=list(SCENARIO_SIZES))
    p.add_argument("--model", choices=["c", "e"], default="e", help="conflict model of the simulator")
    p.add_argument("--budget", type=int, default=20000)
    p.add_argument("--gsca-objective", choices=["tid", "coverage"], default="tid",
                   help="GSCA search target: plain TID, or coverage of adjacent pairs first")
    p.add_argument("--literal-kp", action="store_true")
    p.add_argument("--tie-policy", choices=["half", "full", "none"], default="half")
    p.add_argument("--jobs", type=int, default=1)
    p.add_argument("--out", default="results")
    p.set_defaults(func=cmd_run_all)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    args = parser.parse_args(argv)
    logging.basicConfig(level=logging.DEBUG if args.verbose else logging.WARNING)
    try:
        return args.func(args)
    except IncompleteAssignmentError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_DATA
    except CliError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return exc.code


if __name__ == "__main__":
    sys.exit(main())
