"""Flow-level throughput proxy for a channel-assigned mesh.

A deliberately small model, not an 802.11 simulator:

1. each flow follows the minimum-hop path over node pairs that share a
   channel (ties: lexicographically smallest node sequence);
2. each hop uses the radio-level link on the currently least loaded of the
   pair's common channels;
3. a link with traffic runs at ``phy_rate / (1 + k)`` where ``k`` counts the
   traffic-carrying links it conflicts with;
4. flows crossing a link split its rate equally, and a flow obtains the
   minimum of its shares over its hops, capped at its demand.

A flow whose endpoints are connected in the radio-range graph but not by
any shared-channel path gets zero throughput.
"""

from __future__ import annotations

import csv
import json
from collections import Counter, deque
from dataclasses import dataclass, field
from pathlib import Path

from .conflict import ConflictModel, build_mmcg
from .topology import ChannelAssignment, Link, WmnGraph, adjacency


class RoutingError(ValueError):
    """Flow endpoints are not connected in the node graph."""


@dataclass(frozen=True)
class Flow:
    source: int
    destination: int
    demand: float = 54.0

    def __post_init__(self):
        if self.source == self.destination:
            raise ValueError("flow source and destination must differ")
        if not self.demand > 0:
            raise ValueError("flow demand must be positive")


@dataclass(frozen=True)
class FlowSpec:
    flows: tuple[Flow, ...]
    phy_rate_mbps: float = 54.0
    name: str = ""

    def __post_init__(self):
        object.__setattr__(self, "flows", tuple(self.flows))
        if len(set(self.flows)) != len(self.flows):
            raise ValueError("duplicate flows in spec")

    @property
    def total_demand(self) -> float:
        return sum(f.demand for f in self.flows)


@dataclass(frozen=True)
class SimResult:
    per_flow_throughput: dict[Flow, float]
    aggregate_throughput: float
    plr_proxy: float
    routes: dict[Flow, tuple[int, ...] | None] = field(default_factory=dict, compare=False)

    def to_dict(self) -> dict:
        return {
            "aggregate_throughput_mbps": self.aggregate_throughput,
            "plr_proxy": self.plr_proxy,
            "flows": [
                {
                    "source": f.source,
                    "destination": f.destination,
                    "demand_mbps": f.demand,
                    "throughput_mbps": tp,
                    "route": list(self.routes[f]) if self.routes.get(f) else None,
                }
                for f, tp in self.per_flow_throughput.items()
            ],
        }


# --- traffic scenarios ---------------------------------------------------------

SCENARIO_SIZES = (5, 8, 10, 12)


def grid_flows(rows: int, cols: int, demand: float = 54.0) -> list[Flow]:
    """Row flows (top to bottom), column flows (left to right), then the two diagonals."""
    last = rows * cols - 1
    flows = [Flow(r * cols, r * cols + cols - 1, demand) for r in range(rows)]
    flows += [Flow(c, (rows - 1) * cols + c, demand) for c in range(cols)]
    flows += [Flow(0, last, demand), Flow(cols - 1, (rows - 1) * cols, demand)]
    return flows


def grid_flow_scenario(rows: int, cols: int, n_flows: int, demand: float = 54.0,
                       phy_rate_mbps: float = 54.0) -> FlowSpec:
    if rows < 3 or cols < 3:
        raise ValueError(f"{rows}x{cols} grid too small for multi-hop flow scenarios")
    pool = grid_flows(rows, cols, demand)
    if not 1 <= n_flows <= len(pool):
        raise ValueError(f"{rows}x{cols} grid offers {len(pool)} flows, {n_flows} requested")
    return FlowSpec(tuple(pool[:n_flows]), phy_rate_mbps, name=str(n_flows))


def grid_flow_scenarios(rows: int, cols: int, sizes=SCENARIO_SIZES, demand: float = 54.0,
                        phy_rate_mbps: float = 54.0) -> list[FlowSpec]:
    return [grid_flow_scenario(rows, cols, k, demand, phy_rate_mbps) for k in sizes]


# --- routing -------------------------------------------------------------------


def _hops_to(dest: int, adj: dict[int, set[int]]) -> dict[int, int]:
    dist = {dest: 0}
    queue = deque([dest])
    while queue:
        v = queue.popleft()
        for w in adj[v]:
            if w not in dist:
                dist[w] = dist[v] + 1
                queue.append(w)
    return dist


def shortest_path(adj: dict[int, set[int]], source: int, dest: int) -> tuple[int, ...] | None:
    """Lexicographically smallest among the minimum-hop paths, or None."""
    dist = _hops_to(dest, adj)
    if source not in dist:
        return None
    path = [source]
    v = source
    while v != dest:
        v = min(w for w in adj[v] if dist.get(w) == dist[v] - 1)
        path.append(v)
    return tuple(path)


def _pair_links(links: tuple[Link, ...]) -> dict[tuple[int, int], list[int]]:
    out: dict[tuple[int, int], list[int]] = {}
    for k, ln in enumerate(links):
        out.setdefault(ln.nodes, []).append(k)
    return out


# --- simulation ----------------------------------------------------------------


def simulate(
    g: WmnGraph,
    ca: ChannelAssignment,
    spec: FlowSpec,
    model: ConflictModel | str = ConflictModel.ENHANCED,
) -> SimResult:
    cg = build_mmcg(g, ca, model)
    links = cg.vertices
    by_pair = _pair_links(links)
    node_adj = adjacency(g)
    link_adj = {nid: set() for nid in g.node_ids}
    for a, b in by_pair:
        link_adj[a].add(b)
        link_adj[b].add(a)

    channel_load: Counter = Counter()
    flow_links: dict[Flow, list[int] | None] = {}
    routes: dict[Flow, tuple[int, ...] | None] = {}
    for flow in spec.flows:
        if shortest_path(node_adj, flow.source, flow.destination) is None:
            raise RoutingError(f"nodes {flow.source} and {flow.destination} are disconnected")
        path = shortest_path(link_adj, flow.source, flow.destination)
        routes[flow] = path
        if path is None:
            flow_links[flow] = None
            continue
        used = []
        for u, v in zip(path, path[1:]):
            cands = by_pair[(min(u, v), max(u, v))]
            k = min(cands, key=lambda k: (channel_load[links[k].channel], links[k].channel, k))
            channel_load[links[k].channel] += 1
            used.append(k)
        flow_links[flow] = used

    users: Counter = Counter()
    for used in flow_links.values():
        for k in set(used or ()):
            users[k] += 1
    nbrs = cg.neighbors()
    active = set(users)
    rate = {k: spec.phy_rate_mbps / (1 + len(nbrs[k] & active)) for k in active}

    per_flow = {}
    for flow, used in flow_links.items():
        if not used:
            per_flow[flow] = 0.0
            continue
        share = min(rate[k] / users[k] for k in used)
        per_flow[flow] = min(flow.demand, share)
    aggregate = sum(per_flow.values())
    plr = 1.0 - aggregate / spec.total_demand if spec.flows else 0.0
    return SimResult(per_flow, aggregate, max(0.0, plr), routes)


SIM_COLUMNS = ["ca_label", "scenario", "aggregate_throughput_mbps", "plr_proxy"]


def write_results_csv(rows, path) -> None:
    """``rows``: iterable of ``(ca_label, scenario, SimResult)``; written sorted."""
    rows = sorted(rows, key=lambda r: (r[0], int(r[1]) if str(r[1]).isdigit() else r[1]))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(SIM_COLUMNS)
        for label, scenario, res in rows:
            w.writerow([label, scenario, f"{res.aggregate_throughput:.6f}", f"{res.plr_proxy:.6f}"])


def read_results_csv(path) -> list[dict]:
    with open(path, newline="") as fh:
        reader = csv.DictReader(fh)
        missing = set(SIM_COLUMNS) - set(reader.fieldnames or ())
        if missing:
            raise ValueError(f"simulation CSV lacks columns {sorted(missing)}")
        return [
            {
                "ca_label": row["ca_label"],
                "scenario": row["scenario"],
                "aggregate_throughput_mbps": float(row["aggregate_throughput_mbps"]),
                "plr_proxy": float(row["plr_proxy"]),
            }
            for row in reader
        ]


def write_flow_json(res: SimResult, path) -> None:
    Path(path).write_text(json.dumps(res.to_dict(), indent=2))
