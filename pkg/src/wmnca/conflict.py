"""Multi-radio multi-channel conflict graphs and total interference degree.

Conventional model (C-MMCG): two links conflict when they use the same
channel and some endpoint of one lies within interference range of some
endpoint of the other. Enhanced model (E-MMCG) adds radio co-location
interference: two links meeting at a node through *different* radios of
that node conflict whatever their channels.
"""

from __future__ import annotations

import csv
import enum
import json
from dataclasses import dataclass
from pathlib import Path

import numpy as np

from .topology import ChannelAssignment, Link, WmnGraph, link_arrays


class ConflictModel(enum.Enum):
    CONVENTIONAL = "c"
    ENHANCED = "e"

    @classmethod
    def parse(cls, value) -> "ConflictModel":
        if isinstance(value, cls):
            return value
        key = str(value).strip().lower()
        for m in cls:
            if key in (m.value, m.name.lower()):
                return m
        raise ValueError(f"unknown conflict model {value!r}")

    @property
    def suffix(self) -> str:
        return self.value.upper()


def conflict_matrix(
    g: WmnGraph,
    links: np.ndarray,
    channels: np.ndarray,
    model: ConflictModel,
    exclude_shared_radio: bool = False,
) -> np.ndarray:
    """Boolean ``(L, L)`` symmetric conflict matrix for radio-index link rows.

    ``links`` has shape ``(L, 2)`` (global radio indices, see
    :func:`topology.link_arrays`); ``channels`` maps radio index to channel.
    """
    L = len(links)
    if L == 0:
        return np.zeros((0, 0), dtype=bool)
    ra, rb = links[:, 0], links[:, 1]
    na, nb = g.radio_node[ra], g.radio_node[rb]
    ch = channels[ra]
    near = g.within_if

    same_ch = ch[:, None] == ch[None, :]
    near_any = (
        near[na[:, None], na[None, :]]
        | near[na[:, None], nb[None, :]]
        | near[nb[:, None], na[None, :]]
        | near[nb[:, None], nb[None, :]]
    )
    conflict = same_ch & near_any
    if exclude_shared_radio:
        shared = (
            (ra[:, None] == ra[None, :])
            | (ra[:, None] == rb[None, :])
            | (rb[:, None] == ra[None, :])
            | (rb[:, None] == rb[None, :])
        )
        conflict &= ~shared
    if model is ConflictModel.ENHANCED:
        rci = (
            ((na[:, None] == na[None, :]) & (ra[:, None] != ra[None, :]))
            | ((na[:, None] == nb[None, :]) & (ra[:, None] != rb[None, :]))
            | ((nb[:, None] == na[None, :]) & (rb[:, None] != ra[None, :]))
            | ((nb[:, None] == nb[None, :]) & (rb[:, None] != rb[None, :]))
        )
        conflict |= rci
    np.fill_diagonal(conflict, False)
    return conflict


def tid_from_channels(
    g: WmnGraph,
    channels: np.ndarray,
    model: ConflictModel = ConflictModel.CONVENTIONAL,
    exclude_shared_radio: bool = False,
) -> int:
    """TID straight from a per-radio channel vector (negative = unassigned radio)."""
    links = link_arrays(g, channels)
    cm = conflict_matrix(g, links, channels, model, exclude_shared_radio)
    return int(cm.sum()) // 2


@dataclass(frozen=True)
class ConflictGraph:
    vertices: tuple[Link, ...]
    edges: frozenset[tuple[int, int]]
    model: ConflictModel

    def degree(self) -> list[int]:
        deg = [0] * len(self.vertices)
        for a, b in self.edges:
            deg[a] += 1
            deg[b] += 1
        return deg

    def neighbors(self) -> list[set[int]]:
        nbrs = [set() for _ in self.vertices]
        for a, b in self.edges:
            nbrs[a].add(b)
            nbrs[b].add(a)
        return nbrs


def build_mmcg(
    g: WmnGraph,
    ca: ChannelAssignment,
    model: ConflictModel | str = ConflictModel.CONVENTIONAL,
    exclude_shared_radio: bool = False,
) -> ConflictGraph:
    model = ConflictModel.parse(model)
    channels = ca.to_array(g)
    links = link_arrays(g, channels)
    cm = conflict_matrix(g, links, channels, model, exclude_shared_radio)
    rows, cols = np.nonzero(np.triu(cm, k=1))
    radios = g.radios
    vertices = tuple(Link(radios[a], radios[b], int(channels[a])) for a, b in links.tolist())
    return ConflictGraph(vertices, frozenset(zip(rows.tolist(), cols.tolist())), model)


def tid(cg: ConflictGraph) -> int:
    """Total interference degree: the number of conflict edges."""
    return len(cg.edges)


def write_edge_csv(cg: ConflictGraph, path) -> None:
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(["link_a", "link_b"])
        for a, b in sorted(cg.edges):
            w.writerow([cg.vertices[a].id, cg.vertices[b].id])


def summary(cg: ConflictGraph) -> dict:
    return {"model": cg.model.name.lower(), "num_links": len(cg.vertices), "tid": tid(cg)}


def write_summary_json(cg: ConflictGraph, path) -> None:
    Path(path).write_text(json.dumps(summary(cg), indent=2))
