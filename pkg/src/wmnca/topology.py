"""Mesh graphs, channel sets, channel assignments and radio-level links.

Nodes carry planar positions (meters) and a radio count. A radio is
identified by ``(node_id, radio_index)``. Two nodes are adjacent when they
lie within the transmission range of each other; a link exists between two
adjacent nodes for every pair of their radios tuned to the same channel.
"""

from __future__ import annotations

import json
import math
from collections.abc import Iterable, Iterator, Mapping
from dataclasses import dataclass
from functools import cached_property
from pathlib import Path

import numpy as np

RadioId = tuple[int, int]


class IncompleteAssignmentError(ValueError):
    """Raised when a channel assignment leaves some radio without a channel."""


@dataclass(frozen=True)
class Node:
    id: int
    x: float
    y: float
    radios: int = 1


@dataclass(frozen=True)
class WmnGraph:
    nodes: tuple[Node, ...]
    tx_range_m: float = 250.0
    if_range_m: float = 500.0

    def __post_init__(self):
        object.__setattr__(self, "nodes", tuple(sorted(self.nodes, key=lambda nd: nd.id)))
        ids = [nd.id for nd in self.nodes]
        if len(set(ids)) != len(ids):
            raise ValueError("node ids must be unique")
        positions = [(nd.x, nd.y) for nd in self.nodes]
        if len(set(positions)) != len(positions):
            raise ValueError("node positions must be unique")
        if any(nd.radios < 1 for nd in self.nodes):
            raise ValueError("every node needs at least one radio")
        if not self.tx_range_m > 0 or not self.if_range_m > 0:
            raise ValueError("ranges must be positive")
        if self.if_range_m < self.tx_range_m:
            raise ValueError("interference range must be >= transmission range")

    @property
    def n(self) -> int:
        return len(self.nodes)

    @cached_property
    def node_ids(self) -> tuple[int, ...]:
        return tuple(nd.id for nd in self.nodes)

    @cached_property
    def index(self) -> dict[int, int]:
        """Node id -> row index into the distance matrices."""
        return {nid: k for k, nid in enumerate(self.node_ids)}

    def node(self, node_id: int) -> Node:
        return self.nodes[self.index[node_id]]

    @cached_property
    def radios(self) -> tuple[RadioId, ...]:
        return tuple((nd.id, r) for nd in self.nodes for r in range(nd.radios))

    @cached_property
    def radio_index(self) -> dict[RadioId, int]:
        return {rid: k for k, rid in enumerate(self.radios)}

    @cached_property
    def distances(self) -> np.ndarray:
        xy = np.array([(nd.x, nd.y) for nd in self.nodes], dtype=float).reshape(-1, 2)
        diff = xy[:, None, :] - xy[None, :, :]
        return np.sqrt((diff**2).sum(axis=-1))

    @cached_property
    def within_tx(self) -> np.ndarray:
        m = self.distances <= self.tx_range_m
        np.fill_diagonal(m, False)
        return m

    @cached_property
    def within_if(self) -> np.ndarray:
        # diagonal stays True: a node is within interference range of itself
        return self.distances <= self.if_range_m

    @cached_property
    def adjacent_pairs(self) -> tuple[tuple[int, int], ...]:
        """Unordered adjacent node pairs ``(i, j)`` with ``i < j``, sorted."""
        rows, cols = np.nonzero(np.triu(self.within_tx, k=1))
        ids = self.node_ids
        return tuple((ids[a], ids[b]) for a, b in zip(rows.tolist(), cols.tolist()))

    @cached_property
    def candidate_radio_pairs(self) -> np.ndarray:
        """Every (radio, radio) pair across adjacent nodes, as global radio indices.

        Shape ``(K, 2)``; rows sorted by node pair then radio indices.
        """
        ridx = self.radio_index
        out = [
            (ridx[(i, ri)], ridx[(j, rj)])
            for i, j in self.adjacent_pairs
            for ri in range(self.node(i).radios)
            for rj in range(self.node(j).radios)
        ]
        return np.array(out, dtype=np.int64).reshape(-1, 2)

    @cached_property
    def radio_node(self) -> np.ndarray:
        """Global radio index -> node row index."""
        return np.array([self.index[nid] for nid, _ in self.radios], dtype=np.int64)


def adjacency(g: WmnGraph) -> dict[int, set[int]]:
    adj = {nid: set() for nid in g.node_ids}
    for i, j in g.adjacent_pairs:
        adj[i].add(j)
        adj[j].add(i)
    return adj


def generate_grid(
    rows: int,
    cols: int,
    spacing_m: float = 200.0,
    radios_per_node: int = 2,
    tx_range_m: float = 250.0,
    if_range_m: float = 500.0,
) -> WmnGraph:
    """Regular ``rows x cols`` lattice; node ``r*cols + c`` sits at ``(c*spacing, r*spacing)``."""
    if rows < 1 or cols < 1:
        raise ValueError(f"invalid dimensions {rows}x{cols}")
    if not spacing_m > 0:
        raise ValueError("spacing must be positive")
    if radios_per_node < 1:
        raise ValueError("radios_per_node must be >= 1")
    nodes = tuple(
        Node(r * cols + c, c * spacing_m, r * spacing_m, radios_per_node)
        for r in range(rows)
        for c in range(cols)
    )
    return WmnGraph(nodes, tx_range_m, if_range_m)


@dataclass(frozen=True)
class ChannelSet:
    channels: tuple[int, ...]

    def __post_init__(self):
        object.__setattr__(self, "channels", tuple(self.channels))
        if not self.channels:
            raise ValueError("channel set must not be empty")
        if len(set(self.channels)) != len(self.channels):
            raise ValueError("channels must be distinct")

    @classmethod
    def of_size(cls, m: int) -> "ChannelSet":
        return cls(tuple(range(1, m + 1)))

    def __len__(self):
        return len(self.channels)

    def __iter__(self):
        return iter(self.channels)

    def __contains__(self, ch):
        return ch in self.channels


class ChannelAssignment(Mapping):
    """Immutable mapping ``RadioId -> channel``."""

    __slots__ = ("_map",)

    def __init__(self, mapping: Mapping[RadioId, int] | Iterable[tuple[RadioId, int]] = ()):
        items = mapping.items() if isinstance(mapping, Mapping) else mapping
        self._map = {(int(n), int(r)): int(ch) for (n, r), ch in items}

    def __getitem__(self, radio: RadioId) -> int:
        return self._map[radio]

    def __iter__(self) -> Iterator[RadioId]:
        return iter(sorted(self._map))

    def __len__(self):
        return len(self._map)

    def __hash__(self):
        return hash(frozenset(self._map.items()))

    def __eq__(self, other):
        if isinstance(other, ChannelAssignment):
            return self._map == other._map
        return NotImplemented

    def __repr__(self):
        return f"ChannelAssignment({dict(sorted(self._map.items()))})"

    def node_channels(self, node_id: int) -> set[int]:
        """Channel set of a node's radios (multiplicity ignored)."""
        return {ch for (n, _), ch in self._map.items() if n == node_id}

    def replace(self, radio: RadioId, channel: int) -> "ChannelAssignment":
        m = dict(self._map)
        m[radio] = channel
        return ChannelAssignment(m)

    def relabel(self, bijection: Mapping[int, int]) -> "ChannelAssignment":
        return ChannelAssignment({r: bijection[ch] for r, ch in self._map.items()})

    def to_array(self, g: WmnGraph) -> np.ndarray:
        """Channels in ``g.radios`` order; raises if any radio is unassigned."""
        missing = [r for r in g.radios if r not in self._map]
        if missing:
            raise IncompleteAssignmentError(f"unassigned radios: {missing[:5]}")
        return np.array([self._map[r] for r in g.radios], dtype=np.int64)

    @classmethod
    def from_array(cls, g: WmnGraph, channels) -> "ChannelAssignment":
        return cls(zip(g.radios, (int(c) for c in channels)))


@dataclass(frozen=True, order=True)
class Link:
    """Radio-level link; endpoints are stored in canonical (sorted) order."""

    a: RadioId
    b: RadioId
    channel: int

    def __post_init__(self):
        if self.a[0] == self.b[0]:
            raise ValueError("link endpoints must be on distinct nodes")
        if self.b < self.a:
            a, b = self.b, self.a
            object.__setattr__(self, "a", a)
            object.__setattr__(self, "b", b)

    @property
    def nodes(self) -> tuple[int, int]:
        return self.a[0], self.b[0]

    @property
    def id(self) -> str:
        return f"{self.a[0]}/{self.a[1]}-{self.b[0]}/{self.b[1]}@{self.channel}"


def link_arrays(g: WmnGraph, channels: np.ndarray) -> np.ndarray:
    """Rows of ``candidate_radio_pairs`` whose two radios share a channel.

    ``channels`` is indexed by global radio index; entries < 0 mean unassigned
    and never form links.
    """
    pairs = g.candidate_radio_pairs
    if len(pairs) == 0:
        return pairs
    ca, cb = channels[pairs[:, 0]], channels[pairs[:, 1]]
    return pairs[(ca == cb) & (ca >= 0)]


def find_link_set(g: WmnGraph, ca: ChannelAssignment) -> tuple[Link, ...]:
    channels = ca.to_array(g)
    radios = g.radios
    return tuple(
        Link(radios[a], radios[b], int(channels[a])) for a, b in link_arrays(g, channels).tolist()
    )


# --- JSON -------------------------------------------------------------------


def topology_to_dict(g: WmnGraph) -> dict:
    return {
        "nodes": [{"id": nd.id, "x": nd.x, "y": nd.y, "radios": nd.radios} for nd in g.nodes],
        "tx_range_m": g.tx_range_m,
        "if_range_m": g.if_range_m,
    }


def topology_from_dict(data: dict) -> WmnGraph:
    try:
        nodes = tuple(
            Node(int(nd["id"]), float(nd["x"]), float(nd["y"]), int(nd["radios"]))
            for nd in data["nodes"]
        )
        return WmnGraph(nodes, float(data["tx_range_m"]), float(data["if_range_m"]))
    except (KeyError, TypeError) as exc:
        raise ValueError(f"malformed topology: {exc!r}") from exc


def assignment_to_dict(ca: ChannelAssignment, cs: ChannelSet, label: str | None = None) -> dict:
    out = {
        "channels": list(cs.channels),
        "assignment": {f"{n}/{r}": ch for (n, r), ch in ca.items()},
    }
    if label is not None:
        out["label"] = label
    return out


def assignment_from_dict(data: dict) -> tuple[ChannelAssignment, ChannelSet]:
    try:
        cs = ChannelSet(tuple(int(c) for c in data["channels"]))
        items = []
        for key, ch in data["assignment"].items():
            node, radio = key.split("/")
            items.append(((int(node), int(radio)), int(ch)))
    except (KeyError, TypeError, AttributeError) as exc:
        raise ValueError(f"malformed channel assignment: {exc!r}") from exc
    return ChannelAssignment(items), cs


def save_topology(g: WmnGraph, path) -> None:
    Path(path).write_text(json.dumps(topology_to_dict(g), indent=2))


def load_topology(path) -> WmnGraph:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return topology_from_dict(data)


def save_assignment(ca: ChannelAssignment, cs: ChannelSet, path, label: str | None = None) -> None:
    Path(path).write_text(json.dumps(assignment_to_dict(ca, cs, label), indent=2))


def load_assignment(path) -> tuple[ChannelAssignment, ChannelSet]:
    try:
        data = json.loads(Path(path).read_text())
    except json.JSONDecodeError as exc:
        raise ValueError(f"{path}: not valid JSON ({exc})") from exc
    return assignment_from_dict(data)


def assignment_label(path) -> str:
    """Label stored in a CA file, else the file stem without a ``ca_`` prefix."""
    data = json.loads(Path(path).read_text())
    stem = Path(path).stem
    return data.get("label") or (stem[3:] if stem.startswith("ca_") else stem)


def euclid(g: WmnGraph, i: int, j: int) -> float:
    a, b = g.node(i), g.node(j)
    return math.dist((a.x, a.y), (b.x, b.y))
