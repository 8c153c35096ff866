"""Channel Distribution Across Links (CDAL).

Every adjacent node pair that shares at least one channel carries one unit
of link mass, spread equally over its common channels. The resulting
per-channel link-counts form the channel distribution; its population
standard deviation is the CDAL cost (lower means a more even, and
presumably better performing, channel assignment).

Link-counts are accumulated as exact fractions so that mass conservation
holds with no rounding.
"""

from __future__ import annotations

import json
import math
import statistics
from collections.abc import Mapping, Sequence
from dataclasses import dataclass
from fractions import Fraction
from pathlib import Path

from .topology import ChannelAssignment, ChannelSet, WmnGraph, find_link_set

UNIFORM = "uniform"
LITERAL_KP = "literal-kp"


@dataclass(frozen=True)
class ChannelDistribution:
    link_count: dict[int, Fraction]
    pairs_with_common_channel: int = 0

    def values(self) -> list[Fraction]:
        return [self.link_count[k] for k in sorted(self.link_count)]

    @property
    def total(self) -> Fraction:
        return sum(self.link_count.values(), Fraction(0))


@dataclass(frozen=True)
class CdalEstimate:
    cost: float
    distribution: ChannelDistribution
    num_links: int
    rule: str = UNIFORM

    def to_dict(self) -> dict:
        return {
            "cdal_cost": self.cost,
            "distribution": {str(k): float(v) for k, v in sorted(self.distribution.link_count.items())},
            "pairs_with_common_channel": self.distribution.pairs_with_common_channel,
        }


def common_channels(g: WmnGraph, ca: ChannelAssignment, i: int, j: int) -> set[int]:
    if i == j or not g.within_tx[g.index[i], g.index[j]]:
        raise ValueError(f"nodes {i} and {j} are not adjacent")
    return ca.node_channels(i) & ca.node_channels(j)


def prob_channel_select(
    g: WmnGraph,
    ca: ChannelAssignment,
    cs: ChannelSet,
    rule: str = UNIFORM,
    ordered_pairs: bool = False,
) -> ChannelDistribution:
    """Expected per-channel link-count under uniform choice among common channels.

    ``rule="literal-kp"`` adds ``k/p`` instead of ``1/p`` for channel ``k``
    (the increment as typeset in the original pseudo-code). With
    ``ordered_pairs`` each adjacent pair is visited in both directions,
    doubling every entry.
    """
    if rule not in (UNIFORM, LITERAL_KP):
        raise ValueError(f"unknown increment rule {rule!r}")
    ca.to_array(g)  # completeness check
    node_ch = {nid: ca.node_channels(nid) for nid in g.node_ids}
    cd = {k: Fraction(0) for k in cs}
    visits = 2 if ordered_pairs else 1
    shared = 0
    for i, j in g.adjacent_pairs:
        com = node_ch[i] & node_ch[j]
        p = len(com)
        if p == 0:
            continue
        shared += 1
        for k in com:
            if k not in cd:
                raise ValueError(f"channel {k} not in channel set")
            inc = Fraction(k, p) if rule == LITERAL_KP else Fraction(1, p)
            cd[k] += visits * inc
    return ChannelDistribution(cd, shared)


def cdal_cost(cd: ChannelDistribution | Mapping[int, float] | Sequence[float]) -> float:
    """Population standard deviation of the link-counts (zeros included)."""
    if isinstance(cd, ChannelDistribution):
        values = cd.values()
    elif isinstance(cd, Mapping):
        values = list(cd.values())
    else:
        values = list(cd)
    if not values:
        raise ValueError("channel distribution is empty")
    exact = [v if isinstance(v, (int, Fraction)) else Fraction(v) for v in values]
    return math.sqrt(statistics.pvariance(exact))


def estimate(
    g: WmnGraph,
    ca: ChannelAssignment,
    cs: ChannelSet,
    rule: str = UNIFORM,
    ordered_pairs: bool = False,
) -> CdalEstimate:
    links = find_link_set(g, ca)
    cd = prob_channel_select(g, ca, cs, rule=rule, ordered_pairs=ordered_pairs)
    return CdalEstimate(cdal_cost(cd), cd, len(links), rule)


def write_estimate_json(est: CdalEstimate, path) -> None:
    Path(path).write_text(json.dumps(est.to_dict(), indent=2))
