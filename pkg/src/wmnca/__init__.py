"""Interference estimation and CA performance prediction for multi-radio
multi-channel wireless mesh networks."""

from .cdal import ChannelDistribution, CdalEstimate, cdal_cost, common_channels, estimate, prob_channel_select
from .conflict import ConflictGraph, ConflictModel, build_mmcg, tid
from .evaluation import CaSequence, Direction, RankingReport, doc, eis, rank
from .flowsim import Flow, FlowSpec, SimResult, grid_flow_scenarios, simulate
from .schemes import SchemeKind, SchemeSpec, assign, validate
from .topology import (
    ChannelAssignment,
    ChannelSet,
    Link,
    Node,
    WmnGraph,
    adjacency,
    find_link_set,
    generate_grid,
)

__version__ = "0.1.0"
