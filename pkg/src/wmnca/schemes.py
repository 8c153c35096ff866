"""Channel assignment schemes: CEN, BFS, CLQ, MIS, OIS and GSCA.

These are compact stand-ins that keep each scheme's character rather than
faithful ports of the original publications:

* CEN  - static round robin over radio indices, identical on every node.
* BFS  - breadth-first sweep from node 0; each radio takes the channel that
  adds the fewest conflicts, radio 0 always shares a channel with the BFS
  parent.
* CLQ  - repeated greedy maximal clique extraction on the conflict graph
  with channels spread across each clique.
* MIS  - one greedy maximal independent set of potential links per channel.
* OIS  - MIS on the enhanced model followed by an evenness pass.
* GSCA - brute force (exhaustive or restarted local search) minimum TID.
  With ``objective="coverage"`` it first minimises the number of adjacent
  node pairs left without a common channel, then TID.

No scheme but GSCA (which searches everything) puts two radios of a node on
the same channel when there are enough channels. All tie-breaks go lowest
channel, then lowest node id, then lowest radio index.
"""

from __future__ import annotations

import enum
import itertools
from dataclasses import dataclass

import numpy as np

from .conflict import ConflictModel, conflict_matrix, tid_from_channels
from .topology import ChannelAssignment, ChannelSet, WmnGraph, link_arrays


GSCA_OBJECTIVES = ("tid", "coverage")


class SchemeKind(enum.Enum):
    CEN = "CEN"
    BFS = "BFS"
    CLQ = "CLQ"
    MIS = "MIS"
    OIS = "OIS"
    GSCA = "GSCA"


@dataclass(frozen=True)
class SchemeSpec:
    kind: SchemeKind
    conflict_model: ConflictModel = ConflictModel.CONVENTIONAL
    seed: int = 0
    budget: int = 20000
    objective: str = "tid"

    def __post_init__(self):
        if isinstance(self.kind, str):
            try:
                object.__setattr__(self, "kind", SchemeKind(self.kind.upper()))
            except ValueError:
                raise ValueError(f"unknown scheme kind {self.kind!r}") from None
        object.__setattr__(self, "conflict_model", ConflictModel.parse(self.conflict_model))
        if self.kind in (SchemeKind.GSCA, SchemeKind.OIS, SchemeKind.CLQ) and self.budget < 1:
            raise ValueError("budget must be >= 1")
        if self.objective not in GSCA_OBJECTIVES:
            raise ValueError(f"unknown GSCA objective {self.objective!r}")

    @property
    def label(self) -> str:
        if self.kind in (SchemeKind.GSCA, SchemeKind.OIS):
            return self.kind.value
        return f"{self.kind.value}_{self.conflict_model.suffix}"


# --- shared helpers ----------------------------------------------------------


def components(g: WmnGraph, channels: np.ndarray) -> int:
    """Connected components of the topology induced by shared channels."""
    parent = list(range(g.n))

    def find(x):
        while parent[x] != x:
            parent[x] = parent[parent[x]]
            x = parent[x]
        return x

    links = link_arrays(g, channels)
    if len(links):
        for a, b in g.radio_node[links].tolist():
            ra, rb = find(a), find(b)
            if ra != rb:
                parent[max(ra, rb)] = min(ra, rb)
    return len({find(x) for x in range(g.n)})


def uncovered_pairs(g: WmnGraph, channels: np.ndarray) -> int:
    """Adjacent node pairs that share no channel."""
    links = link_arrays(g, channels)
    covered = {tuple(p) for p in g.radio_node[links].tolist()}
    return len(g.adjacent_pairs) - len(covered)


def _objective(g, channels, model):
    return components(g, channels), tid_from_channels(g, channels, model)


def _gsca_objective(g, channels, model, objective="tid"):
    t = tid_from_channels(g, channels, model)
    if objective == "coverage":
        return uncovered_pairs(g, channels), t
    return (t,)


def _radio_slices(g: WmnGraph):
    """Node row index -> list of global radio indices."""
    out = [[] for _ in range(g.n)]
    for k, nrow in enumerate(g.radio_node.tolist()):
        out[nrow].append(k)
    return out


def _duplicates_sibling(ch, slots, nrow, radio, c, m):
    """Would ``radio`` repeat a channel already on another radio of its node?

    Two radios of one node on the same channel conflict under either model,
    so schemes avoid it whenever the channel set is large enough.
    """
    if len(slots[nrow]) > m:
        return False
    return any(ch[r] == c for r in slots[nrow] if r != radio)


# --- schemes -----------------------------------------------------------------


def _cen(g, cs):
    chans = cs.channels
    return np.array([chans[r % len(chans)] for _, r in g.radios], dtype=np.int64)


def _bfs_order(g):
    adj = [np.flatnonzero(g.within_tx[k]).tolist() for k in range(g.n)]
    parent = [-1] * g.n
    seen = [False] * g.n
    order = []
    for root in range(g.n):
        if seen[root]:
            continue
        seen[root] = True
        queue = [root]
        while queue:
            v = queue.pop(0)
            order.append(v)
            for w in adj[v]:
                if not seen[w]:
                    seen[w] = True
                    parent[w] = v
                    queue.append(w)
    return order, parent


def _bfs(g, cs, model):
    """Each radio takes the channel adding the fewest conflicts (under ``model``)
    to the partial assignment; radio 0 must reuse a channel of the BFS parent."""
    slots = _radio_slices(g)
    ch = np.full(len(g.radios), -1, dtype=np.int64)
    order, parent = _bfs_order(g)
    for v in order:
        for k, radio in enumerate(slots[v]):
            cands = list(cs)
            if k == 0 and parent[v] >= 0:
                cands = sorted({int(c) for c in ch[slots[parent[v]]]})
            fresh = [c for c in cands if not _duplicates_sibling(ch, slots, v, radio, c, len(cs))]
            scores = {}
            for c in fresh or cands:
                ch[radio] = c
                scores[c] = tid_from_channels(g, ch, model)
            ch[radio] = min(scores, key=lambda c: (scores[c], c))
    return ch


def _greedy_clique(cm: np.ndarray) -> list[int]:
    deg = cm.sum(axis=1)
    start = int(np.lexsort((np.arange(len(deg)), -deg))[0])
    clique = [start]
    cand = set(np.flatnonzero(cm[start]).tolist())
    while cand:
        nxt = min(cand, key=lambda v: (-deg[v], v))
        clique.append(nxt)
        cand &= set(np.flatnonzero(cm[nxt]).tolist())
    return clique


def _clq(g, cs, model, budget):
    slots = _radio_slices(g)
    ch = _cen(g, cs)
    best, best_obj = ch.copy(), _objective(g, ch, model)
    chans = cs.channels
    seen = {ch.tobytes()}
    for _ in range(budget):
        links = link_arrays(g, ch)
        cm = conflict_matrix(g, links, ch, model)
        if not cm.any():
            break
        touched = set()
        new = ch.copy()
        for t, li in enumerate(_greedy_clique(cm)):
            target = chans[t % len(chans)]
            for radio in links[li].tolist():
                nrow = g.radio_node[radio]
                if radio in touched or _duplicates_sibling(new, slots, nrow, radio, target, len(cs)):
                    continue
                new[radio] = target
                touched.add(radio)
        key = new.tobytes()
        if key in seen:
            break
        seen.add(key)
        ch = new
        obj = _objective(g, ch, model)
        if obj < best_obj:
            best, best_obj = ch.copy(), obj
    return best


def _mis(g, cs, model, rng):
    """One greedy maximal independent set of potential links per channel."""
    pairs = [(g.index[i], g.index[j]) for i, j in g.adjacent_pairs]
    order = [pairs[k] for k in rng.permutation(len(pairs))]
    near = g.within_if
    capacity = [nd.radios for nd in g.nodes]
    node_chs = [[] for _ in range(g.n)]
    link_ch = {}
    for c in cs:
        chosen = []
        for i, j in order:
            if (i, j) in link_ch:
                continue
            if any(c not in node_chs[e] and len(node_chs[e]) >= capacity[e] for e in (i, j)):
                continue
            if any(near[a, b] for p, q in chosen for a in (i, j) for b in (p, q)):
                continue
            if model is ConflictModel.ENHANCED and any(
                node_chs[e] and c not in node_chs[e] for e in (i, j)
            ):
                # co-located radio on another channel already carries a link
                continue
            chosen.append((i, j))
            link_ch[(i, j)] = c
            for e in (i, j):
                if c not in node_chs[e]:
                    node_chs[e].append(c)
    slots = _radio_slices(g)
    ch = np.full(len(g.radios), -1, dtype=np.int64)
    for v in range(g.n):
        for radio, c in zip(slots[v], node_chs[v]):
            ch[radio] = c
    counts = {c: int(np.count_nonzero(ch == c)) for c in cs}
    for v in range(g.n):
        for radio in slots[v]:
            if ch[radio] >= 0:
                continue
            own = set(ch[slots[v]].tolist())
            c = min(cs, key=lambda c: (c in own, counts[c], c))
            ch[radio] = c
            counts[c] += 1
    return ch


def _spread(g, cs, ch):
    """(radio-count spread, link-count spread) over channels, compared lexicographically."""
    radio_counts = [np.count_nonzero(ch == c) for c in cs]
    slots = _radio_slices(g)
    node_ch = [set(ch[s].tolist()) for s in slots]
    mass = dict.fromkeys(cs, 0.0)
    for i, j in g.adjacent_pairs:
        com = node_ch[g.index[i]] & node_ch[g.index[j]]
        for k in com:
            mass[k] += 1.0 / len(com)
    return round(float(np.std(radio_counts)), 9), round(float(np.std(list(mass.values()))), 9)


def _evenness_pass(g, cs, ch, budget):
    """Flip single radios while that evens out channel usage without raising
    enhanced TID or disconnecting the network."""
    model = ConflictModel.ENHANCED
    slots = _radio_slices(g)
    ch = ch.copy()
    comp, t = _objective(g, ch, model)
    spread = _spread(g, cs, ch)
    evals = 0
    improved = True
    while improved and evals < budget:
        improved = False
        for radio in range(len(ch)):
            old = ch[radio]
            for c in cs:
                if c == old or evals >= budget:
                    continue
                if _duplicates_sibling(ch, slots, g.radio_node[radio], radio, c, len(cs)):
                    continue
                ch[radio] = c
                evals += 1
                s = _spread(g, cs, ch)
                if s < spread:
                    comp2, t2 = _objective(g, ch, model)
                    if comp2 <= comp and t2 <= t:
                        comp, t, spread, old = comp2, t2, s, c
                        improved = True
                        continue
                ch[radio] = old
    return ch


def _gsca(g, cs, model, rng, budget, objective="tid"):
    chans = np.array(cs.channels, dtype=np.int64)
    R, M = len(g.radios), len(chans)

    def key(vec):
        return (_gsca_objective(g, vec, model, objective), tuple(vec.tolist()))

    if M**R <= budget:
        best = None
        for combo in itertools.product(range(M), repeat=R):
            vec = chans[list(combo)]
            k = key(vec)
            if best is None or k < best[0]:
                best = (k, vec)
        return best[1]

    evals = 0
    best = None
    while evals < budget:
        vec = chans[rng.integers(0, M, size=R)]
        obj = _gsca_objective(g, vec, model, objective)
        evals += 1
        improved = True
        while improved and evals < budget:
            improved = False
            for radio in rng.permutation(R).tolist():
                old = vec[radio]
                for c in chans.tolist():
                    if c == old or evals >= budget:
                        continue
                    vec[radio] = c
                    evals += 1
                    o = _gsca_objective(g, vec, model, objective)
                    if o < obj:
                        obj, old = o, c
                        improved = True
                    else:
                        vec[radio] = old
        k = (obj, tuple(vec.tolist()))
        if best is None or k < best[0]:
            best = (k, vec.copy())
    return best[1]


def assign(spec: SchemeSpec, g: WmnGraph, cs: ChannelSet) -> ChannelAssignment:
    rng = np.random.default_rng(spec.seed)
    kind = spec.kind
    if kind is SchemeKind.CEN:
        ch = _cen(g, cs)
    elif kind is SchemeKind.BFS:
        ch = _bfs(g, cs, spec.conflict_model)
    elif kind is SchemeKind.CLQ:
        ch = _clq(g, cs, spec.conflict_model, min(spec.budget, 50))
    elif kind is SchemeKind.MIS:
        ch = _mis(g, cs, spec.conflict_model, rng)
    elif kind is SchemeKind.OIS:
        ch = _evenness_pass(g, cs, _mis(g, cs, ConflictModel.ENHANCED, rng), spec.budget)
    elif kind is SchemeKind.GSCA:
        ch = _gsca(g, cs, ConflictModel.CONVENTIONAL, rng, spec.budget, spec.objective)
    else:  # pragma: no cover
        raise ValueError(f"unknown scheme kind {kind!r}")
    return ChannelAssignment.from_array(g, ch)


def validate(ca: ChannelAssignment, g: WmnGraph, cs: ChannelSet) -> list[str]:
    """Human-readable violations; an empty list means the assignment is valid."""
    problems = []
    for radio in g.radios:
        if radio not in ca:
            problems.append(f"unassigned radio {radio[0]}/{radio[1]}")
        elif ca[radio] not in cs:
            problems.append(f"channel out of set: radio {radio[0]}/{radio[1]} on {ca[radio]}")
    known = set(g.radios)
    for radio in ca:
        if radio not in known:
            problems.append(f"unknown radio {radio[0]}/{radio[1]}")
    return problems


def standard_population(seed: int = 0, budget: int = 20000, gsca_objective: str = "tid") -> list[SchemeSpec]:
    """The nine-CA roster: CEN, BFS, CLQ, MIS under both models, plus GSCA."""
    specs = [
        SchemeSpec(kind, model, seed, budget)
        for kind in (SchemeKind.CEN, SchemeKind.BFS, SchemeKind.CLQ, SchemeKind.MIS)
        for model in (ConflictModel.CONVENTIONAL, ConflictModel.ENHANCED)
    ]
    specs.append(SchemeSpec(SchemeKind.GSCA, ConflictModel.CONVENTIONAL, seed, budget, gsca_objective))
    return specs
