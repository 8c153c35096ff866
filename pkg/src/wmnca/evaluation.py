"""Ranking channel assignments and scoring estimators against observed orderings.

A :class:`CaSequence` lists CA labels in ascending order of (observed or
expected) performance. The error in sequence (EIS) between a reference and
a predicted sequence is the number of label pairs they order differently,
i.e. the Kendall-tau distance. The degree of confidence is
``(1 - EIS / C(n, 2)) * 100``.
"""

from __future__ import annotations

import csv
import enum
import itertools
import json
import math
from collections.abc import Iterable, Mapping
from dataclasses import dataclass, field
from pathlib import Path


class Direction(enum.Enum):
    HIGHER_IS_BETTER = "higher"
    LOWER_IS_BETTER = "lower"


TIE_WEIGHTS = {"half": 0.5, "full": 1.0, "none": 0.0}


@dataclass(frozen=True)
class CaSequence:
    labels: tuple[str, ...]
    # performance score per label, higher = better; equal scores are ties
    scores: dict[str, float] = field(compare=False)
    has_ties: bool = False

    @classmethod
    def from_order(cls, labels: Iterable[str]) -> "CaSequence":
        """Strict sequence from an explicit worst-to-best listing."""
        labels = tuple(labels)
        if len(set(labels)) != len(labels):
            raise ValueError("duplicate labels in sequence")
        return cls(labels, {lab: float(k) for k, lab in enumerate(labels)})

    def __len__(self):
        return len(self.labels)


def rank(values: Mapping[str, float] | Iterable[tuple[str, float]], direction: Direction) -> CaSequence:
    """Order labels by ascending performance; equal values tie-broken by label."""
    items = list(values.items()) if isinstance(values, Mapping) else list(values)
    labels = [lab for lab, _ in items]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate labels")
    if len(items) < 2:
        raise ValueError("need >= 2 CAs to rank")
    sign = 1.0 if direction is Direction.HIGHER_IS_BETTER else -1.0
    scores = {}
    for lab, v in items:
        v = float(v)
        if not math.isfinite(v):
            raise ValueError(f"non-finite value for {lab}")
        scores[lab] = sign * v
    ordered = tuple(sorted(scores, key=lambda lab: (scores[lab], lab)))
    return CaSequence(ordered, scores, len(set(scores.values())) < len(scores))


def _check_same_labels(a: CaSequence, b: CaSequence) -> None:
    if set(a.labels) != set(b.labels):
        diff = sorted(set(a.labels) ^ set(b.labels))
        raise ValueError(f"label sets differ: {diff}")


def compare_pairs(reference: CaSequence, predicted: CaSequence):
    """Split all label pairs into (discordant, half-tied) lists."""
    _check_same_labels(reference, predicted)
    discordant, tied = [], []
    for a, b in itertools.combinations(sorted(reference.labels), 2):
        r = reference.scores[a] - reference.scores[b]
        p = predicted.scores[a] - predicted.scores[b]
        if r == 0 and p == 0:
            continue
        if r == 0 or p == 0:
            tied.append((a, b))
        elif (r > 0) != (p > 0):
            discordant.append((a, b))
    return discordant, tied


def eis(reference: CaSequence, predicted: CaSequence, tie_policy: str = "half") -> float:
    """Number of pairwise comparisons the prediction gets wrong.

    A pair tied in exactly one of the two sequences counts as the policy
    weight (``half`` 0.5, ``full`` 1, ``none`` 0).
    """
    discordant, tied = compare_pairs(reference, predicted)
    value = len(discordant) + TIE_WEIGHTS[tie_policy] * len(tied)
    return int(value) if float(value).is_integer() else value


def doc(eis_value: float, n: int) -> float:
    if n < 2:
        raise ValueError("need n >= 2")
    total = math.comb(n, 2)
    if not 0 <= eis_value <= total:
        raise ValueError(f"EIS {eis_value} outside [0, {total}]")
    return (1.0 - eis_value / total) * 100.0


@dataclass(frozen=True)
class RankingReport:
    estimator: str
    performance_metric: str
    eis: float
    n: int
    doc_percent: float
    discordant_pairs: list[tuple[str, str]]
    tied_pairs: list[tuple[str, str]]

    @property
    def total_comparisons(self) -> int:
        return math.comb(self.n, 2)


def evaluate(
    reference: CaSequence,
    predicted: CaSequence,
    estimator: str = "",
    performance_metric: str = "",
    tie_policy: str = "half",
) -> RankingReport:
    discordant, tied = compare_pairs(reference, predicted)
    value = eis(reference, predicted, tie_policy)
    n = len(reference)
    return RankingReport(estimator, performance_metric, value, n, doc(value, n), discordant, tied)


REPORT_COLUMNS = ["estimator", "performance_metric", "eis", "n", "doc_percent"]


def write_report_csv(reports: Iterable[RankingReport], path) -> None:
    rows = sorted(reports, key=lambda r: (r.estimator, r.performance_metric))
    with open(path, "w", newline="") as fh:
        w = csv.writer(fh)
        w.writerow(REPORT_COLUMNS)
        for r in rows:
            w.writerow([r.estimator, r.performance_metric, r.eis, r.n, f"{r.doc_percent:.4f}"])


def write_discordant_json(reports: Iterable[RankingReport], path) -> None:
    out = [
        {
            "estimator": r.estimator,
            "performance_metric": r.performance_metric,
            "discordant_pairs": [list(p) for p in r.discordant_pairs],
            "tied_pairs": [list(p) for p in r.tied_pairs],
        }
        for r in sorted(reports, key=lambda r: (r.estimator, r.performance_metric))
    ]
    Path(path).write_text(json.dumps(out, indent=2))
