"""Risk-adjusted ranking of candidate market periods and shift advice.

Three comparison rules, applied in order:

1. interval dominance: A's interval lower limit above B's upper limit;
2. mean dominance: A's mean above B's upper limit (1 is a special case of 2
   because a valid summary has lower <= mean);
3. FLAP comparison: higher mean/sd wins, exact ties to the earlier
   calendar period.

Rules 1-2 define a strict partial order (asymmetric and transitive whenever
every summary satisfies lower <= mean <= upper, which summary construction
enforces).  ``rank_periods`` totalizes it with a greedy linear extension:
among the periods not dominated by any remaining period, take the one with
the highest FLAP.  With no dominance at all this degenerates to pure FLAP
descending order.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .bootstrap import FlapSummary
from .errors import UnknownPeriodError
from .market_data import MONTH_LABELS

_MONTH_INDEX = {label.lower(): i + 1 for i, label in enumerate(MONTH_LABELS)}


def period_position(label: str) -> tuple[str, int]:
    """Calendar position of a period label: ('month', 1..12) or ('week', k)."""
    key = label.strip().lower()
    if key in _MONTH_INDEX:
        return "month", _MONTH_INDEX[key]
    if key.startswith("w") and key[1:].isdigit():
        k = int(key[1:])
        if k >= 1:
            return "week", k
    raise UnknownPeriodError(f"unrecognized period label: {label!r}")


def calendar_index(label: str) -> int:
    return period_position(label)[1]


def flap_index(values) -> float:
    """Mean over sample sd of a price list; ``inf`` when the sd is zero."""
    arr = np.asarray(values, dtype=float)
    if arr.size < 2:
        raise ValueError("flap_index needs at least 2 values")
    sd = float(arr.std(ddof=1))
    if sd == 0.0:
        return math.inf
    return float(arr.mean()) / sd


@dataclass(frozen=True)
class DominanceEdge:
    winner: str
    loser: str
    rule: int  # 1 or 2


@dataclass(frozen=True)
class Comparison:
    """Outcome of a pairwise period comparison: always a winner."""

    winner: str
    loser: str
    rule: int  # 1, 2, or 3


def dominance(a: FlapSummary, b: FlapSummary) -> DominanceEdge | None:
    """Rule-1/2 dominance between two summaries, or None.

    At most one direction can hold: both at once would need each mean to
    exceed the other's upper limit, impossible when means sit inside their
    intervals.
    """
    for first, second in ((a, b), (b, a)):
        if first.ci.lower > second.ci.upper:
            return DominanceEdge(winner=first.period_label, loser=second.period_label, rule=1)
        if first.mean > second.ci.upper:
            return DominanceEdge(winner=first.period_label, loser=second.period_label, rule=2)
    return None


def compare_periods(a: FlapSummary, b: FlapSummary) -> Comparison:
    """Pick the better of two periods: Rule 1, then Rule 2, then FLAP.

    Exact FLAP ties go to the earlier calendar period, so the comparison is
    total and deterministic.
    """
    edge = dominance(a, b)
    if edge is not None:
        loser = b if edge.winner == a.period_label else a
        return Comparison(winner=edge.winner, loser=loser.period_label, rule=edge.rule)
    if a.flap != b.flap:
        winner, loser = (a, b) if a.flap > b.flap else (b, a)
    else:
        winner, loser = sorted((a, b), key=lambda s: calendar_index(s.period_label))
    return Comparison(winner=winner.period_label, loser=loser.period_label, rule=3)


@dataclass(frozen=True)
class RankedPeriod:
    rank: int  # 1 = most attractive
    summary: FlapSummary

    @property
    def period_label(self) -> str:
        return self.summary.period_label


@dataclass(frozen=True)
class Ranking:
    """Total order over periods plus the dominance edges that constrained it."""

    entries: tuple[RankedPeriod, ...]
    dominance_edges: tuple[DominanceEdge, ...]

    def __len__(self) -> int:
        return len(self.entries)

    def rank_of(self, period_label: str) -> int:
        for entry in self.entries:
            if entry.period_label == period_label:
                return entry.rank
        raise UnknownPeriodError(f"unknown period: {period_label!r}")

    def labels_by_rank(self) -> list[str]:
        return [entry.period_label for entry in self.entries]


def rank_periods(summaries: list[FlapSummary]) -> Ranking:
    """Greedy max-FLAP linear extension of the Rule-1/2 dominance order."""
    if not summaries:
        raise ValueError("rank_periods needs at least one summary")
    labels = [s.period_label for s in summaries]
    if len(set(labels)) != len(labels):
        raise ValueError("duplicate period labels")
    kinds = {period_position(label)[0] for label in labels}
    if len(kinds) > 1:
        raise ValueError("cannot rank months and weeks together")

    edges = []
    for i, a in enumerate(summaries):
        for b in summaries[i + 1 :]:
            edge = dominance(a, b)
            if edge is not None:
                edges.append(edge)
    dominators: dict[str, set[str]] = {label: set() for label in labels}
    for edge in edges:
        dominators[edge.loser].add(edge.winner)

    remaining = {s.period_label: s for s in summaries}
    ordered: list[RankedPeriod] = []
    while remaining:
        free = [
            s for label, s in remaining.items()
            if not (dominators[label] & remaining.keys())
        ]
        # Highest FLAP first; exact ties resolved by calendar position.
        pick = min(free, key=lambda s: (-s.flap, calendar_index(s.period_label)))
        ordered.append(RankedPeriod(rank=len(ordered) + 1, summary=pick))
        del remaining[pick.period_label]

    return Ranking(entries=tuple(ordered), dominance_edges=tuple(edges))


@dataclass(frozen=True)
class BetterPeriod:
    period_label: str
    rank: int
    calendar_distance: int


@dataclass(frozen=True)
class Advice:
    """Shift suggestion: better-ranked periods, nearest in the calendar first."""

    current_period: str
    current_rank: int
    better_periods: tuple[BetterPeriod, ...]

    @property
    def stay(self) -> bool:
        return not self.better_periods


def _circular_distance(i: int, j: int, cycle: int) -> int:
    d = abs(i - j) % cycle
    return min(d, cycle - d)


def advise_shift(
    ranking: Ranking,
    current_period: str,
    max_calendar_distance: int | None = None,
) -> Advice:
    """All strictly better-ranked periods, nearest-in-calendar first.

    Distance is circular over the period cycle (12 for months; the window
    length for weeks), with ties broken by rank.  ``max_calendar_distance``
    truncates the list; when nothing better remains, the advice is to stay.
    """
    current_rank = ranking.rank_of(current_period)
    kind, current_pos = period_position(current_period)
    if kind == "month":
        cycle = 12
    else:
        cycle = max(calendar_index(e.period_label) for e in ranking.entries)

    better = []
    for entry in ranking.entries:
        if entry.rank >= current_rank:
            continue
        distance = _circular_distance(calendar_index(entry.period_label), current_pos, cycle)
        if max_calendar_distance is not None and distance > max_calendar_distance:
            continue
        better.append(BetterPeriod(entry.period_label, entry.rank, distance))
    better.sort(key=lambda bp: (bp.calendar_distance, bp.rank))

    return Advice(
        current_period=current_period,
        current_rank=current_rank,
        better_periods=tuple(better),
    )
