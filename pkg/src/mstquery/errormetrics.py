"""Hop distance and related prediction-error measures.

A predicted value implicitly predicts, for every other edge's open interval,
whether the true value falls left of it, inside it, or right of it.  The hop
distance counts the wrongly predicted relations over all ordered edge pairs.
It is a property of the original instance: queries made during a run never
change it.
"""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterable

from .graphcore import Interval, UncertainGraph

LEFT, INSIDE, RIGHT = -1, 0, 1


def relation(value: Fraction, interval: Interval) -> int:
    """Position of a value relative to an open interval."""
    if interval.is_trivial:
        raise ValueError("relations are defined against open intervals only")
    if value <= interval.low:
        return LEFT
    if value >= interval.high:
        return RIGHT
    return INSIDE


def relation_mismatches(graph: UncertainGraph, eid: int, value_a: Fraction, value_b: Fraction) -> int:
    """Number of other open intervals that separate value_a from value_b."""
    count = 0
    for other in graph.edges:
        if other.eid == eid or other.interval.is_trivial:
            continue
        if relation(value_a, other.interval) != relation(value_b, other.interval):
            count += 1
    return count


def hop_indicator(graph: UncertainGraph, eid: int, other_eid: int) -> int:
    """1 iff the predicted relation of edge eid's value to the other edge's
    interval is wrong.  Point intervals admit a single relation, so they
    contribute 0 on the interval side."""
    if eid == other_eid:
        raise ValueError("hop indicator needs two distinct edges")
    other = graph.edge(other_eid)
    if other.interval.is_trivial:
        return 0
    e = graph.edge(eid)
    return int(relation(e.true_value, other.interval) != relation(e.predicted_value, other.interval))


@dataclass(frozen=True)
class ErrorReport:
    jo: dict[int, int]   # per edge: wrong relations of its value to other intervals
    oj: dict[int, int]   # per edge: wrong relations of other values to its interval
    k_h: int
    k_sharp: int

    def jo_of(self, edge_ids: Iterable[int]) -> int:
        return sum(self.jo[e] for e in edge_ids)

    def oj_of(self, edge_ids: Iterable[int]) -> int:
        return sum(self.oj[e] for e in edge_ids)


def hop_distance(graph: UncertainGraph) -> ErrorReport:
    """Full per-edge hop report, frozen against the original instance."""
    jo = {e.eid: 0 for e in graph.edges}
    oj = {e.eid: 0 for e in graph.edges}
    for e in graph.edges:
        if e.true_value == e.predicted_value:
            continue
        for other in graph.edges:
            if other.eid == e.eid or other.interval.is_trivial:
                continue
            if relation(e.true_value, other.interval) != relation(e.predicted_value, other.interval):
                jo[e.eid] += 1
                oj[other.eid] += 1
    k_h = sum(jo.values())
    k_sharp = sum(1 for e in graph.edges if e.true_value != e.predicted_value)
    return ErrorReport(jo=jo, oj=oj, k_h=k_h, k_sharp=k_sharp)
