"""Learning predicted values under the hop-distance loss.

The loss of a candidate predicted value for one edge depends only on which
side of each other open interval's endpoints it falls, so each interval can
be discretized into the endpoints it contains plus one representative per
gap.  Training then minimizes the empirical per-edge loss independently.
"""

from __future__ import annotations

import json
import random
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping

from .errormetrics import relation
from .graphcore import ParseError, UncertainGraph, ValidationError, format_rational, parse_rational


@dataclass(frozen=True)
class CandidateGrid:
    """Per-edge finite candidate sets covering every distinct loss value."""

    per_edge: dict[int, tuple[Fraction, ...]]

    def candidates(self, eid: int) -> tuple[Fraction, ...]:
        return self.per_edge[eid]


def discretize(graph: UncertainGraph) -> CandidateGrid:
    """Breakpoints are the other open intervals' endpoints strictly inside the
    edge's interval; one midpoint per gap represents its loss class.  Trivial
    edges keep their single known value."""
    grid: dict[int, tuple[Fraction, ...]] = {}
    for e in graph.edges:
        if e.interval.is_trivial:
            grid[e.eid] = (e.interval.low,)
            continue
        breakpoints: set[Fraction] = set()
        for other in graph.edges:
            if other.eid == e.eid or other.interval.is_trivial:
                continue
            for limit in (other.interval.low, other.interval.high):
                if e.interval.low < limit < e.interval.high:
                    breakpoints.add(limit)
        cuts = [e.interval.low] + sorted(breakpoints) + [e.interval.high]
        values = set(breakpoints)
        for lo, hi in zip(cuts, cuts[1:]):
            values.add((lo + hi) / 2)
        grid[e.eid] = tuple(sorted(values))
    return CandidateGrid(grid)


class RealizationSampler:
    """Seeded sampler over per-edge finite mixtures of rational point masses.

    Every sampled value lies strictly inside its open interval (or equals the
    trivial value).  Edges without an explicit mixture default to a point
    mass at their true value.
    """

    def __init__(self, graph: UncertainGraph, mixtures: Mapping[int, tuple[list[Fraction], list[int]]], seed: int = 0):
        self.graph = graph
        self.mixtures: dict[int, tuple[list[Fraction], list[int]]] = {}
        for e in graph.edges:
            values, weights = mixtures.get(e.eid, ([e.true_value], [1]))
            if len(values) != len(weights) or not values:
                raise ValidationError(f"edge {e.eid}: malformed mixture")
            if any(w <= 0 for w in weights):
                raise ValidationError(f"edge {e.eid}: mixture weights must be positive")
            for v in values:
                if e.interval.is_trivial:
                    if v != e.interval.low:
                        raise ValidationError(f"edge {e.eid}: trivial edge admits only its value")
                elif not e.interval.contains(v):
                    raise ValidationError(f"edge {e.eid}: mixture value {v} outside the open interval")
            self.mixtures[e.eid] = (list(values), list(weights))
        self._rng = random.Random(seed)

    @classmethod
    def from_json(cls, graph: UncertainGraph, text: str, seed: int = 0) -> "RealizationSampler":
        try:
            raw = json.loads(text)
            entries = raw["edges"]
        except (json.JSONDecodeError, KeyError, TypeError) as exc:
            raise ParseError(f"malformed distribution document: {exc}") from exc
        mixtures = {}
        for key, spec in entries.items():
            values = [parse_rational(v) for v in spec["values"]]
            weights = [int(w) for w in spec.get("weights", [1] * len(values))]
            mixtures[int(key)] = (values, weights)
        return cls(graph, mixtures, seed=seed)

    def sample(self) -> dict[int, Fraction]:
        out = {}
        for e in self.graph.edges:
            values, weights = self.mixtures[e.eid]
            out[e.eid] = self._rng.choices(values, weights=weights, k=1)[0]
        return out


def _edge_loss(graph: UncertainGraph, eid: int, true_value: Fraction, candidate: Fraction) -> int:
    count = 0
    for other in graph.edges:
        if other.eid == eid or other.interval.is_trivial:
            continue
        if relation(true_value, other.interval) != relation(candidate, other.interval):
            count += 1
    return count


def erm_train(graph: UncertainGraph, sampler: RealizationSampler, m: int) -> dict[int, Fraction]:
    """Empirical risk minimization over the candidate grid.

    Draws m full realizations, then independently picks per edge the
    candidate with minimum empirical hop loss (ascending-value tie-break).
    """
    if m < 1:
        raise ValueError("need at least one sample")
    grid = discretize(graph)
    samples = [sampler.sample() for _ in range(m)]
    learned: dict[int, Fraction] = {}
    for e in graph.edges:
        best = None
        best_loss = None
        for candidate in grid.candidates(e.eid):
            loss = sum(_edge_loss(graph, e.eid, s[e.eid], candidate) for s in samples)
            if best_loss is None or loss < best_loss:
                best, best_loss = candidate, loss
        learned[e.eid] = best
    return learned


def expected_edge_loss(graph: UncertainGraph, sampler: RealizationSampler, eid: int, candidate: Fraction) -> Fraction:
    """Exact expectation of the per-edge hop loss under the sampler's mixture."""
    values, weights = sampler.mixtures[eid]
    total = sum(weights)
    acc = Fraction(0)
    for v, w in zip(values, weights):
        acc += Fraction(w, total) * _edge_loss(graph, eid, v, candidate)
    return acc


def expected_hop_loss(graph: UncertainGraph, sampler: RealizationSampler, predictions: Mapping[int, Fraction]) -> Fraction:
    return sum(
        (expected_edge_loss(graph, sampler, e.eid, predictions[e.eid]) for e in graph.edges),
        Fraction(0),
    )


def grid_optimal(graph: UncertainGraph, sampler: RealizationSampler) -> dict[int, Fraction]:
    """Exhaustive per-edge minimizer of the exact expected loss over the grid."""
    grid = discretize(graph)
    best: dict[int, Fraction] = {}
    for e in graph.edges:
        candidates = grid.candidates(e.eid)
        losses = [(expected_edge_loss(graph, sampler, e.eid, c), c) for c in candidates]
        best[e.eid] = min(losses)[1]
    return best


def predictions_to_json(predictions: Mapping[int, Fraction]) -> str:
    return json.dumps(
        {str(eid): format_rational(v) for eid, v in sorted(predictions.items())}, indent=2
    )
