import json
from fractions import Fraction

import pytest

from mstquery import factory
from mstquery.graphcore import Interval, UncertainEdge, UncertainGraph, ValidationError
from mstquery.learner import (
    RealizationSampler,
    discretize,
    erm_train,
    expected_edge_loss,
    expected_hop_loss,
    predictions_to_json,
)
from mstquery.errormetrics import hop_distance


def triangle():
    return factory.gen_triangle_chain(1)


def test_grid_on_isolated_interval_is_single_midpoint():
    edges = [
        UncertainEdge(0, 0, 1, Interval.open(0, 2), Fraction(1), Fraction(1)),
        UncertainEdge(1, 1, 2, Interval.open(10, 12), Fraction(11), Fraction(11)),
        UncertainEdge(2, 0, 2, Interval.open(20, 22), Fraction(21), Fraction(21)),
    ]
    g = UncertainGraph(3, edges)
    grid = discretize(g)
    assert grid.candidates(0) == (Fraction(1),)


def test_grid_counts_breakpoints_and_gaps():
    g = factory.demo_hop_cycle()
    # interval (3/2, 6) contains the limits 5/2, 3 and 4 of the other edges:
    # three breakpoints plus four gap representatives
    assert len(discretize(g).candidates(1)) == 7


def test_grid_of_trivial_edge_is_its_value():
    g = factory.gen_triangle_chain(2)
    trivial = [e.eid for e in g.edges if e.interval.is_trivial][0]
    assert discretize(g).candidates(trivial) == (g.edge(trivial).true_value,)


def test_grid_candidates_lie_inside_interval():
    g = factory.gen_random(5, 4, 1.0, 0.0, seed=21)
    grid = discretize(g)
    for e in g.edges:
        for c in grid.candidates(e.eid):
            assert e.interval.low < c < e.interval.high


def test_grid_best_matches_dense_sweep():
    g = triangle()
    mix = {0: ([Fraction(1, 4), Fraction(7, 4)], [2, 5])}
    sampler = RealizationSampler(g, mix, seed=1)
    grid = discretize(g)
    grid_best = min(expected_edge_loss(g, sampler, 0, c) for c in grid.candidates(0))
    e0 = g.edge(0)
    dense = [
        e0.interval.low + Fraction(k, 64) * (e0.interval.high - e0.interval.low)
        for k in range(1, 64)
    ]
    dense_best = min(expected_edge_loss(g, sampler, 0, c) for c in dense)
    assert grid_best == dense_best


def test_sampler_rejects_values_outside_interval():
    g = triangle()
    with pytest.raises(ValidationError):
        RealizationSampler(g, {0: ([Fraction(5)], [1])})


def test_sampler_stays_inside_intervals():
    g = triangle()
    sampler = RealizationSampler(
        g, {0: ([Fraction(1, 2), Fraction(3, 2)], [1, 1])}, seed=3
    )
    for _ in range(50):
        w = sampler.sample()
        for e in g.edges:
            assert e.interval.contains(w[e.eid])


def test_sampler_from_json_roundtrip():
    g = triangle()
    text = json.dumps(
        {"edges": {"0": {"values": ["1/2", "3/2"], "weights": [1, 3]}}}
    )
    sampler = RealizationSampler.from_json(g, text, seed=5)
    assert sampler.mixtures[0] == ([Fraction(1, 2), Fraction(3, 2)], [1, 3])


def test_point_mass_training_reproduces_relations():
    g = triangle()
    sampler = RealizationSampler(g, {}, seed=7)  # point masses at the truths
    learned = erm_train(g, sampler, 5)
    relabeled = UncertainGraph(
        g.vertex_count,
        [
            UncertainEdge(e.eid, e.u, e.v, e.interval, e.true_value, learned[e.eid])
            for e in g.edges
        ],
    )
    assert hop_distance(relabeled).k_h == 0


def test_single_sample_training_has_zero_empirical_loss():
    g = triangle()
    mix = {0: ([Fraction(1, 2), Fraction(3, 2)], [1, 1])}
    sampler = RealizationSampler(g, mix, seed=11)
    sample_peek = RealizationSampler(g, mix, seed=11).sample()
    learned = erm_train(g, sampler, 1)
    from mstquery.learner import _edge_loss

    for e in g.edges:
        assert _edge_loss(g, e.eid, sample_peek[e.eid], learned[e.eid]) == 0


def test_learned_values_lie_inside_intervals():
    g = factory.gen_random(5, 3, 0.9, 0.0, seed=31)
    sampler = RealizationSampler(g, {}, seed=13)
    learned = erm_train(g, sampler, 20)
    for e in g.edges:
        assert e.interval.contains(learned[e.eid])


def test_total_loss_decomposes_per_edge():
    g = triangle()
    mix = {
        0: ([Fraction(1, 2), Fraction(3, 2)], [1, 3]),
        1: ([Fraction(3, 2), Fraction(5, 2)], [1, 2]),
    }
    sampler = RealizationSampler(g, mix, seed=17)
    learned = erm_train(g, sampler, 50)
    total = expected_hop_loss(g, sampler, learned)
    parts = sum(
        (expected_edge_loss(g, sampler, e.eid, learned[e.eid]) for e in g.edges),
        Fraction(0),
    )
    assert total == parts


def test_more_samples_do_not_hurt():
    g = triangle()
    mix = {
        0: ([Fraction(1, 2), Fraction(3, 2)], [1, 3]),
        1: ([Fraction(3, 2), Fraction(5, 2)], [2, 1]),
    }
    reference = RealizationSampler(g, mix, seed=0)
    wins = 0
    for t in range(50):
        small = erm_train(g, RealizationSampler(g, mix, seed=100 + t), 10)
        large = erm_train(g, RealizationSampler(g, mix, seed=200 + t), 400)
        if expected_hop_loss(g, reference, large) <= expected_hop_loss(
            g, reference, small
        ) + Fraction(1, 2):
            wins += 1
    assert wins >= 45


def test_predictions_serialize():
    g = triangle()
    sampler = RealizationSampler(g, {}, seed=19)
    learned = erm_train(g, sampler, 5)
    body = json.loads(predictions_to_json(learned))
    assert set(body) == {"0", "1", "2"}
