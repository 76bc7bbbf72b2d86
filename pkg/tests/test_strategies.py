import random
from fractions import Fraction

import pytest

from mstquery import factory
from mstquery.graphcore import Interval, PreconditionViolated, QueryRun, UncertainEdge, UncertainGraph
from mstquery.errormetrics import hop_distance
from mstquery.limittrees import compute_limit_trees, ensure_unique_limit_trees, is_solved
from mstquery.oracle import (
    mandatory_edges,
    opt_brute_force,
    prediction_mandatory_edges,
)
from mstquery.strategies import (
    StrategyConfig,
    build_vc_instance,
    make_prediction_mandatory_free,
    phase2_error_sensitive,
    phase2_tradeoff,
    randomized_gamma,
    run_baseline,
    run_combined,
)


def two_candidate_cycle():
    """Triangle with two intersecting intervals competing for the maximum."""
    edges = [
        UncertainEdge(0, 0, 1, Interval.point(-5), Fraction(-5), Fraction(-5)),
        UncertainEdge(1, 1, 2, Interval.open(0, 10), Fraction(6), Fraction(6)),
        UncertainEdge(2, 0, 2, Interval.open(4, 12), Fraction(11), Fraction(11)),
    ]
    return UncertainGraph(3, edges)


# -- baseline ---------------------------------------------------------------


def test_baseline_zero_queries_when_solved():
    g = factory.gen_random(5, 3, 0.0, 0.0, seed=9)
    run = QueryRun(g)
    run_baseline(run)
    assert run.query_count == 0


def test_baseline_pays_double_on_intersecting_pair():
    g = two_candidate_cycle()
    assert opt_brute_force(g).size == 1
    run = QueryRun(g)
    run_baseline(run)
    assert run.query_count == 2


@pytest.mark.parametrize("seed", range(60))
def test_baseline_two_competitive(seed):
    g = factory.gen_random(4 + seed % 3, 2 + seed % 4, (0.6, 0.9, 1.0)[seed % 3], 0.6, seed=2000 + seed)
    opt = opt_brute_force(g).size
    run = QueryRun(g)
    run_baseline(run)
    assert run.query_count <= 2 * opt
    assert is_solved(run) is not None or not run.present_ids()


# -- witness identification (fresh instances with unique trees) --------------


@pytest.mark.parametrize("seed", range(20))
def test_cycle_witness_pairs_hit_every_optimal_set(seed):
    g = factory.gen_random(4, 3, 1.0, 0.5, seed=2100 + seed)
    run = QueryRun(g)
    if ensure_unique_limit_trees(run, reduce=False):
        return  # preprocessing altered the instance; covered by other seeds
    trees = compute_limit_trees(run)
    opt_sets = opt_brute_force(g, collect_all=True).all_optimal_sets
    mand = mandatory_edges(g)
    for f in trees.nontree_order:
        f_iv = run.interval(f)
        cands = [e for e in trees.cycle_of(f) if e != f and run.interval(e).intersects(f_iv)]
        if not cands:
            continue
        l = min(cands, key=lambda e: (-run.interval(e).high, e))
        assert all(opt & {f, l} for opt in opt_sets)
        truth = g.edge(f).true_value
        if run.interval(l).contains(truth):
            assert l in mand


@pytest.mark.parametrize("seed", range(15))
def test_cut_witness_pairs_hit_every_optimal_set(seed):
    g = factory.gen_random(4, 3, 1.0, 0.5, seed=2150 + seed)
    run = QueryRun(g)
    if ensure_unique_limit_trees(run, reduce=False):
        return
    trees = compute_limit_trees(run)
    opt_sets = opt_brute_force(g, collect_all=True).all_optimal_sets
    mand = mandatory_edges(g)
    earlier: set[int] = set()
    for f in trees.nontree_order:
        f_iv = run.interval(f)
        for l in trees.cycle_of(f):
            if l == f or l in earlier or not run.interval(l).intersects(f_iv):
                continue
            # l appears for the first time on this cycle
            assert all(opt & {f, l} for opt in opt_sets)
            if f_iv.contains(g.edge(l).true_value):
                assert f in mand
        earlier.update(e for e in trees.cycle_of(f) if e != f)


@pytest.mark.parametrize("idx", range(30))
def test_safe_order_keeps_pairs_as_witness_sets(idx, pred_free_corpus):
    # walking the ordered cover, as long as every reveal confirmed the
    # predicted relations, the next element and its partner form a witness
    # set of the current residual instance
    g = pred_free_corpus[(idx * 11 + 3) % len(pred_free_corpus)]
    run = QueryRun(g)
    trees = compute_limit_trees(run)
    vc = build_vc_instance(run, trees)
    from mstquery.strategies import _observed_error, _phase2_lists

    f_list, l_list = _phase2_lists(run, trees, vc.cover)
    for e in f_list + l_list:
        partner = vc.matching[e]
        opt_sets = opt_brute_force(run, collect_all=True).all_optimal_sets
        assert all(opt & {e, partner} for opt in opt_sets)
        if _observed_error(run, e, run.reveal(e)):
            break


# -- preprocessing (making instances prediction mandatory free) --------------


def test_preprocessing_noop_on_pred_free_instance():
    g = factory.gen_random_pred_free(5, 3, seed=5)
    run = QueryRun(g)
    ledger = make_prediction_mandatory_free(run, 3)
    assert ledger.queries == [] and run.query_count == 0


def test_preprocessing_solves_demo_cycle():
    g = factory.demo_mandatory_cycle()
    run = QueryRun(g)
    ledger = make_prediction_mandatory_free(run, 2)
    assert prediction_mandatory_edges(run) == set()
    # the offending cycle resolves through the cut-side two-step rule,
    # querying the closing edge and then the still-ambiguous tree edge
    assert ledger.queries == [0, 1]
    assert is_solved(run) is not None or not run.present_ids()


def preprocessing_accounting_holds(g, ledger, gamma):
    """min{(1+1/g)(|(ALG∪D)∩OPT| + jo(ALG) + oj(ALG)), g|(ALG∪D)∩OPT| + g-2}
    for the best choice among all optimal sets."""
    report = hop_distance(g)
    alg = set(ledger.queries)
    jo = report.jo_of(alg)
    oj = report.oj_of(alg)
    removed = set(ledger.removed_unqueried)
    lhs = len(alg)
    for opt_set in opt_brute_force(g, collect_all=True).all_optimal_sets:
        hit = len((alg | removed) & opt_set)
        bound = min(
            Fraction(gamma + 1, gamma) * (hit + jo + oj), gamma * hit + gamma - 2
        )
        if lhs <= bound:
            return True
    return False


@pytest.mark.parametrize("seed", range(40))
@pytest.mark.parametrize("gamma", [2, 3])
def test_preprocessing_query_accounting(seed, gamma):
    g = factory.gen_random(4, 3, (0.8, 1.0)[seed % 2], 0.5, seed=2200 + seed)
    run = QueryRun(g)
    ledger = make_prediction_mandatory_free(run, gamma)
    assert prediction_mandatory_edges(run) == set()
    assert preprocessing_accounting_holds(g, ledger, gamma)
    # unqueried two-step partners really left the instance
    for partner in ledger.case_partners.values():
        assert not run.is_present(partner)
        assert partner in ledger.removed_unqueried or partner in set(ledger.queries)


@pytest.mark.parametrize("seed", range(15))
def test_first_case_group_intersections(seed):
    g = factory.gen_random(4, 4, 1.0, 0.5, seed=2300 + seed)
    run = QueryRun(g)
    ledger = make_prediction_mandatory_free(run, 2)
    if not ledger.case_groups:
        return
    first = ledger.case_groups[0]
    if ledger.queries[: len(first)] != first:
        return  # uniqueness queries preceded the first case
    opt_sets = opt_brute_force(g, collect_all=True).all_optimal_sets
    if len(first) == 3:
        assert all(len(set(first) & opt_set) >= 2 for opt_set in opt_sets)
    elif len(first) == 2:
        assert all(set(first) & opt_set for opt_set in opt_sets)


@pytest.mark.parametrize("seed", range(10))
def test_pred_free_state_persists_under_further_queries(seed):
    rng = random.Random(seed)
    g = factory.gen_random(5, 3, 0.9, 0.5, seed=2400 + seed)
    run = QueryRun(g)
    make_prediction_mandatory_free(run, 2)
    while run.non_trivial_ids():
        run.reveal(rng.choice(run.non_trivial_ids()))
        ensure_unique_limit_trees(run)
        assert prediction_mandatory_edges(run) == set()


# -- vertex cover instances ---------------------------------------------------


def test_back_edge_family_cover_sides():
    g = factory.gen_vc_flip(8, "ex1")
    vc = build_vc_instance(QueryRun(g))
    k = 4
    assert len(vc.cover) == k
    assert vc.edge_count() == k * k  # complete bipartite
    assert len(vc.matched_pairs()) == len(vc.cover)
    # both sides cover everything, so both are minimum covers
    assert set(vc.left) == {0, 1, 2, 3} and set(vc.right) == {4, 5, 6, 7}


def test_back_edge_family_small_cover():
    g = factory.gen_vc_flip(8, "ex2")
    vc = build_vc_instance(QueryRun(g))
    assert vc.cover == frozenset({0, 4})


def test_cover_flip_after_scripted_reveals():
    g = factory.gen_vc_flip(8, "ex2")
    run = QueryRun(g)
    run.reveal(4)
    run.reveal(0)
    ensure_unique_limit_trees(run)
    assert run.removed[0] == "deleted" and run.removed[4] == "contracted"
    vc = build_vc_instance(run)
    assert len(vc.cover) == 3
    # the remnant has the shape of the all-spanning variant one size down:
    # a complete bipartite cover instance on the surviving six edges
    assert len(run.present_ids()) == 6
    assert vc.edge_count() == 9


def test_empty_cover_on_disjoint_instance():
    g = factory.gen_random(5, 3, 0.0, 0.0, seed=12)
    run = QueryRun(g)
    ensure_unique_limit_trees(run, reduce=False)
    vc = build_vc_instance(run)
    assert vc.cover == frozenset() and vc.edge_count() == 0


@pytest.mark.parametrize("seed", range(25))
def test_koenig_duality_on_random_pred_free(seed):
    g = factory.gen_random_pred_free(4 + seed % 3, 2 + seed % 3, seed=2500 + seed)
    vc = build_vc_instance(QueryRun(g))
    assert len(vc.matched_pairs()) == len(vc.cover)
    for l, r in vc.matched_pairs():
        assert (l in vc.cover) != (r in vc.cover)
    for l, rights in vc.adjacency.items():
        for r in rights:
            assert l in vc.cover or r in vc.cover


def test_vc_requires_pred_free():
    g = factory.demo_mandatory_cycle()
    with pytest.raises(PreconditionViolated):
        build_vc_instance(QueryRun(g))


# -- phase 2, tradeoff ---------------------------------------------------------


def test_phase2_queries_exactly_the_cover_when_right():
    g = factory.with_correct_predictions(factory.gen_vc_flip(8, "ex2"))
    run = QueryRun(g)
    report = phase2_tradeoff(run)
    assert not report.handoff
    assert set(run.queried) == {0, 4}


def test_phase2_zero_queries_on_empty_cover():
    g = factory.gen_random(5, 3, 0.0, 0.0, seed=13)
    run = QueryRun(g)
    ensure_unique_limit_trees(run, reduce=False)
    phase2_tradeoff(run)
    assert run.query_count == 0


def test_phase2_rejects_instances_with_pred_mandatory_edges():
    g = factory.demo_mandatory_cycle()
    with pytest.raises(PreconditionViolated):
        phase2_tradeoff(QueryRun(g))


@pytest.mark.parametrize("idx", range(60))
def test_phase2_tradeoff_bounds(idx, pred_free_corpus):
    g = pred_free_corpus[idx * 5 % len(pred_free_corpus)]
    opt = opt_brute_force(g).size
    k_h = hop_distance(g).k_h
    run = QueryRun(g)
    phase2_tradeoff(run)
    assert run.query_count <= 2 * opt
    if k_h == 0:
        assert run.query_count == opt


# -- phase 2, error-sensitive ----------------------------------------------------


def test_error_sensitive_matches_tradeoff_on_correct_predictions():
    g = factory.with_correct_predictions(factory.gen_vc_flip(8, "ex2"))
    run_a, run_b = QueryRun(g), QueryRun(g)
    phase2_tradeoff(run_a)
    phase2_error_sensitive(run_b)
    assert set(run_a.queried) == set(run_b.queried)


@pytest.mark.parametrize("idx", range(60))
def test_error_sensitive_bounds_and_ledger(idx, pred_free_corpus):
    g = pred_free_corpus[(idx * 7 + 1) % len(pred_free_corpus)]
    opt = opt_brute_force(g).size
    k_h = hop_distance(g).k_h
    run = QueryRun(g)
    ledger = phase2_error_sensitive(run)
    assert run.query_count <= min(opt + 5 * k_h, 3 * opt)
    # the four query classes partition the transcript
    assert sorted(ledger.all_queries()) == sorted(run.queried)
    # pairs (listed edge, partner at query time) are pairwise disjoint
    seen = set()
    for e, partner in ledger.pair_at_query.items():
        assert e not in seen and partner not in seen
        seen.update({e, partner})
    # a deferred element never re-enters a retained matching afterwards
    for tick, endpoints in ledger.retained:
        for w, entered in ledger.deferred_entry.items():
            if entered < tick:
                assert w not in endpoints


# -- combined runners -------------------------------------------------------------


def test_combined_tradeoff_cycle_consistency_and_robustness():
    for beta in (2, 3, 4):
        calm = factory.gen_tradeoff_cycle(beta, adversarial=False)
        out = run_combined(calm, StrategyConfig(gamma=beta, mode="tradeoff"))
        assert out.report.opt == beta and out.report.queries == beta + 1
        rough = factory.gen_tradeoff_cycle(beta, adversarial=True)
        out = run_combined(rough, StrategyConfig(gamma=beta, mode="tradeoff"))
        assert out.report.opt == 1 and out.report.queries <= beta


def test_combined_error_sensitive_on_triangle_chain():
    for n in (1, 2, 3):
        g = factory.gen_triangle_chain(n)
        out = run_combined(g, StrategyConfig(gamma=2, mode="error_sensitive"))
        rep = out.report
        assert rep.opt == n and rep.k_h == n
        assert rep.queries <= min(Fraction(3, 2) * rep.opt + 5 * rep.k_h, 3 * rep.opt)


def test_combined_reports_ratio_and_bounds():
    g = factory.gen_triangle_chain(2)
    out = run_combined(g, StrategyConfig(gamma=2, mode="tradeoff"), instance_label="tri2")
    rep = out.report
    assert rep.instance == "tri2"
    assert rep.ratio == Fraction(rep.queries, rep.opt)
    assert rep.robustness_ok is True
    d = rep.to_dict()
    assert d["queries"] == rep.queries and d["opt"] == rep.opt


def test_strategy_config_validation():
    with pytest.raises(ValueError):
        StrategyConfig(gamma=1, mode="tradeoff")
    with pytest.raises(ValueError):
        StrategyConfig(gamma=2, mode="nonsense")


def test_randomized_gamma_exact_expectations():
    g = factory.gen_triangle_chain(1)
    out = randomized_gamma(g, Fraction(5, 2), seed=3)
    rep = out.report
    assert rep.gamma_effective in (2, 3)
    assert rep.expected_inverse_gamma == Fraction(5, 12)
    assert rep.rounding_slack == Fraction(1, 60)
    assert rep.expected_inverse_gamma <= Fraction(2, 5) + rep.rounding_slack
    # integral parameter: deterministic, no slack
    out = randomized_gamma(g, Fraction(3), seed=3)
    assert out.report.gamma_effective == 3 and out.report.rounding_slack == 0


def test_randomized_gamma_is_seed_deterministic():
    g = factory.gen_triangle_chain(1)
    a = randomized_gamma(g, Fraction(5, 2), seed=11).report.gamma_effective
    b = randomized_gamma(g, Fraction(5, 2), seed=11).report.gamma_effective
    assert a == b
