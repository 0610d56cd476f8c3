import math
import random

import numpy as np
import pytest

from adaptim.exact import exact_expected_spread, min_seeds_for_target
from adaptim.graph import generate_synthetic, load_edge_list
from adaptim.mintss import (
    MintssSpec,
    TargetUnreachable,
    evaluate_mintss,
    mintss_adaptive,
    mintss_non_adaptive,
)
from adaptim.worlds import PossibleWorld, sample_world
from conftest import random_small_graph


def test_spec_validation():
    g = random_small_graph(random.Random(1))
    with pytest.raises(ValueError):
        MintssSpec(Q=g.n + 1.0).validate(g.n)
    with pytest.raises(ValueError):
        MintssSpec(Q=2.0, beta=2.0).validate(g.n)


def test_nonadaptive_q1_one_seed():
    g = random_small_graph(random.Random(2), n_min=4)
    spec = MintssSpec(Q=1.0, beta=0.5, rr_count=500)
    assert len(mintss_non_adaptive(g, spec)) == 1


def test_nonadaptive_full_cascade_one_seed():
    # strongly connected cycle with p=1: any single seed reaches all
    g, _ = load_edge_list("0 1 1\n1 2 1\n2 3 1\n3 0 1\n")
    spec = MintssSpec(Q=4.0, beta=0.5, rr_count=500)
    assert len(mintss_non_adaptive(g, spec)) == 1


def test_nonadaptive_unreachable_raises():
    g, _ = load_edge_list("0 1 0\n1 2 0\n")
    spec = MintssSpec(Q=3.0, beta=0.5, rr_count=500, seed_cap=1)
    with pytest.raises(TargetUnreachable):
        mintss_non_adaptive(g, spec)


def test_nonadaptive_bicriteria_bound_small():
    rng = random.Random(5)
    done = 0
    trial = 0
    while done < 6:
        trial += 1
        g = random_small_graph(rng, n_min=5, n_max=9, m_max=12, p_lo=0.3, p_hi=0.9)
        q = rng.uniform(2.0, g.n * 0.8)
        beta = 1.0
        opt = min_seeds_for_target(g, q)
        if opt is None:
            continue
        spec = MintssSpec(Q=q, beta=beta, rr_count=20_000)
        try:
            seeds = mintss_non_adaptive(g, spec, seed=trial)
        except TargetUnreachable:
            continue
        bound = opt[0] * (1 + math.log(math.ceil(q / beta)))
        assert len(seeds) <= bound + 1e-9
        done += 1


def test_adaptive_immediate_satisfaction():
    # first seed's live component covers Q
    g, _ = load_edge_list("0 1 1\n1 2 1\n3 4 0.5\n")
    w = PossibleWorld(g, [True, True, False])
    spec = MintssSpec(Q=3.0, beta=1.0, rr_count=500)
    trace = mintss_adaptive(g, spec, w, 0)
    assert trace.seeds_used == 1 and trace.final_active >= 3


def test_adaptive_no_live_edges_needs_q_seeds():
    g, _ = load_edge_list("0 1 0.5\n1 2 0.5\n2 3 0.5\n3 4 0.5\n")
    w = PossibleWorld(g, [False] * 4)
    spec = MintssSpec(Q=5.0, beta=1.0, rr_count=500)
    trace = mintss_adaptive(g, spec, w, 0)
    assert trace.seeds_used == 5 and trace.final_active == 5


def test_adaptive_hit_rate_one_unbounded():
    g = random_small_graph(random.Random(7), n_min=6, n_max=9)
    spec = MintssSpec(Q=0.5 * g.n, beta=1.0, rr_count=500)
    rep = evaluate_mintss(g, spec, num_worlds=20, master_seed=3, policy="adaptive")
    assert rep.hit_rate == 1.0
    assert np.all(rep.per_world_shortfall == 0.0)


def test_nonadaptive_deterministic_graph_no_shortfall():
    g, _ = load_edge_list("0 1 1\n1 2 1\n2 3 1\n")
    spec = MintssSpec(Q=4.0, beta=0.5, rr_count=500)
    rep = evaluate_mintss(g, spec, num_worlds=10, master_seed=1, policy="non-adaptive")
    assert np.all(rep.per_world_shortfall == 0.0)
    assert rep.hit_rate == 1.0


def test_shortfall_definitional():
    g = random_small_graph(random.Random(11), n_min=6, n_max=9)
    spec = MintssSpec(Q=0.7 * g.n, beta=1.0, rr_count=2000)
    rep = evaluate_mintss(g, spec, num_worlds=30, master_seed=5, policy="non-adaptive")
    want = np.maximum(0.0, spec.Q - rep.per_world_spread)
    assert np.array_equal(rep.per_world_shortfall, want)
    assert rep.c_avg == float(rep.per_world_seeds.mean())


def test_adaptive_batch_monotone_cost():
    g = generate_synthetic("erdos-renyi-directed", {"n": 150, "density": 0.03, "edge_prob": 0.1}, seed=9)
    q = 0.2 * g.n
    small = evaluate_mintss(g, MintssSpec(Q=q, batch_size=1, rr_count=1000), 25, 13)
    big = evaluate_mintss(g, MintssSpec(Q=q, batch_size=10, rr_count=1000), 25, 13)
    assert small.c_avg <= big.c_avg + 3 * max(big.stderr, small.stderr)


def test_adaptive_saves_seeds_vs_nonadaptive():
    from adaptim.graph import assign_weighted_cascade

    g = assign_weighted_cascade(
        generate_synthetic("erdos-renyi-directed", {"n": 300, "density": 0.012}, seed=9)
    )
    q = 0.3 * g.n
    spec = MintssSpec(Q=q, batch_size=1, rr_count=3000)
    ad = evaluate_mintss(g, spec, 25, 13, policy="adaptive")
    na = evaluate_mintss(g, spec, 25, 13, policy="non-adaptive")
    assert ad.c_avg <= len(na.seeds)


def test_bounded_horizon_stops_at_target():
    g = generate_synthetic("layered-dag", {"layers": 5, "width": 4, "density": 0.7, "edge_prob": 0.5}, seed=3)
    spec = MintssSpec(Q=6.0, batch_size=2, horizon=6, rr_count=500)
    for ws in range(5):
        trace = mintss_adaptive(g, spec, sample_world(g, ws), ws)
        if trace.final_active >= spec.Q:
            # stopping rule: no seeds wasted after the target was reached
            assert trace.seeds_used <= g.n
