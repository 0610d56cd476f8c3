import math
import random

import pytest

from adaptim.bounds import (
    GAMMA_DEFAULT,
    BoundParams,
    emit_bound_curves,
    ga_factor,
    gna_factor,
    gna_oa_factor,
    intermediate_ona_bound,
    mintss_seed_bounds,
    prop1_ratio,
    theorem3_counterexample,
)


def test_gamma_value():
    assert abs(GAMMA_DEFAULT - (math.e / (math.e - 1)) ** 2) < 1e-15
    assert f"{GAMMA_DEFAULT:.6f}" == "2.502650"


def test_ga_factor_closed_form():
    # direct evaluation of 1 - e^{-1/gamma}
    assert f"{ga_factor():.6f}" == "0.329396"
    assert abs(ga_factor(alpha=2.0) - (1 - math.exp(-1 / (2 * GAMMA_DEFAULT)))) < 1e-15


def test_ga_factor_alpha_limit():
    assert ga_factor(alpha=1e9) < 1e-6


def test_gna_factor_values():
    assert f"{gna_factor(0.0):.6f}" == "0.399576"
    assert round(gna_factor(0.0), 5) == 0.39958
    assert gna_factor(1 - 1 / math.e - 1e-12) < 1e-12
    want = (1 - 1 / math.e - 0.1) ** 2
    assert abs(gna_factor(0.1) - want) < 1e-15
    with pytest.raises(ValueError):
        gna_factor(0.7)
    with pytest.raises(ValueError):
        gna_factor(-0.1)


def test_ordering_non_adaptive_slightly_better():
    assert ga_factor() < gna_factor(0.0)
    assert gna_factor(0.0) - ga_factor() < 0.08  # "slightly"


def test_prop1_ratio_batch_ceilings():
    p = BoundParams(n_GA=10, b_GA=5, n_OA=3, b_OA=1)
    want = 1 - math.exp(-2 / (GAMMA_DEFAULT * 3))
    assert abs(prop1_ratio(p) - want) < 1e-15
    assert abs(prop1_ratio(BoundParams()) - ga_factor()) < 1e-15


def test_param_validation():
    with pytest.raises(ValueError):
        BoundParams(alpha=0.5)
    with pytest.raises(ValueError):
        BoundParams(gamma=0.0)


def test_seed_bound_round_trip():
    # plugging the adaptive seed bound back into the exponential spread
    # relation must recover the target ratio: 1 - exp(-bound/(a*g)) = 1 - b/Q
    rng = random.Random(3)
    for _ in range(20):
        q = rng.uniform(10, 1000)
        beta_ga = rng.uniform(1.0, 5.0)
        alpha = rng.uniform(1.0, 2.0)
        p = BoundParams(alpha=alpha, Q=q, beta_GA=beta_ga, beta_GNA=beta_ga / 2)
        n_ga, _ = mintss_seed_bounds(p)
        assert abs((1 - math.exp(-n_ga / (alpha * GAMMA_DEFAULT))) - (1 - beta_ga / q)) < 1e-9


def test_seed_bound_degenerate_log_one():
    p = BoundParams(Q=2.0, beta_GA=2.0, beta_GNA=1.0)
    n_ga, _ = mintss_seed_bounds(p)
    assert n_ga == 0.0


def test_seed_bound_domain_errors():
    with pytest.raises(ValueError):
        mintss_seed_bounds(BoundParams(Q=10.0, beta_GA=1.0, beta_GNA=2.0))  # beta_ONA < 0
    with pytest.raises(ValueError):
        mintss_seed_bounds(BoundParams(Q=10.0, beta_GA=3.0, beta_GNA=2.0, epsilon=0.5))


def test_intermediate_bound():
    p = BoundParams(Q=10.0, beta_GA=3.0, beta_GNA=2.0)  # beta_ONA = 1
    assert abs(intermediate_ona_bound(p) - math.log(10 / 9)) < 1e-15


def test_gna_oa_two_factor_product():
    got = gna_oa_factor(n_GNA=4, n_ONA=2, n_OA=1, epsilon=0.0)
    want = (1 - math.exp(-2)) * (1 - math.exp(-2))
    assert abs(got - want) < 1e-15


def test_bound_curve_ratio_decreasing():
    qs = [10 * (100 ** (i / 49)) for i in range(50)]
    rows = emit_bound_curves(qs)
    ratios = [ga / gna for _, ga, gna in rows]
    for a, b in zip(ratios, ratios[1:]):
        assert b < a
    # adaptive bound below non-adaptive for large targets
    for q, ga, gna in rows:
        if q >= 20:
            assert ga < gna


def test_counterexample_exact_values():
    res = theorem3_counterexample(0.5)
    assert res["sigma_S"] == 2.5
    assert res["sigma_S_w"] == 3.0
    assert res["sigma_Sp"] == 2.0
    assert res["sigma_Sp_w"] == 3.0
    assert res["gain_w_given_S"] == 0.5
    assert res["gain_w_given_Sp"] == 1.0
    assert res["violates_submodularity"]


def test_counterexample_limit_p_to_one():
    res = theorem3_counterexample(0.999)
    assert 0 < res["gain_w_given_S"] < 0.01
    assert res["violates_submodularity"]


def test_counterexample_random_p_closed_form():
    rng = random.Random(7)
    for _ in range(100):
        p = rng.uniform(0.01, 0.99)
        res = theorem3_counterexample(p)
        assert abs(res["gain_w_given_S"] - (1 - p)) < 1e-12
        assert abs(res["gain_w_given_Sp"] - 1.0) < 1e-12
        assert res["violates_submodularity"]
    with pytest.raises(ValueError):
        theorem3_counterexample(1.0)
