import numpy as np
from pytest import approx

import bonusmalus as bm

MIXING = bm.ExponentialUnitMixing()


def small_run(partition, rules, schedule=None, seed=7, lam=0.1):
    cfg = bm.SimulationConfig(n_policies=4000, sample_years=60, burn_in_years=80, seed=seed)
    model = bm.ExponentialSeverity(2.0)
    return bm.simulate_portfolio(cfg, lam, rules, partition, model, MIXING, schedule)


def test_reproducible_for_fixed_seed(partition_a, rules):
    a = small_run(partition_a, rules, seed=11)
    b = small_run(partition_a, rules, seed=11)
    assert (a.empirical_proportions == b.empirical_proportions).all()
    assert (a.empirical_relativities == b.empirical_relativities).all()


def test_seed_changes_output(partition_a, rules):
    a = small_run(partition_a, rules, seed=11)
    b = small_run(partition_a, rules, seed=12)
    assert (a.empirical_proportions != b.empirical_proportions).any()


def test_proportions_sum_to_one(partition_a, rules):
    rep = small_run(partition_a, rules)
    assert rep.empirical_proportions.sum() == approx(1.0, abs=1e-12)


def test_negligible_frequency_pins_bottom_level(partition_a, rules):
    rep = small_run(partition_a, rules, lam=1e-6)
    assert rep.empirical_proportions == approx([1, 0, 0, 0], abs=1e-3)


def test_matches_analytic_proportions_and_relativities(partition_a, rules, profile_a):
    rep = small_run(partition_a, rules, seed=5)
    for l in range(4):
        z = abs(rep.empirical_proportions[l] - profile_a.proportions[l]) / rep.proportion_se[l]
        assert z < 4.0
        z = abs(rep.empirical_relativities[l] - profile_a.relativities[l]) / rep.relativity_se[l]
        assert z < 4.0


def test_deductible_recovery_matches_balance_identity(model, partition_a, rules, profile_a):
    sched = bm.allocate_greedy_top(0.05, profile_a.relativities, model, partition_a)
    rep = small_run(partition_a, rules, schedule=sched, seed=9)
    expected = 0.05 * 0.1 * profile_a.relativities[3] * model.mean()
    z = abs(rep.mean_deductible_paid[3] - expected) / rep.deductible_se[3]
    assert z < 4.0
    assert rep.mean_deductible_paid[:3] == approx(np.zeros(3))
