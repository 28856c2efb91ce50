import itertools
import math

import numpy as np
import pytest
from hypothesis import given, settings, strategies as st

from gftpl import (
    VcgReserveEnvironment,
    check_admissibility,
    pseudo_complexity,
    rows_matrix,
    round_reserves,
    vcg_revenue,
    vcg_translation,
    verify_implementability,
)
from gftpl.environments.vcg import bit_implementing_weights


def test_lone_high_bidder_pays_their_reserve():
    assert vcg_revenue((1 / 3, 0.9), (1.0, 0.0), 1) == pytest.approx(1 / 3)
    assert vcg_revenue((0.9, 1 / 3), (0.0, 1.0), 1) == pytest.approx(1 / 3)


def test_no_qualifying_bidders_means_zero_revenue():
    assert vcg_revenue((0.6, 0.6, 0.6), (0.5, 0.1, 0.59), 1) == 0.0


def test_threshold_price_from_first_excluded_bidder():
    # winner is bidder 0 and pays max(reserve, second qualifying value)
    assert vcg_revenue((0.5, 0.5, 0.5), (0.7, 0.6, 0.2), 1) == pytest.approx(0.6)


def test_two_unit_auction_revenue():
    # both top bidders serve; threshold is the third qualifying value
    r = (0.1, 0.1, 0.1)
    v = (0.9, 0.8, 0.5)
    assert vcg_revenue(r, v, 2) == pytest.approx(0.5 + 0.5)
    assert vcg_revenue(r, (0.9, 0.8, 0.05), 2) == pytest.approx(0.1 + 0.1)


def test_value_ties_favor_the_smaller_index():
    # bidders 0 and 1 tie; bidder 0 serves, bidder 1 sets the threshold
    assert vcg_revenue((0.2, 0.2), (0.6, 0.6), 1) == pytest.approx(0.6)


def test_worked_low_bit_column_weights():
    spec = vcg_translation(2, 3)
    assert [w for w, _ in spec.datasets[3]] == pytest.approx([6.0, 0.0, 3.0])
    profiles = [y for _, y in spec.datasets[3]]
    assert profiles == [(0.0, 1 / 3), (0.0, 2 / 3), (0.0, 1.0)]


def test_recursion_weights_nonnegative_everywhere():
    for n, m in itertools.product((1, 2, 3), range(2, 9)):
        spec = vcg_translation(n, m)
        for ds in spec.datasets + spec.negative_datasets:
            assert all(w >= 0 for w, _ in ds)


def test_implementability_exhaustive_up_to_three_bidders_eight_levels():
    for n, m in itertools.product((1, 2, 3), (2, 3, 5, 8)):
        env = VcgReserveEnvironment(n, m, 1)
        ok, dev = verify_implementability(vcg_translation(n, m), env)
        assert ok, (n, m, dev)


def test_constant_bit_column_yields_zero_differences():
    # if a column of bits is constant the recursion telescopes to zero payoff
    # differences between any two ladder positions
    m = 5
    bits = [0] + [1] * m
    weights = bit_implementing_weights(m, bits)

    def ladder_payoff(z):
        return sum(w * (z / m) * (1 if h >= z else 0) for h, w in enumerate(weights, start=1))

    base = ladder_payoff(1)
    for z in range(2, m + 1):
        assert ladder_payoff(z) - base == pytest.approx(0.0, abs=1e-12)


def test_admissibility_is_two_one_for_all_tested_sizes():
    for n, m in itertools.product((1, 2, 3), (2, 3, 8)):
        env = VcgReserveEnvironment(n, m, 1)
        report = check_admissibility(rows_matrix(vcg_translation(n, m), env.actions))
        assert (report.kappa, report.delta, report.rows_distinct) == (2, 1.0, True), (n, m)


def test_pseudo_complexity_bound():
    for m in (2, 3, 5, 8):
        assert pseudo_complexity(vcg_translation(2, m)) <= 2 * m * (m - 1) + m + 1e-9


def test_revenue_bounded_by_serviceable_winners():
    rng = np.random.default_rng(0)
    for _ in range(300):
        n = int(rng.integers(1, 5))
        s = int(rng.integers(1, 4))
        r = tuple(rng.uniform(0, 1, n))
        v = tuple(rng.uniform(0, 1, n))
        rev = vcg_revenue(r, v, s)
        assert 0.0 <= rev <= min(n, s) + 1e-12


def test_round_reserves_examples():
    assert round_reserves((0.02, 0.77), 10) == pytest.approx((0.1, 0.7))
    grid = (0.3, 0.1, 1.0)
    assert round_reserves(grid, 10) == pytest.approx(grid)


def test_rounding_loss_within_two_s_over_m():
    rng = np.random.default_rng(77)
    n, s, m = 3, 2, 20
    for _ in range(1000):
        r = tuple(float(x) for x in rng.uniform(0, 1, n))
        v = tuple(float(x) for x in rng.uniform(0, 1, n))
        loss = vcg_revenue(r, v, s) - vcg_revenue(round_reserves(r, m), v, s)
        assert loss <= 2 * s / m + 1e-9


@settings(max_examples=100, deadline=None)
@given(st.lists(st.floats(0, 1), min_size=1, max_size=4), st.integers(2, 50))
def test_rounded_reserves_live_on_the_positive_grid(reserves, m):
    rounded = round_reserves(reserves, m)
    for orig, snapped in zip(reserves, rounded):
        k = round(snapped * m)
        assert 1 <= k <= m
        assert abs(snapped - k / m) < 1e-12
        assert snapped <= max(orig, 1 / m) + 1e-9


def _bidder_utility(r, v, bid, i, s):
    # utility of bidder i when they bid `bid` and everyone else bids truthfully
    bids = list(v)
    bids[i] = bid
    qualified = [j for j in range(len(v)) if bids[j] >= r[j]]
    ranked = sorted(qualified, key=lambda j: (-bids[j], j))
    winners = ranked[:s]
    if i not in winners:
        return 0.0
    threshold = bids[ranked[s]] if len(ranked) > s else 0.0
    return v[i] - max(r[i], threshold)


def test_truthfulness_spot_check():
    # no unilateral grid deviation beats truthful bidding
    rng = np.random.default_rng(2024)
    m = 10
    for _ in range(500):
        n = int(rng.integers(2, 5))
        s = int(rng.integers(1, 3))
        r = tuple(float(x) for x in rng.uniform(0, 1, n))
        v = tuple(float(x) for x in rng.uniform(0, 1, n))
        i = int(rng.integers(0, n))
        truthful = _bidder_utility(r, v, v[i], i, s)
        for g in range(m + 1):
            assert _bidder_utility(r, v, g / m, i, s) <= truthful + 1e-9
