"""Envy-free item pricing over k heterogeneous items.

Learner actions are price vectors on the grid {1/m, ..., 1}^k; adversary
actions are bidder profiles, each bidder either single-minded (one desired
bundle) or unit-demand (per-item values, buys at most one item).  Bidders are
processed in index order and take a feasible utility-maximizing bundle.
"""
from __future__ import annotations

import itertools
import math

from ..errors import ParameterError
from ..translation import TranslationSpec
from .base import Environment
from .vcg import _floor_to_grid, bit_implementing_weights, num_bits, _bit

SINGLE_MINDED = "sm"
UNIT_DEMAND = "ud"


def single_minded(bundle_mask: int, value: float):
    """Bidder valuing any superset of ``bundle_mask`` (bitmask over items) at ``value``."""
    if bundle_mask <= 0:
        raise ParameterError("single-minded bundle must be nonempty")
    return (SINGLE_MINDED, int(bundle_mask), float(value))


def unit_demand(values):
    """Bidder with per-item values who buys at most one item."""
    return (UNIT_DEMAND, tuple(float(v) for v in values))


def _mask_items(mask: int, k: int):
    return tuple(i for i in range(k) if mask >> i & 1)


def _bundle_value(bidder, mask: int) -> float:
    kind = bidder[0]
    if kind == SINGLE_MINDED:
        _, want, value = bidder
        return value if mask & want == want else 0.0
    _, values = bidder
    items = [i for i in range(len(values)) if mask >> i & 1]
    if len(items) > 1:
        raise ParameterError("unit-demand bidders only value single items")
    return values[items[0]] if items else 0.0


def _candidate_masks(bidder, k: int):
    if bidder[0] == UNIT_DEMAND:
        masks = [1 << i for i in range(k)]
    else:
        masks = list(range(1, 1 << k))
    # lexicographic on the sorted item-index tuples; used to break utility ties
    masks.sort(key=lambda mm: _mask_items(mm, k))
    return masks


def item_pricing_outcome(prices, profile, supply=None):
    """Run the sequential posted-price mechanism.

    ``supply`` is a per-item unit count or None for unlimited supply.  Each
    bidder takes a feasible bundle maximizing value minus price; a tie with the
    empty bundle is resolved in favor of buying, and among equally good
    nonempty bundles the lexicographically smallest wins.  Returns
    (list of purchased bitmasks, revenue).
    """
    k = len(prices)
    remaining = None if supply is None else list(supply)
    allocations = []
    revenue = 0.0
    for bidder in profile:
        feasible = []
        for mask in _candidate_masks(bidder, k):
            if remaining is not None and any(remaining[i] < 1 for i in _mask_items(mask, k)):
                continue
            feasible.append(mask)
        best_util = 0.0  # the empty bundle
        for mask in feasible:
            u = _bundle_value(bidder, mask) - sum(prices[i] for i in _mask_items(mask, k))
            if u > best_util:
                best_util = u
        chosen = 0
        for mask in feasible:
            u = _bundle_value(bidder, mask) - sum(prices[i] for i in _mask_items(mask, k))
            if u == best_util and u >= 0.0:
                chosen = mask
                break
        allocations.append(chosen)
        if chosen:
            price = sum(prices[i] for i in _mask_items(chosen, k))
            revenue += price
            if remaining is not None:
                for i in _mask_items(chosen, k):
                    remaining[i] -= 1
    return allocations, float(revenue)


class ItemPricingEnvironment(Environment):
    """Price vectors on the 1/m grid against profiles of at most ``max_bidders``."""

    def __init__(self, k: int, m: int, max_bidders: int = 1, supply=None):
        if k < 1 or m < 1 or max_bidders < 1:
            raise ParameterError("k, m and max_bidders must be positive")
        self.k = k
        self.m = m
        self.supply = None if supply is None else tuple(supply)
        self.max_bidders = max_bidders
        # a buying bidder pays at most their value <= 1
        self.payoff_hi = float(max_bidders)
        grid = [g / m for g in range(1, m + 1)]
        super().__init__(itertools.product(grid, repeat=k))

    def payoff(self, action, adversary_action) -> float:
        _, revenue = item_pricing_outcome(action, adversary_action, self.supply)
        return revenue

    def random_adversary_action(self, rng):
        profile = []
        for _ in range(self.max_bidders):
            profile.append(unit_demand(rng.uniform(0.0, 1.0, size=self.k)))
        return tuple(profile)


def item_pricing_translation(k: int, m: int) -> TranslationSpec:
    """Binary-encoding translation matrix for price vectors.

    Item prices play the role reserves play in the VCG construction: the
    revenue of a lone bidder valuing item L at h/m is price_L whenever they
    buy, so the same ladder weights realize every bit column (and the
    complemented bits realize the negated columns).
    """
    if k < 1 or m < 2:
        raise ParameterError("need k >= 1 and m >= 2")
    nbits = num_bits(m)
    datasets, negatives = [], []
    for item in range(k):
        profiles = [(single_minded(1 << item, h / m),) for h in range(1, m + 1)]
        for beta in range(1, nbits + 1):
            bits = [0] + [_bit(z, beta, nbits) for z in range(1, m + 1)]
            weights = bit_implementing_weights(m, bits)
            datasets.append([(w, v) for w, v in zip(weights, profiles)])
            flipped = [0] + [1 - b for b in bits[1:]]
            weights = bit_implementing_weights(m, flipped)
            negatives.append([(w, v) for w, v in zip(weights, profiles)])

    def row(prices):
        out = []
        for a in prices:
            z = round(a * m)
            out.extend(float(_bit(z, beta, nbits)) for beta in range(1, nbits + 1))
        return out

    return TranslationSpec(num_columns=k * nbits, row=row,
                           datasets=datasets, negative_datasets=negatives)


def round_prices(prices, m: int, bidder_model: str):
    """Snap continuous prices onto the grid {1/m, ..., 1} with bounded revenue loss.

    single-minded: prices below 1/m go up to 1/m, the rest straight down.
    unit-demand: prices are discounted so that, in ascending price order, more
    expensive items get weakly larger discounts (so nobody switches to a
    cheaper item), then zero prices are bumped to 1/m.  Either way the loss is
    at most 2 * n * k / m per profile (unlimited supply).
    """
    for a in prices:
        if not 0.0 <= a <= 1.0:
            raise ParameterError("prices must lie in [0, 1]")
    if bidder_model == SINGLE_MINDED:
        return tuple(max(1.0 / m, _floor_to_grid(a, m)) for a in prices)
    if bidder_model != UNIT_DEMAND:
        raise ParameterError(f"unknown bidder model {bidder_model!r}")

    order = sorted(range(len(prices)), key=lambda i: (prices[i], i))
    discounted = {}
    prev_gap = 0.0
    for rank, i in enumerate(order):
        if rank == 0:
            snapped = _floor_to_grid(prices[i], m)
        else:
            # largest grid multiple <= a_i whose discount is at least the previous one
            snapped = _floor_to_grid(prices[i] - prev_gap, m)
        prev_gap = prices[i] - snapped
        discounted[i] = snapped
    return tuple(max(1.0 / m, discounted[i]) for i in range(len(prices)))
