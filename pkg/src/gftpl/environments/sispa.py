"""Optimal bidding in simultaneous second-price auctions, from one bidder's view.

The learner picks a bid vector on the 1/m grid satisfying no-overbidding (no
bundle's bids sum past its value); the adversary picks per-item price
thresholds.  The bidder wins every item bid strictly above its threshold and
nets bundle value minus prices paid, which can be negative (down to -k).
"""
from __future__ import annotations

import itertools

from ..errors import ParameterError
from ..translation import TranslationSpec
from .base import Environment


def validate_valuation(valuation, k: int, m: int):
    """Check a bundle-value table: all 2^k bitmask keys, grid values, v(empty)=0."""
    if set(valuation) != set(range(1 << k)):
        raise ParameterError("valuation must map every bundle bitmask in range(2^k)")
    if valuation[0] != 0.0:
        raise ParameterError("the empty bundle must be worth 0")
    for mask, v in valuation.items():
        if not 0.0 <= v <= 1.0 or abs(v * m - round(v * m)) > 1e-9:
            raise ParameterError(f"value {v!r} for bundle {mask} is off the 1/{m} grid")


def unit_demand_valuation(per_item, k: int):
    """v(q) = max of per-item values over the bundle."""
    vals = {0: 0.0}
    for mask in range(1, 1 << k):
        vals[mask] = max(per_item[i] for i in range(k) if mask >> i & 1)
    return vals


def capped_additive_valuation(per_item, k: int, cap: float = 1.0):
    """v(q) = min(cap, sum of per-item values over the bundle)."""
    vals = {0: 0.0}
    for mask in range(1, 1 << k):
        vals[mask] = min(cap, sum(per_item[i] for i in range(k) if mask >> i & 1))
    return vals


def sispa_utility(bids, thresholds, valuation) -> float:
    """Utility of one bid vector against one threshold vector (ties lose)."""
    if len(bids) != len(thresholds):
        raise ParameterError("bids and thresholds must have equal length")
    mask = 0
    paid = 0.0
    for j, (b, p) in enumerate(zip(bids, thresholds)):
        if b > p:
            mask |= 1 << j
            paid += p
    return float(valuation[mask] - paid)


def enumerate_bid_space(valuation, k: int, m: int):
    """All grid bid vectors obeying no-overbidding (checked on every bundle)."""
    validate_valuation(valuation, k, m)
    grid = [g / m for g in range(m + 1)]
    out = []
    for bids in itertools.product(grid, repeat=k):
        ok = True
        for mask in range(1, 1 << k):
            total = sum(bids[j] for j in range(k) if mask >> j & 1)
            if total > valuation[mask] + 1e-9:
                ok = False
                break
        if ok:
            out.append(bids)
    return out


class SispaEnvironment(Environment):
    def __init__(self, valuation, k: int, m: int):
        validate_valuation(valuation, k, m)
        self.valuation = dict(valuation)
        self.k = k
        self.m = m
        self.payoff_lo = -float(k)
        self.payoff_hi = 1.0
        super().__init__(enumerate_bid_space(valuation, k, m))

    def payoff(self, action, adversary_action) -> float:
        return sispa_utility(action, adversary_action, self.valuation)

    def random_adversary_action(self, rng):
        return tuple(float(p) for p in rng.uniform(0.0, 1.0, size=self.k))


def bidding_translation(valuation, k: int, m: int) -> TranslationSpec:
    """Identity translation matrix: a bid vector is its own row.

    Column j is realized by threshold vectors that price every other item out
    (at 1) and sweep item j over L/m for L < m, weighted by
    (1/m) / (v(e_j) - L/m) so the weighted utility of any legal bid telescopes
    to exactly b_j.
    """
    validate_valuation(valuation, k, m)
    datasets = []
    for j in range(k):
        vj = valuation[1 << j]
        entries = []
        for ell in range(m):
            p = tuple((ell / m if jj == j else 1.0) for jj in range(k))
            w = (1.0 / m) / (vj - ell / m) if ell / m < vj else 0.0
            entries.append((w, p))
        datasets.append(entries)
    return TranslationSpec(num_columns=k, row=lambda bids: list(bids), datasets=datasets)
