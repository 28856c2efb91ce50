"""VCG auctions with bidder-specific reserve prices on an s-unit supply.

Learner actions are reserve vectors on the grid {1/m, ..., m/m}^n; adversary
actions are bid profiles in [0,1]^n.  Winners are the up-to-s highest bidders
that clear their reserves; each pays the larger of their reserve and the
highest non-serviced qualifying bid.
"""
from __future__ import annotations

import itertools
import math

from ..errors import ParameterError
from ..translation import TranslationSpec
from .base import Environment


def vcg_revenue(reserves, values, units: int = 1) -> float:
    """Revenue of the reserve vector on one bid profile.

    Bidders with values below their reserves are removed; the remaining top
    ``units`` bidders (value ties to the smaller index) are serviced at price
    max(reserve, threshold) where the threshold is the (units+1)-th highest
    qualifying value, or 0 when everyone qualifies for a unit.
    """
    if len(reserves) != len(values):
        raise ParameterError("reserves and values must have equal length")
    qualified = [i for i, v in enumerate(values) if v >= reserves[i]]
    if not qualified:
        return 0.0
    ranked = sorted(qualified, key=lambda i: (-values[i], i))
    winners = ranked[:units]
    threshold = values[ranked[units]] if len(ranked) > units else 0.0
    return float(sum(max(reserves[i], threshold) for i in winners))


class VcgReserveEnvironment(Environment):
    def __init__(self, n: int, m: int, units: int = 1):
        if n < 1 or m < 1 or units < 1:
            raise ParameterError("n, m and units must be positive")
        self.n = n
        self.m = m
        self.units = units
        self.payoff_hi = float(min(n, units))
        grid = [g / m for g in range(1, m + 1)]
        super().__init__(itertools.product(grid, repeat=n))

    def payoff(self, action, adversary_action) -> float:
        return vcg_revenue(action, adversary_action, self.units)

    def random_adversary_action(self, rng):
        return tuple(float(v) for v in rng.uniform(0.0, 1.0, size=self.n))


def _bit(z: int, beta: int, nbits: int) -> int:
    # beta = 1 is the most significant of nbits bits of z mod 2**nbits; the
    # wraparound keeps the encoding injective on {1..m} when m is a power of 2.
    return ((z % (1 << nbits)) >> (nbits - beta)) & 1


def num_bits(m: int) -> int:
    return max(1, math.ceil(math.log2(m)))


def bit_implementing_weights(m: int, bits) -> list[float]:
    """Weights on the value ladder h/m (h=1..m) reproducing a bit column.

    ``bits[z]`` for z in 1..m is the column entry of the reserve z/m.  The
    returned weights w_h are nonnegative and satisfy, for all z > z',

        bits[z] - bits[z'] = sum_h w_h (z/m * 1[h>=z] - z'/m * 1[h>=z']).
    """
    if m < 2:
        raise ParameterError("need m >= 2")
    w = [0.0] * (m + 1)  # w[0] unused
    w[m] = max(0.0, max(m * (bits[z] - bits[z - 1]) for z in range(2, m + 1)))
    for z in range(m, 1, -1):
        w[z - 1] = (sum(w[z:]) - m * (bits[z] - bits[z - 1])) / (z - 1)
    return w[1:]


def _single_bidder_profiles(n: int, m: int, bidder: int):
    """The m profiles where only ``bidder`` bids, at values h/m for h=1..m."""
    out = []
    for h in range(1, m + 1):
        profile = [0.0] * n
        profile[bidder] = h / m
        out.append(tuple(profile))
    return out


def vcg_translation(n: int, m: int) -> TranslationSpec:
    """Binary-encoding translation matrix for reserve vectors.

    Column (i, beta) holds the beta-th bit of m * r_i (beta = 1 most
    significant).  Each column is realized, positively and negatively, by
    weighted single-bidder profiles via ``bit_implementing_weights``; the
    negative datasets use the complemented bit column.
    """
    if n < 1 or m < 2:
        raise ParameterError("need n >= 1 and m >= 2")
    nbits = num_bits(m)
    datasets, negatives = [], []
    for i in range(n):
        profiles = _single_bidder_profiles(n, m, i)
        for beta in range(1, nbits + 1):
            bits = [0] + [_bit(z, beta, nbits) for z in range(1, m + 1)]
            weights = bit_implementing_weights(m, bits)
            datasets.append([(w, v) for w, v in zip(weights, profiles)])
            flipped = [0] + [1 - b for b in bits[1:]]
            weights = bit_implementing_weights(m, flipped)
            negatives.append([(w, v) for w, v in zip(weights, profiles)])

    def row(reserves):
        out = []
        for r in reserves:
            z = round(r * m)
            out.extend(float(_bit(z, beta, nbits)) for beta in range(1, nbits + 1))
        return out

    return TranslationSpec(num_columns=n * nbits, row=row,
                           datasets=datasets, negative_datasets=negatives)


def _floor_to_grid(x: float, m: int) -> float:
    # guard against float dust, e.g. 0.3 * 10 = 2.9999...
    return math.floor(x * m + 1e-9) / m


def round_reserves(reserves, m: int):
    """Snap a continuous reserve vector onto the grid {1/m, ..., 1}.

    Reserves below 1/m round up to 1/m; everything else rounds down to the
    nearest multiple of 1/m.  Per profile the revenue drops by at most
    2 * units / m.
    """
    out = []
    for r in reserves:
        if not 0.0 <= r <= 1.0:
            raise ParameterError("reserves must lie in [0, 1]")
        out.append(max(1.0 / m, _floor_to_grid(r, m)))
    return tuple(out)
