"""Single-item level auctions.

An auction assigns each bidder a strictly increasing ladder of s thresholds on
the grid {0, 1/m, ..., 1}.  A bidder's level is the index of the largest
threshold at or below their bid; the highest level wins (ties to the smaller
index) and pays the lowest threshold of theirs that would still have won.
"""
from __future__ import annotations

import itertools

from ..errors import ParameterError
from ..translation import TranslationSpec
from .base import Environment


def level_index(thresholds, value: float) -> int:
    """Index of the largest threshold <= value, or -1 when value is below all."""
    if not 0.0 <= value <= 1.0:
        raise ParameterError("values must lie in [0, 1]")
    idx = -1
    for b, th in enumerate(thresholds):
        if th <= value:
            idx = b
    return idx


def _participation_levels(theta, values):
    # A zero bid never participates, even against a zero bottom threshold;
    # otherwise a rival's free bottom rung would distort the winner's payment
    # on profiles where that rival bids nothing.
    return [level_index(theta[i], v) if v > 0.0 else -1 for i, v in enumerate(values)]


def level_revenue(theta, values) -> float:
    """Revenue (= winner's payment) of the auction ``theta`` on one bid profile.

    The winner pays their threshold at the lowest level that still wins: it
    must strictly exceed the levels of smaller-indexed participants and weakly
    exceed those of larger-indexed ones, and is never below level 0.
    """
    if len(theta) != len(values):
        raise ParameterError("theta and values must have equal length")
    levels = _participation_levels(theta, values)
    winner, best = -1, -1
    for i, b in enumerate(levels):
        if b > best:
            winner, best = i, b
    if winner < 0:
        return 0.0
    required = 0
    for j, b in enumerate(levels):
        if j == winner or b < 0:
            continue
        required = max(required, b + 1 if j < winner else b)
    return float(theta[winner][required])


def winning_bidder(theta, values) -> int:
    """Index of the winner, or -1 when the item stays unallocated."""
    levels = _participation_levels(theta, values)
    winner, best = -1, -1
    for i, b in enumerate(levels):
        if b > best:
            winner, best = i, b
    return winner


def minimum_winning_bid(theta, values, step: float):
    """Smallest multiple of ``step`` the winner could bid and still win.

    Grid-search cross-check for the payment rule; returns None when the
    profile has no winner.
    """
    winner = winning_bidder(theta, values)
    if winner < 0:
        return None
    trial = list(values)
    n_steps = round(1.0 / step)
    for g in range(0, n_steps + 1):
        bid = g * step
        trial[winner] = bid
        if winning_bidder(theta, tuple(trial)) == winner:
            return float(bid)
    return None


class LevelAuctionEnvironment(Environment):
    def __init__(self, n: int, s: int, m: int):
        if n < 1 or s < 2 or m < s:
            raise ParameterError("need n >= 1, s >= 2 and m >= s")
        self.n = n
        self.s = s
        self.m = m
        grid = [g / m for g in range(m + 1)]
        ladders = list(itertools.combinations(grid, s))  # strictly increasing
        super().__init__(itertools.product(ladders, repeat=n))

    def payoff(self, action, adversary_action) -> float:
        return level_revenue(action, adversary_action)

    def random_adversary_action(self, rng):
        return tuple(float(v) for v in rng.uniform(0.0, 1.0, size=self.n))


def level_probe_profiles(n: int, m: int):
    """The distinguishing bid profiles: e_i + (L/m) e_n for i < n, plus e_n."""
    profiles = []
    for i in range(n - 1):
        for ell in range(m + 1):
            v = [0.0] * n
            v[i] = 1.0
            v[n - 1] = ell / m
            profiles.append(tuple(v))
    last = [0.0] * n
    last[n - 1] = 1.0
    profiles.append(tuple(last))
    return profiles


def level_translation(n: int, s: int, m: int) -> TranslationSpec:
    """Revenue-on-probes translation matrix; one column per probe profile.

    Columns are literal revenues so each is realized by the singleton dataset
    {(1, profile)}; distinct ladders are told apart by where the revenue jumps
    as the last bidder's value sweeps the grid.
    """
    if s < 2 or m < s:
        raise ParameterError("need s >= 2 and m >= s")
    profiles = level_probe_profiles(n, m)

    def row(theta):
        return [level_revenue(theta, v) for v in profiles]

    return TranslationSpec(num_columns=len(profiles), row=row,
                           datasets=[[(1.0, v)] for v in profiles])
