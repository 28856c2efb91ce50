"""Multi-unit welfare maximization: s identical units across n bidders.

Adversary actions are marginal-value profiles (per bidder, the value of each
additional unit); learner actions are allocations summing to s.  Includes the
exact unit-level dynamic program and the bundle-restricted maximal-in-range
1/2-approximation that optimizes over allocations in multiples of s/n^2.
"""
from __future__ import annotations

import itertools

import numpy as np

from ..errors import ParameterError
from ..translation import TranslationSpec
from .base import Environment

NEG_INF = float("-inf")


def profile(*marginals):
    """Build an adversary action from per-bidder marginal tuples."""
    return tuple(tuple(float(x) for x in ms) for ms in marginals)


def welfare(allocation, marginal_profile) -> float:
    """Total value sum_i v_i(q_i), with v_i the prefix sums of bidder i's marginals."""
    units = len(marginal_profile[0])
    if len(allocation) != len(marginal_profile):
        raise ParameterError("allocation and profile must have equal length")
    if any(q < 0 for q in allocation) or sum(allocation) != units:
        raise ParameterError("allocation must be nonnegative and use all units")
    return float(sum(sum(ms[:q]) for q, ms in zip(allocation, marginal_profile)))


def enumerate_allocations(n: int, units: int):
    """All feasible allocations in lexicographic order."""
    out = []

    def rec(prefix, left):
        if len(prefix) == n - 1:
            out.append(tuple(prefix) + (left,))
            return
        for q in range(left + 1):
            rec(prefix + [q], left - q)

    rec([], units)
    return out


def _weighted_value_table(dataset, n: int, units: int) -> np.ndarray:
    """table[i][q] = weighted value of giving bidder i exactly q units."""
    table = np.zeros((n, units + 1))
    for w, prof in dataset:
        if len(prof) != n or any(len(ms) != units for ms in prof):
            raise ParameterError("profiles must cover every bidder and unit")
        if w:
            for i, ms in enumerate(prof):
                table[i, 1:] += w * np.cumsum(ms)
    return table


def _lexi_argmax_allocation(table: np.ndarray, steps, budget: int):
    """Exact argmax of sum_i table[i][q_i] with q_i in ``steps`` multiples.

    Dynamic program over bidders x remaining units; reconstruction picks the
    smallest feasible q_i first, yielding the lexicographically smallest
    optimum.
    """
    n = table.shape[0]
    best = np.full((n + 1, budget + 1), NEG_INF)
    best[n][0] = 0.0
    for i in range(n - 1, -1, -1):
        for left in range(budget + 1):
            top = NEG_INF
            for q in range(0, left + 1, steps):
                val = table[i][q] + best[i + 1][left - q]
                if val > top:
                    top = val
            best[i][left] = top
    out = []
    left = budget
    for i in range(n):
        for q in range(0, left + 1, steps):
            if table[i][q] + best[i + 1][left - q] == best[i][left]:
                out.append(q)
                left -= q
                break
    return tuple(out)


def exact_multiunit_dp(dataset, units: int):
    """Welfare-maximizing allocation for a weighted profile dataset (exact).

    Ties resolve to the lexicographically smallest allocation, matching the
    enumeration order used everywhere else.
    """
    if not dataset:
        raise ParameterError("dataset must be nonempty")
    n = len(dataset[0][1])
    table = _weighted_value_table(dataset, n, units)
    return _lexi_argmax_allocation(table, 1, units)


def padded_units(units: int, n: int) -> int:
    bundles = n * n
    return units if units % bundles == 0 else units + bundles - units % bundles


def mir_range_allocations(n: int, units: int):
    """The maximal-in-range family: every share a multiple of (padded s)/n^2."""
    total = padded_units(units, n)
    step = total // (n * n)
    counts = enumerate_allocations(n, n * n)
    return [tuple(c * step for c in q) for q in counts]


def mir_dobzinski_nisan(dataset, units: int, n: int):
    """Bundle-level 1/2-approximate allocation (exact over the restricted range).

    Units are padded with zero-value phantom units up to a multiple of n^2 and
    handed out in n^2 equal bundles; the knapsack program over bundles is
    solved exactly.  The returned allocation sums to the padded unit count.
    """
    if not dataset:
        raise ParameterError("dataset must be nonempty")
    total = padded_units(units, n)
    step = total // (n * n)
    table = _weighted_value_table(dataset, n, units)
    if total > units:  # phantom units add no value
        pad = np.repeat(table[:, -1:], total - units, axis=1)
        table = np.hstack([table, pad])
    return _lexi_argmax_allocation(table, step, total)


class MultiUnitEnvironment(Environment):
    def __init__(self, n: int, units: int):
        if n < 1 or units < 1:
            raise ParameterError("n and units must be positive")
        self.n = n
        self.units = units
        self.payoff_hi = float(n)
        super().__init__(enumerate_allocations(n, units))

    def payoff(self, action, adversary_action) -> float:
        return welfare(action, adversary_action)

    def random_adversary_action(self, rng):
        # each bidder's total value stays in [0, 1]
        out = []
        for _ in range(self.n):
            shape = rng.uniform(0.0, 1.0, size=self.units)
            total = rng.uniform(0.0, 1.0)
            out.append(tuple(float(x) for x in shape * (total / max(shape.sum(), 1e-12))))
        return tuple(out)

    def mir_action_indices(self):
        """Canonical indices of the maximal-in-range allocations.

        Requires the unit count to be a multiple of n^2 so the range is a
        subset of the action space (no phantom padding needed).
        """
        if self.units % (self.n * self.n) != 0:
            raise ParameterError("unit count must be a multiple of n^2 for in-range play")
        return [self.action_index(q) for q in mir_range_allocations(self.n, self.units)]


def multi_unit_translation(n: int, units: int) -> TranslationSpec:
    """Share-fraction translation matrix: column j holds q_j / s.

    Column j is realized by the single profile where bidder j values every
    unit at 1/s and everyone else at zero, whose welfare is exactly q_j / s.
    """
    if n < 1 or units < 1:
        raise ParameterError("n and units must be positive")
    datasets = []
    for j in range(n):
        prof = tuple(tuple((1.0 / units if i == j else 0.0) for _ in range(units))
                     for i in range(n))
        datasets.append([(1.0, prof)])

    def row(allocation):
        return [q / units for q in allocation]

    return TranslationSpec(num_columns=n, row=row, datasets=datasets)
