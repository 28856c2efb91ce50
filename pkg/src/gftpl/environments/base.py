"""Shared environment interface.

An environment fixes a finite, canonically ordered learner action space, an
adversary action space (hashable values), and a payoff function bounded on
[payoff_lo, payoff_hi].  Payoff vectors over the whole action list are memoized
per adversary action; instances are otherwise immutable and safe to share.
"""
from __future__ import annotations

import numpy as np


class Environment:
    payoff_lo: float = 0.0
    payoff_hi: float = 1.0

    def __init__(self, actions):
        self.actions = list(actions)
        self._payoff_cache: dict = {}
        self._index: dict | None = None

    def payoff(self, action, adversary_action) -> float:
        raise NotImplementedError

    @property
    def payoff_scale(self) -> float:
        return self.payoff_hi - self.payoff_lo

    def payoff_vector(self, adversary_action) -> np.ndarray:
        """f(., y) over the canonical action order; cached per adversary action."""
        vec = self._payoff_cache.get(adversary_action)
        if vec is None:
            vec = np.array([self.payoff(x, adversary_action) for x in self.actions])
            vec.setflags(write=False)
            self._payoff_cache[adversary_action] = vec
        return vec

    def action_index(self, action) -> int:
        if self._index is None:
            self._index = {x: i for i, x in enumerate(self.actions)}
        return self._index[action]

    def random_adversary_action(self, rng):
        """A representative random adversary action (used by scripted sequences)."""
        raise NotImplementedError
