"""Offline optimization oracles over weighted datasets of adversary actions.

An oracle maps a weighted dataset S = {(w, y)} to a learner action whose
weighted payoff is (near-)maximal.  The enumeration oracle here is exact and
doubles as the ground truth for every acceptance check; integer-weighted
oracles are supported through a rounding reduction that preserves epsilon
optimality.
"""
from __future__ import annotations

import math
from dataclasses import dataclass
from typing import Any, Callable

import numpy as np

from .errors import ParameterError


@dataclass(frozen=True)
class OracleContract:
    """An oracle callable plus its accuracy kind.

    kind "exact": optimize(env, dataset, epsilon) returns an action index with
    weighted payoff >= max - epsilon.  kind "c-approx": payoff >= c * max.
    """

    optimize: Callable
    kind: str = "exact"
    c: float = 1.0


def dataset_objective(env, dataset) -> np.ndarray:
    """Weighted payoff of every action against the dataset, in action order."""
    obj = np.zeros(len(env.actions))
    for w, y in dataset:
        if w:
            obj = obj + w * env.payoff_vector(y)
    return obj


def exact_enum_oracle(env, dataset, epsilon: float = 0.0) -> int:
    """Exact argmax by enumeration; ties go to the smallest action index.

    Returns the canonical index of the chosen action.  ``epsilon`` is accepted
    for interface compatibility; the answer is exactly optimal.
    """
    if len(env.actions) == 0:
        raise ParameterError("environment has no actions")
    return int(np.argmax(dataset_objective(env, dataset)))


def integral_wrap(dataset, epsilon: float):
    """Round a real-weighted dataset to integer weights floor(w |S| / epsilon).

    Any exact optimum of the rounded dataset is epsilon-optimal for the
    original.  The tiny additive guard absorbs float dust such as
    1.4 / 0.1 = 13.999...8 so exact multiples round as intended.
    """
    if epsilon <= 0:
        raise ParameterError("epsilon must be positive")
    size = len(dataset)
    return [(int(math.floor(w * size / epsilon + 1e-9)), y) for w, y in dataset]


def integral_enum_oracle(env, dataset) -> int:
    """Exact argmax for an integer-weighted dataset (enumeration)."""
    for w, _ in dataset:
        if not isinstance(w, (int, np.integer)):
            raise ParameterError(f"integral oracle got non-integer weight {w!r}")
    return exact_enum_oracle(env, dataset)


def integral_backed_oracle(env, dataset, epsilon: float) -> int:
    """Epsilon-accurate real-weighted oracle built from the integral one."""
    return integral_enum_oracle(env, integral_wrap(dataset, epsilon))


def capprox_guarantee_check(oracle, env, dataset, c: float, tol: float = 1e-9) -> bool:
    """True iff the oracle's pick achieves at least c * (enumerated maximum) - tol."""
    idx = oracle(env, dataset, 0.0)
    obj = dataset_objective(env, dataset)
    return bool(obj[idx] >= c * obj.max() - tol)
