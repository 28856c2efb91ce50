"""Adversary sequence generators and stochastic-benchmark utilities.

Supports scripted (pseudo-random but fixed) sequences, i.i.d. draws from a
finite-support distribution, and the sticky Markov chain that repeats the
previous action with probability rho and otherwise redraws from the base
distribution.  The sticky chain is reversible with stationary law equal to the
base distribution and spectral gap at least (1 - rho)^2 / 8.
"""
from __future__ import annotations

import math

import numpy as np

from .errors import ParameterError


def _check_distribution(support, probs):
    if len(support) == 0 or len(support) != len(probs):
        raise ParameterError("support and probabilities must be nonempty and aligned")
    if any(p < 0 for p in probs) or abs(sum(probs) - 1.0) > 1e-9:
        raise ParameterError("probabilities must be nonnegative and sum to 1")


def scripted_sequence(env, length: int, seed):
    """A fixed pseudo-random script of adversary actions from the environment's sampler."""
    rng = np.random.default_rng(seed)
    return [env.random_adversary_action(rng) for _ in range(length)]


def iid_sequence(support, probs, length: int, seed):
    _check_distribution(support, probs)
    rng = np.random.default_rng(seed)
    idx = rng.choice(len(support), size=length, p=np.asarray(probs, dtype=float))
    return [support[int(i)] for i in idx]


def sticky_sequence(support, probs, rho: float, length: int, seed):
    """Sticky Markov chain started from its stationary distribution."""
    _check_distribution(support, probs)
    if not 0.5 <= rho < 1.0:
        raise ParameterError("stickiness must lie in [0.5, 1)")
    rng = np.random.default_rng(seed)
    p = np.asarray(probs, dtype=float)
    out = [support[int(rng.choice(len(support), p=p))]]
    for _ in range(1, length):
        if rng.random() < rho:
            out.append(out[-1])
        else:
            out.append(support[int(rng.choice(len(support), p=p))])
    return out


def generate(config: dict, seed, env=None):
    """Dispatch on config["kind"]: scripted | iid | sticky.

    scripted: {"script": [...]} for an explicit list, or {"length", "script_seed"}
    to sample from the environment; the same script is produced for every seed.
    iid / sticky: {"support", "probs", "length"} (+ "rho" for sticky), drawn
    with the per-run seed.
    """
    kind = config.get("kind")
    if kind == "scripted":
        if "script" in config:
            return list(config["script"])
        if env is None:
            raise ParameterError("scripted generation from a sampler needs an environment")
        return scripted_sequence(env, config["length"], config["script_seed"])
    if kind == "iid":
        return iid_sequence(config["support"], config["probs"], config["length"], seed)
    if kind == "sticky":
        return sticky_sequence(config["support"], config["probs"], config["rho"],
                               config["length"], seed)
    raise ParameterError(f"unknown adversary kind {kind!r}")


def spectral_gap_lower_bound(rho: float) -> float:
    """Cheeger-based lower bound (1 - rho)^2 / 8 for the sticky chain's gap."""
    if not 0.5 <= rho < 1.0:
        raise ParameterError("stickiness must lie in [0.5, 1)")
    return (1.0 - rho) ** 2 / 8.0


def stochastic_benchmark(env, support, probs):
    """Best fixed action against a finite-support distribution.

    Returns (action index, sup_x E[f(x, y)]), computed exactly by enumeration.
    """
    _check_distribution(support, probs)
    expected = np.zeros(len(env.actions))
    for p, y in zip(probs, support):
        if p:
            expected = expected + p * env.payoff_vector(y)
    idx = int(np.argmax(expected))
    return idx, float(expected[idx])


def convergence_bound(regret: float, horizon: int, delta: float, mode: str,
                      gamma: float = None) -> float:
    """High-probability gap between average payoff and the distributional benchmark.

    iid mode: sqrt(log(2/delta) / (2 T)) + regret / T.
    markov mode: sqrt(14 log(2/delta) / (gamma T)) + regret / T for a
    stationary reversible chain with spectral gap gamma.
    """
    if horizon <= 0 or delta <= 0 or delta > 1:
        raise ParameterError("need horizon > 0 and delta in (0, 1]")
    if mode == "iid":
        conc = math.sqrt(math.log(2.0 / delta) / (2.0 * horizon))
    elif mode == "markov":
        if gamma is None or gamma <= 0:
            raise ParameterError("markov mode needs a positive spectral gap")
        conc = math.sqrt(14.0 * math.log(2.0 / delta) / (gamma * horizon))
    else:
        raise ParameterError(f"unknown mode {mode!r}")
    return conc + regret / horizon
