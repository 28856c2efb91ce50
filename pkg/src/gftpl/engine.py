"""The perturbed-leader learning engine and its regret accounting.

Both runners draw one shared noise vector alpha per run (oblivious adversary)
and then play, each round, an exact maximizer of the perturbed cumulative
payoff, breaking ties toward the smallest canonical action index.  The
explicit runner perturbs by alpha . row(action); the oracle runner feeds the
offline oracle a synthetic history realizing the same perturbation, which by
the realizing identity induces the same objective differences, hence the same
choices under the shared tie-break.

Environments with payoff range [lo, hi] wider than [0, 1] are handled by the
standard rescaling: the engine's perturbation and synthetic-history weights
carry the factor (hi - lo), leaving translation rows in [0, 1] untouched.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import NamedTuple, Optional

import numpy as np

from .errors import ConfigError, ParameterError
from .perturbation import (
    POSITIVE_UNIFORM,
    SYMMETRIC_UNIFORM,
    PerturbationDistribution,
    sample_alpha,
)
from .translation import TranslationSpec, rows_matrix


class Round(NamedTuple):
    action: int          # canonical learner action index
    adversary: int       # first-appearance id of the adversary action this round
    payoff: float        # raw payoff f(x_t, y_t)
    objective: float     # perturbed objective value of the chosen action (raw units)


@dataclass
class RunTrace:
    """Record of one seeded run.

    ``final_action`` is the virtual choice after the last round (one extra
    optimizer call on the full history), which closes the stability telescope.
    """

    horizon: int
    rounds: list = field(default_factory=list)
    alpha: np.ndarray = None
    epsilon: float = 0.0
    final_action: int = 0

    @property
    def actions(self):
        return [r.action for r in self.rounds]

    @property
    def payoffs(self):
        return np.array([r.payoff for r in self.rounds])


def _argmax_index(objective: np.ndarray, subset) -> int:
    if subset is None:
        return int(np.argmax(objective))
    pos = int(np.argmax(objective[subset]))
    return int(subset[pos])


def _run_rounds(env, perturbation: np.ndarray, sequence, alpha, epsilon,
                subset=None) -> RunTrace:
    """Play argmax(cumulative payoff + perturbation) each round."""
    n_actions = len(env.actions)
    if n_actions == 0:
        raise ParameterError("environment has no actions")
    if subset is not None:
        subset = np.asarray(sorted(subset), dtype=int)
    lo, hi = env.payoff_lo, env.payoff_hi
    cum = np.zeros(n_actions)
    seen: dict = {}
    rounds = []
    for y in sequence:
        objective = cum + perturbation
        x = _argmax_index(objective, subset)
        vec = env.payoff_vector(y)
        pay = float(vec[x])
        assert lo - 1e-9 <= pay <= hi + 1e-9, "payoff outside the declared range"
        adv = seen.setdefault(y, len(seen))
        rounds.append(Round(x, adv, pay, float(objective[x])))
        cum = cum + vec
    final_action = _argmax_index(cum + perturbation, subset)
    return RunTrace(horizon=len(rounds), rounds=rounds, alpha=np.asarray(alpha, dtype=float),
                    epsilon=epsilon, final_action=final_action)


def _perturbation_from_rows(env, gamma: np.ndarray, alpha: np.ndarray) -> np.ndarray:
    return env.payoff_scale * (gamma @ alpha)


def _perturbation_from_datasets(env, spec: TranslationSpec, alpha) -> np.ndarray:
    """Weighted payoff of the fixed synthetic history, per action (raw units)."""
    scale = env.payoff_scale
    pert = np.zeros(len(env.actions))
    for j, a in enumerate(alpha):
        if a >= 0:
            coeff, dataset = a, spec.datasets[j]
        else:
            coeff, dataset = -a, spec.negative_datasets[j]
        for w, y in dataset:
            if w:
                pert = pert + (scale * coeff * w) * env.payoff_vector(y)
    return pert


def _scaled_synthetic_history(env, spec, alpha):
    scale = env.payoff_scale
    out = []
    for j, a in enumerate(alpha):
        if a >= 0:
            coeff, dataset = a, spec.datasets[j]
        else:
            coeff, dataset = -a, spec.negative_datasets[j]
        out.extend((scale * coeff * w, y) for w, y in dataset)
    return out


def _run_rounds_with_oracle(env, spec, alpha, sequence, epsilon, oracle) -> RunTrace:
    """Literal per-round oracle calls on history + scaled synthetic datasets."""
    synthetic = _scaled_synthetic_history(env, spec, alpha)
    history: list = []
    seen: dict = {}
    rounds = []
    for y in sequence:
        dataset = history + synthetic
        x = oracle(env, dataset, epsilon)
        objective = float(sum(w * env.payoff(env.actions[x], yy) for w, yy in dataset))
        pay = env.payoff(env.actions[x], y)
        adv = seen.setdefault(y, len(seen))
        rounds.append(Round(int(x), adv, float(pay), objective))
        history.append((1.0, y))
    final_action = oracle(env, history + synthetic, epsilon)
    return RunTrace(horizon=len(rounds), rounds=rounds, alpha=np.asarray(alpha, dtype=float),
                    epsilon=epsilon, final_action=int(final_action))


def run_ftpl_explicit(env, gamma_rows, dist: PerturbationDistribution, epsilon: float,
                      sequence, seed) -> RunTrace:
    """Generalized perturbed leader with an explicit row table.

    Enumerates the action space each round; intended for small spaces and for
    cross-checking the oracle-based runner.  ``epsilon`` is the optimization
    accuracy recorded for the regret decomposition (the runner itself picks an
    exact maximizer, which satisfies any epsilon >= 0).
    """
    gamma = np.asarray(gamma_rows, dtype=float)
    if gamma.shape[0] != len(env.actions):
        raise ParameterError("need one row per action")
    alpha = sample_alpha(dist, gamma.shape[1], seed)
    pert = _perturbation_from_rows(env, gamma, alpha)
    return _run_rounds(env, pert, sequence, alpha, epsilon)


def _oracle_epsilon(sequence) -> float:
    horizon = len(sequence)
    return 1.0 / math.sqrt(horizon) if horizon else 0.0


def run_oracle_ftpl(env, spec: TranslationSpec, dist: PerturbationDistribution,
                    sequence, seed, oracle=None, action_subset=None) -> RunTrace:
    """Oracle-based runner with nonnegative perturbations.

    Each round the optimizer sees the observed history (weight 1) plus every
    column dataset scaled by its drawn coordinate, at accuracy 1/sqrt(T).
    With ``oracle=None`` the exact enumeration optimizer runs incrementally;
    ``action_subset`` restricts it to a maximal-in-range family.  Passing an
    ``oracle`` callable invokes it on the literally constructed dataset
    instead.
    """
    if dist.kind != POSITIVE_UNIFORM:
        raise ParameterError("this runner needs a nonnegatively supported distribution")
    alpha = sample_alpha(dist, spec.num_columns, seed)
    epsilon = _oracle_epsilon(sequence)
    if oracle is not None:
        return _run_rounds_with_oracle(env, spec, alpha, sequence, epsilon, oracle)
    pert = _perturbation_from_datasets(env, spec, alpha)
    return _run_rounds(env, pert, sequence, alpha, epsilon, subset=action_subset)


def run_oracle_ftpl_signed(env, spec: TranslationSpec, dist: PerturbationDistribution,
                           sequence, seed, oracle=None, action_subset=None) -> RunTrace:
    """Oracle-based runner for sign-symmetric perturbations.

    Columns with a negative coordinate contribute their negatively realizing
    dataset scaled by |alpha_j|; nonnegative coordinates behave as in the
    unsigned runner.
    """
    if spec.negative_datasets is None:
        raise ConfigError("spec.negative_datasets",
                          "signed perturbations need negatively realizing datasets")
    if dist.kind != SYMMETRIC_UNIFORM:
        raise ParameterError("this runner expects the symmetric uniform distribution")
    alpha = sample_alpha(dist, spec.num_columns, seed)
    epsilon = _oracle_epsilon(sequence)
    if oracle is not None:
        return _run_rounds_with_oracle(env, spec, alpha, sequence, epsilon, oracle)
    pert = _perturbation_from_datasets(env, spec, alpha)
    return _run_rounds(env, pert, sequence, alpha, epsilon, subset=action_subset)


def _row_of(translation, env, action_index):
    if isinstance(translation, TranslationSpec):
        return np.asarray(translation.row(env.actions[action_index]), dtype=float)
    return np.asarray(translation[action_index], dtype=float)


def analyze_trace(trace: RunTrace, env, sequence, translation, c_factor: float = 1.0) -> dict:
    """Regret and its pathwise decomposition for one run.

    Returns regret, c_regret (hindsight benchmark scaled by ``c_factor``), the
    stability term sum_t f(x_{t+1}, y_t) - f(x_t, y_t), the perturbation term
    scale * alpha . (row(x_1) - row(x*)), the error term scale * eps * T, and
    the switch count.  For runs whose optimizer is exact over the full action
    space, regret <= stability + perturbation + error pathwise; restricted
    (maximal-in-range) runs satisfy it only against the in-range benchmark.
    """
    if trace.horizon != len(sequence):
        raise ParameterError("trace and sequence lengths disagree")
    if trace.horizon == 0:
        return {"regret": 0.0, "c_regret": 0.0, "stability_term": 0.0,
                "perturbation_term": 0.0, "error_term": 0.0, "switch_count": 0}

    cum = np.zeros(len(env.actions))
    stability = 0.0
    switches = 0
    learner_total = 0.0
    acts = trace.actions + [trace.final_action]
    for t, y in enumerate(sequence):
        vec = env.payoff_vector(y)
        cum = cum + vec
        learner_total += float(vec[acts[t]])
        stability += float(vec[acts[t + 1]] - vec[acts[t]])
        if acts[t + 1] != acts[t]:
            switches += 1

    best_index = int(np.argmax(cum))
    best_total = float(cum[best_index])
    scale = env.payoff_scale
    row_first = _row_of(translation, env, acts[0])
    row_best = _row_of(translation, env, best_index)
    perturbation = scale * float(np.dot(trace.alpha, row_first - row_best))

    return {
        "regret": best_total - learner_total,
        "c_regret": c_factor * best_total - learner_total,
        "stability_term": stability,
        "perturbation_term": perturbation,
        "error_term": scale * trace.epsilon * trace.horizon,
        "switch_count": switches,
    }
