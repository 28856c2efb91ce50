"""Contextual learning: policy classes, separators, and context-extended runs.

A policy maps contexts to base-environment actions.  Given a translation
matrix for the base setting and a context set Q, the Q-extension has one
column per (context, base column) pair holding the base entry of the action
the policy plays on that context; its datasets are context-annotated copies of
the base datasets.  Separator contexts make the extension admissible; when the
whole context universe is known up front (the transductive setting), the
signed runner with symmetric noise keeps regret sublinear even for large Q.
"""
from __future__ import annotations

import itertools
from dataclasses import dataclass

import numpy as np

from .engine import RunTrace, run_oracle_ftpl, run_oracle_ftpl_signed
from .errors import ParameterError
from .perturbation import PerturbationDistribution, symmetric_uniform
from .translation import TranslationSpec
from .environments.base import Environment


@dataclass(frozen=True)
class PolicyClass:
    """Explicitly enumerated policies over an explicit context universe.

    ``policies[p][c]`` is the base action policy p plays on ``contexts[c]``.
    """

    contexts: tuple
    policies: tuple

    def __post_init__(self):
        for p in self.policies:
            if len(p) != len(self.contexts):
                raise ParameterError("every policy must be total on the context universe")

    def context_position(self, context) -> int:
        try:
            return self.contexts.index(context)
        except ValueError:
            raise ParameterError(f"unknown context {context!r}") from None

    def evaluate(self, policy_index: int, context):
        return self.policies[policy_index][self.context_position(context)]


def make_policy_class(contexts, policies) -> PolicyClass:
    return PolicyClass(tuple(contexts), tuple(tuple(p) for p in policies))


def or_of_features_policies(num_features: int, actions_if_one, actions_if_zero,
                            contexts=None) -> PolicyClass:
    """Policies that OR a subset of boolean features to pick between two action pools.

    A policy is (feature subset S, a, b): play ``a`` when any selected feature
    fires, else ``b``.  Duplicate context->action maps (e.g. the empty subset
    with different ``a``) are collapsed.  Default context universe: the unit
    vectors plus the all-zero vector, which separates this class.
    """
    if set(actions_if_one) & set(actions_if_zero):
        raise ParameterError("the two action pools must be disjoint")
    if contexts is None:
        contexts = unit_and_zero_contexts(num_features)
    contexts = tuple(contexts)
    seen = {}
    for mask in range(1 << num_features):
        for a in actions_if_one:
            for b in actions_if_zero:
                mapped = tuple(a if any(sigma[i] for i in range(num_features) if mask >> i & 1)
                               else b for sigma in contexts)
                seen.setdefault(mapped, None)
    return PolicyClass(contexts, tuple(seen))


def unit_and_zero_contexts(num_features: int):
    out = []
    for i in range(num_features):
        v = [0] * num_features
        v[i] = 1
        out.append(tuple(v))
    out.append(tuple([0] * num_features))
    return out


def verify_separator(policy_class: PolicyClass, probe_contexts):
    """Exhaustively check that every pair of policies disagrees on some probe.

    Returns (True, None) or (False, (i, j)) with a counterexample policy pair.
    """
    positions = [policy_class.context_position(sigma) for sigma in probe_contexts]
    seen: dict = {}
    for i, p in enumerate(policy_class.policies):
        key = tuple(p[c] for c in positions)
        if key in seen:
            return False, (seen[key], i)
        seen[key] = i
    return True, None


def q_extension(spec: TranslationSpec, probe_contexts, policy_class: PolicyClass) -> TranslationSpec:
    """Context-extend a base translation matrix over the given contexts.

    Rows are indexed by policy index; columns are ordered context-major:
    (sigma_0, j=0..N-1), (sigma_1, ...), ...  Dataset entries pair each base
    adversary action with its context.
    """
    probes = tuple(probe_contexts)
    if not probes:
        raise ParameterError("need at least one context")
    positions = [policy_class.context_position(sigma) for sigma in probes]

    datasets = []
    negatives = [] if spec.negative_datasets is not None else None
    for sigma in probes:
        for j in range(spec.num_columns):
            datasets.append([(w, (sigma, y)) for w, y in spec.datasets[j]])
            if negatives is not None:
                negatives.append([(w, (sigma, y)) for w, y in spec.negative_datasets[j]])

    base_row = spec.row
    policies = policy_class.policies

    def row(policy_index):
        parts = [np.asarray(base_row(policies[policy_index][c]), dtype=float)
                 for c in positions]
        return np.concatenate(parts)

    return TranslationSpec(num_columns=spec.num_columns * len(probes), row=row,
                           datasets=datasets, negative_datasets=negatives)


class ContextualEnvironment(Environment):
    """Wrap a base environment so that actions are policy indices.

    Adversary actions are (context, base adversary action) pairs; the payoff
    is the base payoff of the action the policy plays on that context.
    """

    def __init__(self, base_env, policy_class: PolicyClass):
        self.base_env = base_env
        self.policy_class = policy_class
        self.payoff_lo = base_env.payoff_lo
        self.payoff_hi = base_env.payoff_hi
        # base action index of each policy's play, per context position
        self._play = np.array(
            [[base_env.action_index(a) for a in policy] for policy in policy_class.policies],
            dtype=int)
        super().__init__(range(len(policy_class.policies)))

    def payoff(self, action, adversary_action) -> float:
        sigma, y = adversary_action
        return self.base_env.payoff(self.policy_class.evaluate(action, sigma), y)

    def payoff_vector(self, adversary_action):
        vec = self._payoff_cache.get(adversary_action)
        if vec is None:
            sigma, y = adversary_action
            pos = self.policy_class.context_position(sigma)
            vec = self.base_env.payoff_vector(y)[self._play[:, pos]]
            vec.setflags(write=False)
            self._payoff_cache[adversary_action] = vec
        return vec

    def random_adversary_action(self, rng):
        sigma = self.policy_class.contexts[rng.integers(len(self.policy_class.contexts))]
        return (sigma, self.base_env.random_adversary_action(rng))


def run_contextual_ftpl(policy_class: PolicyClass, base_env, base_spec: TranslationSpec,
                        separator, dist: PerturbationDistribution, sequence, seed,
                        check_separator: bool = True) -> RunTrace:
    """Separator-based contextual run: the extension over Q with positive noise."""
    if check_separator:
        ok, pair = verify_separator(policy_class, separator)
        if not ok:
            raise ParameterError(f"probe contexts do not separate policies {pair}")
    env = ContextualEnvironment(base_env, policy_class)
    spec = q_extension(base_spec, separator, policy_class)
    return run_oracle_ftpl(env, spec, dist, sequence, seed)


def run_transductive_ftpl(policy_class: PolicyClass, base_env, base_spec: TranslationSpec,
                          transductive_contexts, nu: float, sequence, seed) -> RunTrace:
    """Transductive contextual run with symmetric uniform noise on [-nu, nu].

    Every arriving context must belong to the declared transductive set; the
    base matrix must carry negative datasets since coordinates can be negative.
    """
    allowed = set(transductive_contexts)
    for t, (sigma, _) in enumerate(sequence):
        if sigma not in allowed:
            raise ParameterError(f"round {t}: context {sigma!r} outside the transductive set")
    env = ContextualEnvironment(base_env, policy_class)
    spec = q_extension(base_spec, transductive_contexts, policy_class)
    return run_oracle_ftpl_signed(env, spec, symmetric_uniform(nu), sequence, seed)
