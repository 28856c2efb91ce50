"""Translation matrices: admissibility, implementability, and generic builders.

A translation matrix assigns each learner action a row in [0,1]^N.  The engine
perturbs cumulative payoffs by ``alpha . row(action)`` where alpha is a shared
random vector.  Each column j also carries a weighted dataset S_j of adversary
actions whose payoff differences reproduce the column differences, so an
offline optimization oracle can absorb the perturbation as synthetic history:

    row(x)[j] - row(x')[j]  ==  sum_{(w, y) in S_j} w * (f(x, y) - f(x', y))

for every pair of learner actions x, x'.  A column is *negatively* realized by
a dataset S_j^- satisfying the same identity with the left side negated.
"""
from __future__ import annotations

import math
from dataclasses import dataclass, field
from typing import Any, Callable, Optional, Sequence

import numpy as np

from .errors import InvalidMatrixError, NotASeparatorError, ParameterError

# One perturbation column as synthetic history: (weight, adversary action) pairs.
WeightedDataset = list  # list[tuple[float, Any]]


def _validate_datasets(datasets, what):
    for j, ds in enumerate(datasets):
        for w, _ in ds:
            if not (w >= 0 and math.isfinite(w)):
                raise ParameterError(f"{what}[{j}] has weight {w!r}; weights must be nonnegative finite")


@dataclass(frozen=True)
class TranslationSpec:
    """A translation matrix given by a row accessor plus realizing datasets.

    ``row(action)`` returns the action's row (length ``num_columns``, entries
    in [0,1]).  ``datasets[j]`` realizes column j; ``negative_datasets``, when
    present, realize the negated columns and enable signed perturbations.
    """

    num_columns: int
    row: Callable[[Any], Sequence[float]]
    datasets: list = field(default_factory=list)
    negative_datasets: Optional[list] = None

    def __post_init__(self):
        if self.num_columns < 1:
            raise ParameterError("a translation matrix needs at least one column")
        if len(self.datasets) != self.num_columns:
            raise ParameterError("need exactly one dataset per column")
        _validate_datasets(self.datasets, "datasets")
        if self.negative_datasets is not None:
            if len(self.negative_datasets) != self.num_columns:
                raise ParameterError("need exactly one negative dataset per column")
            _validate_datasets(self.negative_datasets, "negative_datasets")


@dataclass(frozen=True)
class AdmissibilityReport:
    """Column statistics of a row table.

    kappa: maximum number of distinct values in any column.
    delta: minimum nonzero gap between two values within a column (1.0 when
           every column is constant, a degenerate case the definitions leave
           open).
    rows_distinct: no two rows identical; required for admissibility.
    """

    kappa: int
    delta: float
    rows_distinct: bool

    @property
    def admissible(self) -> bool:
        return self.rows_distinct


def rows_matrix(spec: TranslationSpec, actions) -> np.ndarray:
    """Tabulate ``spec.row`` over an action list as a dense matrix."""
    return np.array([np.asarray(spec.row(x), dtype=float) for x in actions])


def check_admissibility(rows) -> AdmissibilityReport:
    """Compute (kappa, delta) and row distinctness for an explicit row table."""
    try:
        mat = np.asarray(rows, dtype=float)
    except ValueError as exc:
        raise InvalidMatrixError(f"rows do not form a rectangular table: {exc}") from None
    if mat.ndim != 2 or mat.shape[0] == 0 or mat.shape[1] == 0:
        raise InvalidMatrixError("expected a nonempty 2-d row table")
    if np.any(~np.isfinite(mat)) or mat.min() < -1e-12 or mat.max() > 1 + 1e-12:
        raise InvalidMatrixError("entries must be finite and lie in [0, 1]")

    distinct_rows = len({tuple(r) for r in mat}) == mat.shape[0]
    kappa = 1
    delta = math.inf
    for j in range(mat.shape[1]):
        vals = np.unique(mat[:, j])
        kappa = max(kappa, len(vals))
        if len(vals) >= 2:
            delta = min(delta, float(np.min(np.diff(vals))))
    if not math.isfinite(delta):
        delta = 1.0
    return AdmissibilityReport(kappa=kappa, delta=delta, rows_distinct=distinct_rows)


def _dataset_payoff_sums(env, dataset) -> np.ndarray:
    """sum_{(w,y) in dataset} w * f(., y) as a vector over env.actions."""
    total = np.zeros(len(env.actions))
    for w, y in dataset:
        if w:
            total = total + w * env.payoff_vector(y)
    return total


def verify_implementability(spec: TranslationSpec, env, pairs=None, tol: float = 1e-9,
                            seed: int = 0) -> tuple[bool, float]:
    """Check the realizing identity for every column over the given action pairs.

    ``pairs`` is a list of (action, action) tuples; when omitted, all pairs are
    checked if the action space has at most 5000 actions, otherwise 1000
    seeded random pairs.  Returns (ok, worst absolute deviation).  When
    negative datasets are present the negated identity is checked too.
    """
    actions = env.actions
    if pairs is not None and len(pairs) == 0:
        raise ParameterError("pairs must be nonempty")

    max_dev = 0.0
    if pairs is None and len(actions) > 5000:
        pairs = random_action_pairs(actions, 1000, seed)
    if pairs is None:
        gamma = rows_matrix(spec, actions)
        for j in range(spec.num_columns):
            # The identity says row[:, j] - sums is constant across actions, so
            # the worst deviation over all pairs is the spread of the residual.
            resid = gamma[:, j] - _dataset_payoff_sums(env, spec.datasets[j])
            max_dev = max(max_dev, float(resid.max() - resid.min()))
            if spec.negative_datasets is not None:
                resid = gamma[:, j] + _dataset_payoff_sums(env, spec.negative_datasets[j])
                max_dev = max(max_dev, float(resid.max() - resid.min()))
    else:
        for x, xp in pairs:
            rx = np.asarray(spec.row(x), dtype=float)
            rxp = np.asarray(spec.row(xp), dtype=float)
            for j in range(spec.num_columns):
                lhs = rx[j] - rxp[j]
                rhs = sum(w * (env.payoff(x, y) - env.payoff(xp, y))
                          for w, y in spec.datasets[j])
                max_dev = max(max_dev, abs(lhs - rhs))
                if spec.negative_datasets is not None:
                    rhs = sum(w * (env.payoff(x, y) - env.payoff(xp, y))
                              for w, y in spec.negative_datasets[j])
                    max_dev = max(max_dev, abs(-lhs - rhs))
    return max_dev <= tol, max_dev


def random_action_pairs(actions, count: int, seed: int = 0):
    """Seeded sample of action pairs, for spot checks on large spaces."""
    rng = np.random.default_rng(seed)
    n = len(actions)
    idx = rng.integers(0, n, size=(count, 2))
    return [(actions[int(i)], actions[int(k)]) for i, k in idx]


def pseudo_complexity(spec: TranslationSpec) -> float:
    """max over columns of max(dataset size, total dataset weight)."""
    if not spec.datasets:
        raise ParameterError("spec has no datasets")
    worst = 0.0
    for ds in spec.datasets:
        worst = max(worst, float(len(ds)), float(sum(w for w, _ in ds)))
    return worst


def translation_from_distinguishing_set(env, probes) -> TranslationSpec:
    """Build a translation matrix from adversary actions that identify every action.

    Requires a binary payoff (f in {0, 1}).  Column z holds f(., z) and is
    realized by the singleton dataset {(1, z)}; if the probes distinguish all
    pairs of learner actions the result is (2, 1)-admissible.
    """
    actions = env.actions
    probes = list(probes)
    if len(actions) >= 2 and not probes:
        raise NotASeparatorError((actions[0], actions[1]), "empty probe set cannot distinguish actions")

    rows = []
    for x in actions:
        row = []
        for z in probes:
            v = env.payoff(x, z)
            if v not in (0.0, 1.0):
                raise ParameterError(f"payoff {v!r} is not binary on probe {z!r}")
            row.append(v)
        rows.append(tuple(row))

    seen = {}
    for i, r in enumerate(rows):
        if r in seen:
            raise NotASeparatorError((actions[seen[r]], actions[i]))
        seen[r] = i

    table = {x: np.array(r) for x, r in zip(actions, rows)}
    return TranslationSpec(
        num_columns=len(probes),
        row=lambda x: table[x],
        datasets=[[(1.0, z)] for z in probes],
    )
