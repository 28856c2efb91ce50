"""Perturbation distributions and tuning formulas for the learning engine.

Two uniform families are supported: positive uniform on [0, scale] (used by
the standard oracle-based runner) and symmetric uniform on [-scale, scale]
(used by the signed runner and the transductive contextual runner).
"""
from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import ParameterError

POSITIVE_UNIFORM = "positive-uniform"
SYMMETRIC_UNIFORM = "symmetric-uniform"


@dataclass(frozen=True)
class PerturbationDistribution:
    """A uniform perturbation law.

    ``scale`` is the right end of the support: 1/eta for the positive family,
    nu for the symmetric one.
    """

    kind: str
    scale: float

    def __post_init__(self):
        if self.kind not in (POSITIVE_UNIFORM, SYMMETRIC_UNIFORM):
            raise ParameterError(f"unknown distribution kind {self.kind!r}")
        if not (self.scale > 0 and math.isfinite(self.scale)):
            raise ParameterError("scale must be positive and finite")

    @property
    def support(self) -> tuple[float, float]:
        if self.kind == POSITIVE_UNIFORM:
            return 0.0, self.scale
        return -self.scale, self.scale

    @property
    def width(self) -> float:
        lo, hi = self.support
        return hi - lo

    def interval_mass(self, lo: float, hi: float) -> float:
        """Probability mass placed on [lo, hi] (exact, from the uniform CDF)."""
        a, b = self.support
        overlap = max(0.0, min(hi, b) - max(lo, a))
        return overlap / self.width

    def dispersion_rho(self, length: float) -> float:
        """Maximum mass on any interval of the given length."""
        if length < 0:
            raise ParameterError("interval length must be nonnegative")
        return min(1.0, length / self.width)

    def sample(self, n: int, seed) -> np.ndarray:
        if n < 1:
            raise ParameterError("need at least one coordinate")
        rng = np.random.default_rng(seed)
        lo, hi = self.support
        return rng.uniform(lo, hi, size=n)


def sample_alpha(dist: PerturbationDistribution, n: int, seed) -> np.ndarray:
    """Draw the shared noise vector: one i.i.d. coordinate per translation column."""
    return dist.sample(n, seed)


def eta_for_uniform(kappa: float, delta: float, horizon: float, epsilon: float = 0.0) -> float:
    """Tuned learning rate sqrt(delta / ((1 + 2 eps) * horizon * kappa)).

    The positive uniform distribution on [0, 1/eta] with this eta balances the
    stability and perturbation contributions to regret.
    """
    if kappa <= 0 or delta <= 0 or horizon <= 0:
        raise ParameterError("kappa, delta and horizon must be positive")
    if epsilon < 0:
        raise ParameterError("epsilon must be nonnegative")
    if delta > 1:
        raise ParameterError("delta cannot exceed 1")
    return math.sqrt(delta / ((1.0 + 2.0 * epsilon) * horizon * kappa))


def uniform_for_horizon(kappa, delta, horizon, epsilon=0.0) -> PerturbationDistribution:
    """Positive uniform distribution with the tuned scale 1/eta."""
    eta = eta_for_uniform(kappa, delta, horizon, epsilon)
    return PerturbationDistribution(POSITIVE_UNIFORM, 1.0 / eta)


def symmetric_uniform(nu: float) -> PerturbationDistribution:
    return PerturbationDistribution(SYMMETRIC_UNIFORM, nu)


def nu_for_transductive(horizon, kappa, delta, num_columns, num_contexts,
                        num_actions, epsilon=0.0) -> float:
    """Half-width of the symmetric uniform law for the transductive runner.

    ``num_columns`` is the column count of the base (non-contextual) matrix,
    ``num_contexts`` the size of the transductive set, and ``num_actions`` the
    size of the base action space.
    """
    if min(horizon, kappa, delta, num_columns, num_contexts) <= 0:
        raise ParameterError("sizes must be positive")
    if num_actions < 2:
        raise ParameterError("need at least two actions")
    num = math.sqrt(horizon * kappa * (1.0 + 2.0 * epsilon)) * num_columns ** 0.25
    den = math.sqrt(delta) * (num_contexts * math.log(num_actions)) ** 0.25
    return num / den
