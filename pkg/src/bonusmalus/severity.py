"""Claim-size models, claim-type partitions and conditional moments.

Claims are classified into ``m + 1`` types by severity thresholds
``c_1 < c_2 < ... < c_m``: type 0 collects claims of size at most ``c_1``,
type ``i`` (``1 <= i <= m - 1``) claims in ``(c_i, c_{i+1}]`` and type ``m``
claims above ``c_m``.  Everything downstream (transition rules, deductible
allocation, simulation) consumes only the CDF, the mean and truncated means
of the severity law, so a new law only needs those three methods.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .errors import DegenerateType, EmptyBand, NegativeDeductible, NonIncreasingThresholds


class ClaimSeverity:
    """Interface for a continuous positive claim-size distribution."""

    def cdf(self, y: float) -> float:
        raise NotImplementedError

    def mean(self) -> float:
        raise NotImplementedError

    def truncated_mean(self, d: float) -> float:
        """E[C * 1{C <= d}], the limited first moment at d."""
        raise NotImplementedError

    def ppf(self, u: float) -> float:
        raise NotImplementedError


@dataclass(frozen=True)
class ExponentialSeverity(ClaimSeverity):
    """Exponential claim sizes with mean ``mu``."""

    mu: float

    def __post_init__(self):
        if not self.mu > 0:
            raise ValueError(f"mean must be positive, got {self.mu}")

    def cdf(self, y):
        if y <= 0:
            return 0.0
        return -math.expm1(-y / self.mu)

    def mean(self):
        return self.mu

    def truncated_mean(self, d):
        if d < 0:
            raise NegativeDeductible(f"deductible must be nonnegative, got {d}")
        if math.isinf(d):
            return self.mu
        # mu*(1 - e^{-d/mu}) - d*e^{-d/mu}
        e = math.exp(-d / self.mu)
        return -self.mu * math.expm1(-d / self.mu) - d * e

    def ppf(self, u):
        arr = np.asarray(u, dtype=float)
        if (arr < 0).any() or (arr >= 1).any():
            raise ValueError("u must be in [0, 1)")
        out = -self.mu * np.log1p(-arr)
        return float(out) if arr.ndim == 0 else out


@dataclass(frozen=True)
class ClaimTypePartition:
    """Severity thresholds and the induced type probabilities.

    Built through :func:`type_probabilities` so that the probabilities are
    always consistent with the thresholds and the severity CDF.
    """

    thresholds: tuple[float, ...]
    probabilities: tuple[float, ...]

    @property
    def n_types(self) -> int:
        return len(self.probabilities)


def type_probabilities(model: ClaimSeverity, thresholds) -> ClaimTypePartition:
    """Split the severity law at ``thresholds`` into claim-type probabilities.

    Raises NonIncreasingThresholds for an unordered or nonpositive grid and
    DegenerateType if any type carries zero probability mass.
    """
    cs = tuple(float(c) for c in thresholds)
    if not cs:
        raise NonIncreasingThresholds("at least one threshold is required")
    if cs[0] <= 0 or any(b <= a for a, b in zip(cs, cs[1:])):
        raise NonIncreasingThresholds(f"thresholds must be positive and strictly increasing: {cs}")
    cum = [model.cdf(c) for c in cs]
    qs = [cum[0]]
    qs += [b - a for a, b in zip(cum, cum[1:])]
    qs.append(1.0 - cum[-1])
    for i, q in enumerate(qs):
        if q <= 0:
            raise DegenerateType(f"claim type {i} has probability {q}")
    return ClaimTypePartition(thresholds=cs, probabilities=tuple(qs))


def truncated_mean(model: ClaimSeverity, d: float) -> float:
    """E[C * 1{C <= d}] for deductible level ``d >= 0``."""
    return model.truncated_mean(d)


def band_mean(model: ClaimSeverity, a: float, b: float) -> float:
    """Conditional mean E[C | a < C <= b]; ``b`` may be ``math.inf``."""
    if not 0 <= a < b:
        raise ValueError(f"need 0 <= a < b, got a={a}, b={b}")
    upper_cdf = 1.0 if math.isinf(b) else model.cdf(b)
    mass = upper_cdf - model.cdf(a)
    if mass <= 0:
        raise EmptyBand(f"no probability mass in ({a}, {b}]")
    upper_tm = model.mean() if math.isinf(b) else model.truncated_mean(b)
    return (upper_tm - model.truncated_mean(a)) / mass


def band_means(model: ClaimSeverity, partition: ClaimTypePartition) -> list[float]:
    """Conditional mean claim size of each type, type 0 through type m."""
    cs = partition.thresholds
    edges = (0.0,) + cs + (math.inf,)
    return [band_mean(model, a, b) for a, b in zip(edges, edges[1:])]


def max_penalty_f(model: ClaimSeverity, partition: ClaimTypePartition) -> float:
    """Largest expected per-claim recovery achievable by any deductible row.

    Equals E[C | C <= c_1] q_0 + c_1 q_1 + ... + c_m q_m, attained when every
    deductible sits at its upper cap.  Always strictly below E[C].
    """
    cs = partition.thresholds
    qs = partition.probabilities
    total = model.truncated_mean(cs[0])
    for c, q in zip(cs, qs[1:]):
        total += c * q
    return total
