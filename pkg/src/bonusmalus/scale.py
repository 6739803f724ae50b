"""Bonus-malus scale rules, exact transition matrices and stationary analysis.

A scale has levels ``0..s``.  A claim-free year moves the policyholder one
level down (floored at 0); each claim of type ``i`` moves them ``penalty[i]``
levels up (capped at ``s``).  Given the annual mean claim frequency the
per-type claim counts are independent Poisson thinnings, which makes the
one-step transition matrix exactly computable by finite enumeration.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np

from .errors import NotRegularError, SingularSystem, ZeroPenalty
from .severity import ClaimTypePartition


@dataclass(frozen=True)
class ScaleRules:
    """Number of levels and per-claim-type penalties (levels per claim)."""

    levels: int
    penalties: tuple[int, ...]

    def __post_init__(self):
        if self.levels < 2:
            raise ValueError(f"need at least 2 levels, got {self.levels}")
        if any(p < 1 for p in self.penalties):
            raise ZeroPenalty(f"every penalty must be >= 1, got {self.penalties}")
        if any(b < a for a, b in zip(self.penalties, self.penalties[1:])):
            raise ValueError(f"penalties must be nondecreasing in claim type: {self.penalties}")

    @property
    def top(self) -> int:
        return self.levels - 1


@dataclass(frozen=True)
class TransitionMatrix:
    entries: np.ndarray  # (s+1, s+1), row stochastic
    frequency: float
    partition: ClaimTypePartition


def thinned_pmf(rate: float, j: int) -> float:
    """Poisson probability of ``j`` claims at thinned rate ``rate``."""
    if rate < 0 or j < 0:
        raise ValueError(f"need rate >= 0 and j >= 0, got {rate}, {j}")
    if rate == 0:
        return 1.0 if j == 0 else 0.0
    return math.exp(j * math.log(rate) - rate - math.lgamma(j + 1))


@lru_cache(maxsize=None)
def _jump_vectors(penalties: tuple[int, ...], jump: int) -> tuple[tuple[int, ...], ...]:
    """All claim-count vectors whose total penalty is exactly ``jump``."""

    def rec(i, remaining):
        if i == len(penalties) - 1:
            p = penalties[i]
            if remaining % p == 0:
                yield (remaining // p,)
            return
        p = penalties[i]
        for n in range(remaining // p + 1):
            for tail in rec(i + 1, remaining - n * p):
                yield (n,) + tail

    return tuple(rec(0, jump))


def build_transition_matrix(rules: ScaleRules, frequency: float, partition: ClaimTypePartition) -> TransitionMatrix:
    """Exact one-step transition matrix at mean claim frequency ``frequency``.

    Rows for target levels below the top are computed by enumerating every
    claim vector with the exact total penalty; the top-level entry is the
    complement, so each row sums to one by construction.
    """
    if frequency < 0:
        raise ValueError(f"frequency must be nonnegative, got {frequency}")
    if len(partition.probabilities) != len(rules.penalties):
        raise ValueError("one penalty per claim type is required")
    s = rules.top
    qs = partition.probabilities
    rates = [frequency * q for q in qs]
    no_claim = math.exp(-frequency)

    P = np.zeros((s + 1, s + 1))
    for l0 in range(s + 1):
        P[l0, max(l0 - 1, 0)] += no_claim
        for target in range(l0 + 1, s):
            prob = 0.0
            for counts in _jump_vectors(rules.penalties, target - l0):
                term = 1.0
                for rate, n in zip(rates, counts):
                    term *= thinned_pmf(rate, n)
                prob += term
            P[l0, target] = prob
        P[l0, s] = max(0.0, 1.0 - P[l0, :s].sum())
    return TransitionMatrix(entries=P, frequency=frequency, partition=partition)


def is_regular(P: TransitionMatrix, max_power: int | None = None) -> int:
    """Smallest power with entrywise-positive support, else NotRegularError.

    Works on the boolean support matrix so extreme frequencies cannot
    underflow the check.
    """
    entries = P.entries if isinstance(P, TransitionMatrix) else np.asarray(P)
    n = entries.shape[0]
    if max_power is None:
        max_power = n * n
    if max_power < 1:
        raise ValueError(f"max_power must be >= 1, got {max_power}")
    support = entries > 0
    power = support.copy()
    for k in range(1, max_power + 1):
        if power.all():
            return k
        power = (power.astype(np.int64) @ support.astype(np.int64)) > 0
    raise NotRegularError(max_power)


def _solve_stationary(entries: np.ndarray) -> np.ndarray:
    """Solve pi^T (I - P + E) = e^T by LU with partial pivoting."""
    n = entries.shape[0]
    A = np.eye(n) - entries + np.ones((n, n))
    try:
        pi = np.linalg.solve(A.T, np.ones(n))
    except np.linalg.LinAlgError as exc:
        raise SingularSystem(str(exc)) from exc
    return pi


def stationary_distribution(P: TransitionMatrix) -> np.ndarray:
    """Stationary level distribution of a regular transition matrix."""
    is_regular(P)
    return _solve_stationary(P.entries)


def closed_form_stationary_4level(frequency: float, partition: ClaimTypePartition) -> np.ndarray:
    """Closed-form stationary vector for the 4-level scale with penalties (1, 2, 3, 3)."""
    if partition.n_types != 4:
        raise ValueError("closed form requires exactly 4 claim types")
    if not frequency > 0:
        raise ValueError(f"frequency must be positive, got {frequency}")
    q0, q1 = partition.probabilities[0], partition.probabilities[1]
    y = frequency
    e1, e2, e3 = math.exp(-y), math.exp(-2 * y), math.exp(-3 * y)
    delta = 1.0 - 2 * y * q0 * e2 - y * q1 * e3 - (y * q0) ** 2 / 2 * e3
    pi0 = e3 / delta
    pi1 = (e2 - e3) / delta
    pi2 = (e1 - e2 - y * q0 * e3) / delta
    pi3 = (1 - e1 - 2 * y * q0 * e2 + y * (q0 - q1) * e3 - (y * q0) ** 2 / 2 * e3) / delta
    return np.array([pi0, pi1, pi2, pi3])
