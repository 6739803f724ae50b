"""Level proportions and quadratic-loss premium relativities.

Risk heterogeneity enters through a nonnegative unit-mean mixing variable.
All mixing integrals are evaluated by quantile substitution on (0, 1) with a
composite Gauss-Legendre rule graded toward u = 1, where the substituted
integrands carry algebraic endpoint singularities with small exponents
(a single global rule converges far too slowly there to meet the
order-doubling stability target).
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from functools import lru_cache

import numpy as np
from numpy.polynomial.legendre import leggauss
from scipy import stats

from .errors import NoMalusZone, NonFiniteIntegrand, QuadratureDivergence
from .scale import ScaleRules, build_transition_matrix, stationary_distribution
from .severity import ClaimTypePartition

DEFAULT_ORDER = 256

# Deepest geometric panel edge 1 - 2^-45; beyond that the edges would
# collide with 1.0 in double precision.
_MAX_PANELS = 45
_MIN_PANEL_ORDER = 8


class MixingDistribution:
    """Unit-mean law of the accident-proneness factor."""

    def quantile(self, u: float) -> float:
        raise NotImplementedError

    def mean(self) -> float:
        return 1.0


@dataclass(frozen=True)
class ExponentialUnitMixing(MixingDistribution):
    """Standard exponential heterogeneity, F(t) = 1 - exp(-t)."""

    def quantile(self, u):
        return -math.log1p(-u)


@dataclass(frozen=True)
class GammaUnitMixing(MixingDistribution):
    """Gamma heterogeneity with shape k and scale 1/k (unit mean)."""

    shape: float

    def __post_init__(self):
        if not self.shape > 0:
            raise ValueError(f"shape must be positive, got {self.shape}")

    def quantile(self, u):
        return float(stats.gamma.ppf(u, a=self.shape, scale=1.0 / self.shape))


@dataclass(frozen=True)
class DiracMixing(MixingDistribution):
    """Degenerate mixing at 1: homogeneous portfolio, relativities all one."""

    def quantile(self, u):
        return 1.0


@dataclass(frozen=True)
class SteadyStateProfile:
    lam: float
    proportions: np.ndarray
    relativities: np.ndarray
    malus_entry: int


@lru_cache(maxsize=8)
def _graded_rule(order: int) -> tuple[np.ndarray, np.ndarray]:
    """Composite Gauss-Legendre nodes/weights on (0, 1), graded toward 0 and 1.

    Quantile substitution leaves algebraic singularities at both endpoints for
    common mixing laws, so panel widths shrink geometrically toward each end.
    """
    if order < 16:
        raise ValueError(f"order must be >= 16, got {order}")
    depth = min(_MAX_PANELS, max(2, order // _MIN_PANEL_ORDER))
    per_panel = max(_MIN_PANEL_ORDER, order // depth)
    interior = sorted(
        {2.0 ** (-k) for k in range(1, depth)}
        | {1.0 - 2.0 ** (-k) for k in range(1, depth)}
    )
    edges = [0.0] + interior + [1.0]
    x, w = leggauss(per_panel)
    us, ws = [], []
    for a, b in zip(edges, edges[1:]):
        us.append((b - a) / 2 * x + (a + b) / 2)
        ws.append((b - a) / 2 * w)
    return np.concatenate(us), np.concatenate(ws)


def mix_integral(g, mixing: MixingDistribution, order: int = DEFAULT_ORDER) -> float:
    """Integral of ``g`` against the mixing law via quantile substitution."""
    us, ws = _graded_rule(order)
    total = 0.0
    for u, w in zip(us, ws):
        try:
            v = g(mixing.quantile(u))
        except (ZeroDivisionError, OverflowError) as exc:
            raise NonFiniteIntegrand(f"integrand failed at quantile {u}: {exc}") from exc
        if not math.isfinite(v):
            raise NonFiniteIntegrand(f"integrand returned {v} at quantile {u}")
        total += w * v
    return total


def malus_entry_level(relativities) -> int:
    """Smallest level whose relativity is at least 1."""
    for l, r in enumerate(relativities):
        if r >= 1:
            return l
    raise NoMalusZone("every relativity is below 1")


def steady_state_profile(
    lam: float,
    rules: ScaleRules,
    partition: ClaimTypePartition,
    mixing: MixingDistribution,
    order: int = DEFAULT_ORDER,
    check_convergence: bool = False,
) -> SteadyStateProfile:
    """Unconditional level proportions and premium relativities.

    The numerator and denominator integrals share the same quadrature nodes
    so the relativity ratios stay consistent.  With ``check_convergence`` the
    computation is repeated at doubled order and must agree within 1e-6.
    """
    if not lam > 0:
        raise ValueError(f"lambda must be positive, got {lam}")

    def profile_at(n):
        us, ws = _graded_rule(n)
        thetas = np.array([mixing.quantile(u) for u in us])
        pis = np.empty((len(us), rules.levels))
        for j, theta in enumerate(thetas):
            P = build_transition_matrix(rules, lam * theta, partition)
            pis[j] = stationary_distribution(P)
        den = ws @ pis
        num = (ws * thetas) @ pis
        return den, num / den

    proportions, relativities = profile_at(order)
    if check_convergence:
        p2, r2 = profile_at(2 * order)
        drift = max(np.abs(p2 - proportions).max(), np.abs(r2 - relativities).max())
        if drift > 1e-6:
            raise QuadratureDivergence(f"order doubling moved outputs by {drift:.3e}")
    return SteadyStateProfile(
        lam=lam,
        proportions=proportions,
        relativities=relativities,
        malus_entry=malus_entry_level(relativities),
    )
