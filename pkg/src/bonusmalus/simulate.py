"""Monte Carlo check of the analytic pipeline.

Simulates a portfolio through the scale: each policy draws an
accident-proneness factor once, then yearly per-type Poisson claim counts
drive the level transitions.  Empirical level occupancies, mean proneness
per level and deductible recoveries per policy-year are compared against
the analytic proportions, relativities and the premium-reduction identity.
"""

from __future__ import annotations

import math
from dataclasses import dataclass

import numpy as np

from .deductible import DeductibleSchedule
from .relativity import MixingDistribution
from .scale import ScaleRules
from .severity import ClaimSeverity, ClaimTypePartition


@dataclass(frozen=True)
class SimulationConfig:
    n_policies: int
    sample_years: int
    burn_in_years: int = 200
    seed: int = 0
    initial_level: int = 0

    def __post_init__(self):
        if self.n_policies < 1 or self.sample_years < 1 or self.burn_in_years < 0:
            raise ValueError("n_policies and sample_years must be >= 1, burn_in_years >= 0")


@dataclass(frozen=True)
class SimulationReport:
    empirical_proportions: np.ndarray
    proportion_se: np.ndarray
    empirical_relativities: np.ndarray   # mean proneness of level occupants
    relativity_se: np.ndarray
    mean_deductible_paid: np.ndarray     # per policy-year at each level
    deductible_se: np.ndarray


def _band_edges(partition: ClaimTypePartition) -> list[tuple[float, float]]:
    cs = partition.thresholds
    edges = (0.0,) + cs + (math.inf,)
    return list(zip(edges, edges[1:]))


def _ratio_se(num, den):
    """Standard error of sum(num)/sum(den) across independent policies."""
    n = len(num)
    den_mean = den.mean()
    if den_mean == 0:
        return math.nan
    ratio = num.sum() / den.sum()
    influence = num - ratio * den
    return math.sqrt(influence.var(ddof=1) / n) / den_mean


def simulate_portfolio(
    config: SimulationConfig,
    lam: float,
    rules: ScaleRules,
    partition: ClaimTypePartition,
    model: ClaimSeverity,
    mixing: MixingDistribution,
    schedule: DeductibleSchedule | None = None,
) -> SimulationReport:
    """Run the portfolio and collect per-level statistics after burn-in."""
    rng = np.random.default_rng(np.random.SeedSequence(config.seed))
    n = config.n_policies
    s = rules.top
    qs = np.array(partition.probabilities)
    penalties = np.array(rules.penalties)

    theta = np.array([mixing.quantile(u) for u in rng.random(n)])
    level = np.full(n, config.initial_level, dtype=np.int64)

    occupancy = np.zeros((n, s + 1))
    paid = np.zeros((n, s + 1))
    d_full = schedule.full_matrix(s + 1) if schedule is not None else None
    bands = _band_edges(partition)
    band_cdf = [(model.cdf(a), 1.0 if math.isinf(b) else model.cdf(b)) for a, b in bands]

    for year in range(config.burn_in_years + config.sample_years):
        sampling = year >= config.burn_in_years
        counts = rng.poisson(lam * theta[:, None] * qs[None, :])
        if sampling:
            np.add.at(occupancy, (np.arange(n), level), 1.0)
            if d_full is not None:
                for i, (fa, fb) in enumerate(band_cdf):
                    c = counts[:, i]
                    for k in range(int(c.max())):
                        mask = c > k
                        u = rng.random(int(mask.sum()))
                        sev = np.asarray(model.ppf(fa + u * (fb - fa)))
                        pay = np.minimum(sev, d_full[level[mask], i])
                        np.add.at(paid, (np.nonzero(mask)[0], level[mask]), pay)
        claimed = counts.sum(axis=1) > 0
        jump = counts @ penalties
        level = np.where(claimed, np.minimum(s, level + jump), np.maximum(level - 1, 0))

    years = float(config.sample_years)
    frac = occupancy / years
    proportions = frac.mean(axis=0)
    proportion_se = frac.std(axis=0, ddof=1) / math.sqrt(n)

    relativities = np.empty(s + 1)
    relativity_se = np.empty(s + 1)
    mean_paid = np.empty(s + 1)
    paid_se = np.empty(s + 1)
    for l in range(s + 1):
        occ = occupancy[:, l]
        total = occ.sum()
        if total == 0:
            relativities[l] = relativity_se[l] = math.nan
            mean_paid[l] = paid_se[l] = math.nan
            continue
        relativities[l] = (theta * occ).sum() / total
        relativity_se[l] = _ratio_se(theta * occ, occ)
        mean_paid[l] = paid[:, l].sum() / total
        paid_se[l] = _ratio_se(paid[:, l], occ)
    return SimulationReport(
        empirical_proportions=proportions,
        proportion_se=proportion_se,
        empirical_relativities=relativities,
        relativity_se=relativity_se,
        mean_deductible_paid=mean_paid,
        deductible_se=paid_se,
    )
