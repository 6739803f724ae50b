"""Built-in demonstration tariffs and their rating tables.

Two 4-level tariffs (exponential claims with mean 2, exponential-unit
heterogeneity, penalties 1/2/3/3) with twelve schedule variants covering
every allocation principle.  Used by the ``tables`` CLI subcommand and the
golden tests.
"""

from __future__ import annotations

from dataclasses import dataclass
from functools import lru_cache

from .deductible import (
    DeductibleSchedule,
    allocate_greedy_top,
    allocate_manual,
    allocate_proportional_top,
    allocate_single_type,
)
from .relativity import ExponentialUnitMixing, SteadyStateProfile, steady_state_profile
from .scale import ScaleRules
from .severity import ExponentialSeverity, type_probabilities

TABLE_NUMBERS = tuple(range(1, 13))

_RULES = ScaleRules(levels=4, penalties=(1, 2, 3, 3))
_MODEL = ExponentialSeverity(mu=2.0)
_LAMBDA = 0.1
_THRESHOLDS_A = (1.0, 2.0, 4.0)
_THRESHOLDS_B = (0.3, 1.2, 2.8)


@dataclass(frozen=True)
class RatingTable:
    number: int
    profile: SteadyStateProfile
    schedule: DeductibleSchedule
    mean: float

    def header(self) -> list[str]:
        m = self.schedule.deductibles.shape[1] - 1
        return ["l", "pi_l", "r_l", "premium", "alpha_l", "reduced_premium"] + [
            f"d_{i}" for i in range(m + 1)
        ]

    def rows(self) -> list[list[float]]:
        """One row per level, top level first."""
        out = []
        lam = self.profile.lam
        for l in range(len(self.profile.proportions) - 1, -1, -1):
            pi = self.profile.proportions[l]
            r = self.profile.relativities[l]
            premium = lam * r * self.mean
            alpha = self.schedule.alpha_at(l)
            row = [float(l), pi, r, premium, alpha, (1 - alpha) * premium]
            row.extend(self.schedule.row_at(l))
            out.append(row)
        return out


@lru_cache(maxsize=2)
def _demo_case(thresholds):
    model = _MODEL
    partition = type_probabilities(model, thresholds)
    profile = steady_state_profile(_LAMBDA, _RULES, partition, ExponentialUnitMixing())
    return model, partition, profile


def build_table(number: int) -> RatingTable:
    if number in (1, 2, 3, 4, 5, 6, 7, 8, 9):
        model, partition, profile = _demo_case(_THRESHOLDS_A)
    elif number in (10, 11, 12):
        model, partition, profile = _demo_case(_THRESHOLDS_B)
    else:
        raise ValueError(f"no built-in table {number}")
    r = profile.relativities

    if number == 1:
        _, schedule = allocate_proportional_top(0.05, r, model, partition)
    elif number == 2:
        _, schedule = allocate_proportional_top(0.13, r, model, partition)
    elif number == 3:
        schedule = allocate_greedy_top(0.05, r, model, partition)
    elif number == 4:
        schedule = allocate_greedy_top(0.13, r, model, partition)
    elif number == 5:
        schedule = allocate_single_type((0.06, 0.13, 0.24), r, model, partition)
    elif number == 6:
        schedule = allocate_single_type((0.24, 0.25, 0.26), r, model, partition)
    elif number == 7:
        schedule = allocate_manual(
            (0.24, 0.25, 0.26), r, model, partition,
            fixed=[{2: 1.1}, {2: 1.1}, {2: 1.1}], free_type=3,
        )
    elif number == 8:
        schedule = allocate_manual(
            (0.35, 0.40, 0.45), r, model, partition,
            fixed=[{2: 1.5}, {2: 1.6}, {2: 1.7}], free_type=3,
        )
    elif number == 9:
        schedule = allocate_manual(
            (0.35, 0.40, 0.45), r, model, partition,
            fixed=[{1: 0.3, 2: 1.3}, {1: 0.5, 2: 1.4}, {1: 0.7, 2: 1.5}], free_type=3,
        )
    elif number == 10:
        schedule = allocate_manual(
            (0.10, 0.15, 0.20), r, model, partition,
            fixed=[{2: 0.20}, {2: 0.25}, {2: 0.30}], free_type=3,
        )
    elif number == 11:
        schedule = allocate_manual(
            (0.20, 0.22, 0.24), r, model, partition,
            fixed=[{1: 0.05, 2: 0.50}, {1: 0.10, 2: 0.55}, {1: 0.10, 2: 0.60}], free_type=3,
        )
    else:
        schedule = allocate_manual(
            (0.35, 0.40, 0.45), r, model, partition,
            fixed=[{1: 0.10, 2: 0.7}, {1: 0.15, 2: 0.8}, {1: 0.20, 2: 0.9}], free_type=3,
        )
    return RatingTable(number=number, profile=profile, schedule=schedule, mean=model.mean())
