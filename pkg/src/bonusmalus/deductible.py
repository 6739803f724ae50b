"""Synthesis and validation of per-claim deductible schedules.

A schedule assigns each malus level ``l`` a premium-reduction fraction
``alpha_l`` and a per-claim deductible ``d[l][i]`` for each claim type.  The
reduction must be financed, on average, by the deductibles: for every level

    alpha_l * E[C] = E[C * 1{C <= d0}] + d0 * (q0 - F(d0)) + sum_i d_i * q_i.

The constructors in this module produce schedules satisfying that balance
together with the ordering constraints (deductibles capped by the type
thresholds, nondecreasing across types and across levels, reduced premiums
nondecreasing and at least the base premium).
"""

from __future__ import annotations

from dataclasses import dataclass, field

import numpy as np

from .errors import (
    AlphaOutOfRange,
    Assumption2Violation,
    InfeasibleProportional,
    ManualDInconsistent,
    MonotonicityViolation,
    NotInMalusZone,
)
from .relativity import malus_entry_level
from .severity import ClaimSeverity, ClaimTypePartition, band_means, max_penalty_f

_TOL = 1e-12


@dataclass(frozen=True)
class DeductibleSchedule:
    """Premium reductions and deductibles for levels ``malus_entry..s``."""

    malus_entry: int
    alphas: np.ndarray          # one fraction per malus level, low to high
    deductibles: np.ndarray     # shape (n_malus_levels, m + 1)

    @property
    def top(self) -> int:
        return self.malus_entry + len(self.alphas) - 1

    def alpha_at(self, level: int) -> float:
        if level < self.malus_entry:
            return 0.0
        return float(self.alphas[level - self.malus_entry])

    def row_at(self, level: int) -> np.ndarray:
        if level < self.malus_entry:
            return np.zeros(self.deductibles.shape[1])
        return self.deductibles[level - self.malus_entry]

    def full_matrix(self, levels: int) -> np.ndarray:
        """Deductibles for every scale level, zero in the bonus zone."""
        return np.vstack([self.row_at(l) for l in range(levels)])


def _caps(partition: ClaimTypePartition) -> np.ndarray:
    """Per-type deductible caps: c_1 for types 0 and 1, c_i for type i >= 2."""
    cs = partition.thresholds
    return np.array((cs[0],) + cs)


def _check_assumption2_row(d, partition):
    caps = _caps(partition)
    d = np.asarray(d, dtype=float)
    if d.shape != caps.shape:
        raise Assumption2Violation(f"expected {caps.shape[0]} deductibles, got {d.shape[0]}")
    if (d < -_TOL).any() or (d > caps + _TOL).any():
        raise Assumption2Violation(f"deductibles {d} exceed their type caps {caps}")
    if (np.diff(d) < -_TOL).any():
        raise Assumption2Violation(f"deductibles {d} must be nondecreasing across types")
    return d


def _rhs_unchecked(model, partition, d):
    qs = partition.probabilities
    total = model.truncated_mean(d[0]) + d[0] * (qs[0] - model.cdf(d[0]))
    for di, qi in zip(d[1:], qs[1:]):
        total += di * qi
    return total


def indifference_rhs(model: ClaimSeverity, partition: ClaimTypePartition, d) -> float:
    """Expected per-claim deductible recovery for deductible row ``d``.

    Nondecreasing and continuous in every coordinate, which is what makes
    the one-dimensional solves below safe for bisection.
    """
    d = _check_assumption2_row(d, partition)
    return _rhs_unchecked(model, partition, d)


def alpha_upper_bound(
    level: int,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
    top_only: bool = False,
) -> float:
    """Largest admissible premium-reduction fraction at ``level``."""
    r = np.asarray(relativities, dtype=float)
    s = len(r) - 1
    s0 = malus_entry_level(r)
    if not s0 <= level <= s:
        raise NotInMalusZone(f"level {level} is outside the malus zone [{s0}, {s}]")
    budget_cap = max_penalty_f(model, partition) / model.mean()
    if top_only:
        if level != s:
            raise NotInMalusZone(f"top-only bound applies to level {s}, not {level}")
        return min(1.0 - r[s - 1] / r[s], budget_cap)
    return min(1.0 - 1.0 / r[level], budget_cap)


def _bisect_increasing(fn, lo, hi, target, tol):
    """Root of the nondecreasing ``fn`` equal to ``target`` on [lo, hi]."""
    flo, fhi = fn(lo), fn(hi)
    if target < flo - 1e-9 or target > fhi + 1e-9:
        raise ValueError(f"target {target} outside [{flo}, {fhi}]")
    while hi - lo > tol:
        mid = (lo + hi) / 2
        if fn(mid) < target:
            lo = mid
        else:
            hi = mid
    return (lo + hi) / 2


@dataclass(frozen=True)
class LevelCheck:
    level: int
    residual: float
    caps_ok: bool            # deductibles within their type caps
    type_monotone_ok: bool   # nondecreasing across claim types
    level_monotone_ok: bool  # nondecreasing versus the level below
    top_type_bound_ok: bool  # d_m <= min{alpha E[C]/q_m, c_m}
    alpha_monotone_ok: bool  # alpha not below the level below


@dataclass(frozen=True)
class ScheduleValidation:
    residual_tol: float
    premium_ordering_ok: bool  # (1 - alpha_l) r_l nondecreasing and >= 1
    levels: list[LevelCheck] = field(default_factory=list)

    @property
    def passed(self) -> bool:
        return self.premium_ordering_ok and all(
            c.caps_ok
            and c.type_monotone_ok
            and c.level_monotone_ok
            and c.top_type_bound_ok
            and c.alpha_monotone_ok
            and abs(c.residual) <= self.residual_tol
            for c in self.levels
        )

    def failures(self) -> list[str]:
        out = []
        if not self.premium_ordering_ok:
            out.append("reduced premiums are not nondecreasing above the base premium")
        for c in self.levels:
            if abs(c.residual) > self.residual_tol:
                out.append(f"level {c.level}: indifference residual {c.residual:.3e}")
            if not c.caps_ok:
                out.append(f"level {c.level}: deductible exceeds its type cap")
            if not c.type_monotone_ok:
                out.append(f"level {c.level}: deductibles decrease across claim types")
            if not c.level_monotone_ok:
                out.append(f"level {c.level}: deductible below the one at the previous level")
            if not c.top_type_bound_ok:
                out.append(f"level {c.level}: top-type deductible exceeds its budget bound")
            if not c.alpha_monotone_ok:
                out.append(f"level {c.level}: alpha decreases with level")
        return out


def validate_schedule(
    schedule: DeductibleSchedule,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
    residual_tol: float = 1e-9,
) -> ScheduleValidation:
    """Check the balance equation and every ordering constraint, per level."""
    r = np.asarray(relativities, dtype=float)
    caps = _caps(partition)
    qs = partition.probabilities
    mean = model.mean()
    s0 = schedule.malus_entry

    reduced = [(1.0 - schedule.alpha_at(l)) * r[l] for l in range(s0, schedule.top + 1)]
    premium_ok = all(v >= 1.0 - 1e-9 for v in reduced) and all(
        b >= a - 1e-9 for a, b in zip(reduced, reduced[1:])
    )

    checks = []
    for l in range(s0, schedule.top + 1):
        d = schedule.row_at(l)
        alpha = schedule.alpha_at(l)
        caps_ok = bool((d >= -_TOL).all() and (d <= caps + _TOL).all())
        type_ok = bool((np.diff(d) >= -_TOL).all())
        prev = schedule.row_at(l - 1) if l > s0 else np.zeros_like(d)
        level_ok = bool((d >= prev - _TOL).all())
        alpha_ok = alpha >= (schedule.alpha_at(l - 1) if l > s0 else 0.0) - _TOL
        top_bound = min(alpha * mean / qs[-1], caps[-1])
        top_ok = d[-1] <= top_bound + 1e-9
        residual = _rhs_unchecked(model, partition, np.clip(d, 0.0, caps)) - alpha * mean
        checks.append(
            LevelCheck(
                level=l,
                residual=residual,
                caps_ok=caps_ok,
                type_monotone_ok=type_ok,
                level_monotone_ok=level_ok,
                top_type_bound_ok=top_ok,
                alpha_monotone_ok=alpha_ok,
            )
        )
    return ScheduleValidation(residual_tol=residual_tol, premium_ordering_ok=premium_ok, levels=checks)


def allocate_single_type(
    alphas,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
) -> DeductibleSchedule:
    """Deductibles on the largest claim type only: d_m = alpha E[C] / q_m."""
    r = np.asarray(relativities, dtype=float)
    s0 = malus_entry_level(r)
    alphas = np.asarray(alphas, dtype=float)
    if len(alphas) != len(r) - s0:
        raise ValueError(f"expected {len(r) - s0} alphas for levels {s0}..{len(r) - 1}")
    if (np.diff(alphas) < -_TOL).any():
        raise MonotonicityViolation(f"alphas must be nondecreasing, got {alphas}")
    mean = model.mean()
    qm = partition.probabilities[-1]
    cap = partition.thresholds[-1] * qm / mean
    d = np.zeros((len(alphas), partition.n_types))
    for k, (alpha, level) in enumerate(zip(alphas, range(s0, len(r)))):
        bound = min(1.0 - 1.0 / r[level], cap)
        if not 0 <= alpha <= bound + 1e-9:
            raise AlphaOutOfRange(f"alpha {alpha} at level {level} exceeds bound {bound:.6f}")
        d[k, -1] = alpha * mean / qm
    return DeductibleSchedule(malus_entry=s0, alphas=alphas, deductibles=d)


def _top_only_schedule(s0, s, n_types, alpha_s, d_row):
    alphas = np.zeros(s - s0 + 1)
    alphas[-1] = alpha_s
    d = np.zeros((s - s0 + 1, n_types))
    d[-1] = d_row
    return DeductibleSchedule(malus_entry=s0, alphas=alphas, deductibles=d)


def proportional_cap_x0(model: ClaimSeverity, partition: ClaimTypePartition) -> float:
    """Largest proportionality coefficient keeping every deductible capped."""
    means = band_means(model, partition)
    cs = partition.thresholds
    return min(c / m for c, m in zip(cs, means[1:]))


def allocate_proportional_top(
    alpha_s: float,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
    tol: float = 1e-12,
) -> tuple[float, DeductibleSchedule]:
    """Top-level deductibles proportional to the mean claim of each type.

    Returns the proportionality coefficient together with the schedule.
    Raises InfeasibleProportional when even the capped coefficient cannot
    finance the requested reduction.
    """
    r = np.asarray(relativities, dtype=float)
    s = len(r) - 1
    s0 = malus_entry_level(r)
    bound = alpha_upper_bound(s, r, model, partition, top_only=True)
    if not 0 < alpha_s < bound - _TOL:
        raise AlphaOutOfRange(f"alpha {alpha_s} must lie strictly inside (0, {bound:.6f})")
    means = np.array(band_means(model, partition))
    x0 = proportional_cap_x0(model, partition)
    target = alpha_s * model.mean()

    def recovery(x):
        return indifference_rhs(model, partition, x * means)

    if recovery(x0) < target - 1e-12:
        raise InfeasibleProportional(
            f"proportional allocation cannot finance alpha {alpha_s}; max recovery {recovery(x0):.6f}"
        )
    x = _bisect_increasing(recovery, 0.0, x0, target, tol)
    return x, _top_only_schedule(s0, s, partition.n_types, alpha_s, x * means)


def _greedy_row(budget, model, partition, tol=1e-12):
    """Saturate deductibles from the largest claim type down to spend ``budget``."""
    qs = partition.probabilities
    caps = _caps(partition)
    m = partition.n_types - 1
    d = np.zeros(partition.n_types)
    remaining = budget
    for k in range(m, 0, -1):
        cap = caps[k]
        chunk = cap * qs[k]
        if remaining <= chunk + _TOL:
            d[k] = max(0.0, remaining) / qs[k]
            return d
        d[k] = cap
        remaining -= chunk
    # Only the type-0 term is left; it is nonlinear in the deductible.
    def recovery0(d0):
        return model.truncated_mean(d0) + d0 * (qs[0] - model.cdf(d0))

    d[0] = _bisect_increasing(recovery0, 0.0, caps[0], remaining, tol)
    return d


def allocate_greedy_top(
    alpha_s: float,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
) -> DeductibleSchedule:
    """Penalize large claims first: walk claim types from the top down."""
    r = np.asarray(relativities, dtype=float)
    s = len(r) - 1
    s0 = malus_entry_level(r)
    bound = alpha_upper_bound(s, r, model, partition, top_only=True)
    if not 0 <= alpha_s <= bound + _TOL:
        raise AlphaOutOfRange(f"alpha {alpha_s} exceeds the top-level bound {bound:.6f}")
    row = _greedy_row(alpha_s * model.mean(), model, partition)
    return _top_only_schedule(s0, s, partition.n_types, alpha_s, row)


def uniform_schedule(
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
    manual_d=None,
) -> DeductibleSchedule:
    """Constant alpha and deductible row across the whole malus zone.

    Uses the larger of the two always-feasible constructions: either the
    budget cap f/E[C] with every deductible at its type cap, or the premium
    cap 1 - 1/r at the malus entry with a row solved to balance it.
    """
    r = np.asarray(relativities, dtype=float)
    s = len(r) - 1
    s0 = malus_entry_level(r)
    mean = model.mean()
    caps = _caps(partition)
    budget_cap = max_penalty_f(model, partition) / mean
    premium_cap = 1.0 - 1.0 / r[s0]

    if budget_cap <= premium_cap:
        alpha = budget_cap
        row = caps.astype(float)
    else:
        alpha = premium_cap
        if manual_d is not None:
            row = _check_assumption2_row(manual_d, partition)
            residual = indifference_rhs(model, partition, row) - alpha * mean
            if abs(residual) > 1e-9:
                raise ManualDInconsistent(
                    f"supplied deductibles miss the balance at alpha {alpha:.6f} by {residual:.3e}"
                )
        else:
            target = alpha * mean
            means = np.array(band_means(model, partition))
            x0 = proportional_cap_x0(model, partition)

            def recovery(x):
                return indifference_rhs(model, partition, x * means)

            if recovery(x0) >= target - 1e-12:
                x = _bisect_increasing(recovery, 0.0, x0, target, _TOL)
                row = x * means
            else:
                row = _greedy_row(target, model, partition)
    n = s - s0 + 1
    return DeductibleSchedule(
        malus_entry=s0,
        alphas=np.full(n, alpha),
        deductibles=np.tile(row, (n, 1)),
    )


def allocate_manual(
    alphas,
    relativities,
    model: ClaimSeverity,
    partition: ClaimTypePartition,
    fixed,
    free_type: int,
    tol: float = 1e-12,
) -> DeductibleSchedule:
    """Fix chosen deductibles per level and solve one free type to balance.

    ``fixed`` maps claim types to deductible amounts, one mapping per malus
    level from the malus entry upward; ``free_type`` is solved from the
    balance equation by bisection at every level.
    """
    r = np.asarray(relativities, dtype=float)
    s0 = malus_entry_level(r)
    alphas = np.asarray(alphas, dtype=float)
    if len(alphas) != len(r) - s0 or len(fixed) != len(alphas):
        raise ValueError(f"expected {len(r) - s0} alphas and fixed rows for levels {s0}..{len(r) - 1}")
    caps = _caps(partition)
    mean = model.mean()
    d = np.zeros((len(alphas), partition.n_types))
    for k, (alpha, fixed_row) in enumerate(zip(alphas, fixed)):
        bound = min(1.0 - 1.0 / r[s0 + k], max_penalty_f(model, partition) / mean)
        if not 0 <= alpha <= bound + 1e-9:
            raise AlphaOutOfRange(f"alpha {alpha} at level {s0 + k} exceeds bound {bound:.6f}")
        row = np.zeros(partition.n_types)
        for i, v in fixed_row.items():
            i = int(i)
            if i == free_type:
                raise ValueError(f"type {free_type} is the free coordinate and cannot be fixed")
            row[i] = float(v)

        def recovery(v):
            trial = row.copy()
            trial[free_type] = v
            return _rhs_unchecked(model, partition, trial)

        target = alpha * mean
        try:
            d_free = _bisect_increasing(recovery, 0.0, caps[free_type], target, tol)
        except ValueError as exc:
            raise ManualDInconsistent(
                f"level {s0 + k}: no admissible value of type-{free_type} deductible: {exc}"
            ) from exc
        row[free_type] = d_free
        d[k] = _check_assumption2_row(row, partition)
    return DeductibleSchedule(malus_entry=s0, alphas=alphas, deductibles=d)
