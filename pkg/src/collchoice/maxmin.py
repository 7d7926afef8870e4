"""Cycle margin bounds for pairwise majorities.

Around any directed cycle of n policies, the smallest pairwise majority
share is at most (n-1)/n.  For independent random variables the best
achievable minimum stays below 3/4; :func:`independent_maxmin_mc` searches
for large values by sampling discrete distributions and hill-climbing.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from typing import Mapping, Sequence

import numpy as np

from .enumeration import enumerate_weak_orders
from .majority import MajorityMatrix, cycle_margins, simple_cycles
from .multi import detect_cycles
from .prefs import PolicySet, Profile

MAX_CYCLE_POLICIES = 6


def cycle_bound(n: int) -> Fraction:
    if not isinstance(n, int) or n < 3:
        raise ValueError("a policy cycle needs at least 3 policies")
    return Fraction(n - 1, n)


@dataclass(frozen=True)
class CycleReport:
    cycle: tuple[str, ...]
    margins: tuple[Fraction, ...]
    min_margin: Fraction
    bound: Fraction
    bound_respected: bool


def audit_cycles(matrix: MajorityMatrix) -> list[CycleReport]:
    if len(matrix.policies) > MAX_CYCLE_POLICIES:
        raise ValueError(f"cycle enumeration is limited to {MAX_CYCLE_POLICIES} policies")
    out = []
    for cycle in simple_cycles(matrix):
        margins = cycle_margins(matrix, cycle)
        low = min(margins)
        bound = cycle_bound(len(cycle))
        out.append(CycleReport(cycle, margins, low, bound, low <= bound))
    return out


def elimination_hint(matrix: MajorityMatrix) -> tuple[str, str] | None:
    """First pair (a, b) that every voter with an opinion ranks a over b."""
    for a in matrix.policies:
        for b in matrix.policies:
            if a != b and matrix.count(a, b) > 0 and matrix.margin(a, b) == 1:
                return (a, b)
    return None


@dataclass(frozen=True)
class SweepSummary:
    profiles: int
    profiles_with_cycles: int
    cycles: int
    violations: int
    max_cycle_min: Fraction | None
    agreement_failures: int
    # profiles where some pair is won by more than the bound yet a cycle exists
    strong_claim_counterexamples: int


def exhaustive_bound_check(policies: int = 3, voters: int = 3) -> SweepSummary:
    """Audit every profile of weak orders within the bounds."""
    if policies > 4 or voters > 3:
        raise ValueError("exhaustive sweep is limited to 4 policies and 3 voters")
    labels = PolicySet(tuple("ABCD"[:policies]))
    orders = list(enumerate_weak_orders(labels))
    voter_ids = tuple(str(i + 1) for i in range(voters))
    n = with_cycles = cycles = violations = disagree = strong = 0
    best = None
    bound = cycle_bound(policies) if policies >= 3 else None
    for combo in itertools.product(orders, repeat=voters):
        n += 1
        matrix = MajorityMatrix.from_profile(Profile(voter_ids, combo, labels))
        reports = audit_cycles(matrix)
        if bool(reports) != bool(detect_cycles(matrix)):
            disagree += 1
        if not reports:
            continue
        with_cycles += 1
        cycles += len(reports)
        violations += sum(not r.bound_respected for r in reports)
        top = max(r.min_margin for r in reports)
        best = top if best is None else max(best, top)
        if bound is not None and any(
            matrix.margin(a, b) > bound for a in labels for b in labels if a != b
        ):
            strong += 1
    return SweepSummary(n, with_cycles, cycles, violations, best, disagree, strong)


# -- independent random variables -------------------------------------------


def prob_greater(p: Mapping[float, Fraction], q: Mapping[float, Fraction]) -> Fraction:
    return sum((pa * qb for a, pa in p.items() for b, qb in q.items() if a > b), Fraction(0))


def cyclic_min_probability(dists: Sequence[Mapping[float, Fraction]]) -> Fraction:
    """min_i P(X_i > X_{i+1}) with wrap-around, for independent discrete
    variables given as value -> probability maps."""
    n = len(dists)
    if n < 2:
        raise ValueError("need at least two variables")
    for d in dists:
        if sum(d.values()) != 1:
            raise ValueError("probabilities must sum to 1")
    return min(prob_greater(dists[i], dists[(i + 1) % n]) for i in range(n))


@dataclass(frozen=True)
class MonteCarloStats:
    n: int
    trials: int
    seed: int
    grid: int
    mass_units: int
    max_min: Fraction
    mean_min: float
    sampled_max: Fraction
    refine_steps: int
    resampled: int
    best_masses: tuple[tuple[int, ...], ...]

    @property
    def ceiling(self) -> Fraction:
        return Fraction(3, 4)


def _cyclic_mins(m: np.ndarray) -> np.ndarray:
    """Integer numerators of min_i P(X_i > X_{i+1}) for mass arrays
    shaped (batch, n, grid); the denominator is mass_units**2."""
    below = np.cumsum(m, axis=2) - m  # mass strictly below each grid point
    nxt = np.roll(below, -1, axis=1)
    wins = np.sum(m * nxt, axis=2)
    return wins.min(axis=1)


def _degenerate(m: np.ndarray) -> np.ndarray:
    """All variables are the same point mass."""
    first = m[:, :1, :]
    point = (m.max(axis=2) == m.sum(axis=2)).all(axis=1)
    return point & (m == first).all(axis=(1, 2))


def independent_maxmin_mc(
    n: int,
    trials: int,
    seed: int,
    grid: int | None = None,
    mass_units: int = 120,
    refine_steps: int = 10_000,
    population: int = 64,
) -> MonteCarloStats:
    """Sample ``trials`` configurations of n independent discrete variables
    on an integer grid, compute each one's cyclic minimum exactly, then
    hill-climb from the best ``population`` samples by moving single units
    of mass.  Masses are integers out of ``mass_units``, so probabilities
    are exact rationals."""
    if not 3 <= n <= 6:
        raise ValueError("n must be between 3 and 6")
    if trials < 10_000:
        raise ValueError("at least 10000 trials are required")
    grid = grid or 2 * n + 2
    rng = np.random.default_rng(seed)
    denom = mass_units * mass_units
    chunk = 20_000
    nums = []
    keep_m = []
    resampled = 0
    done = 0
    while done < trials:
        size = min(chunk, trials - done)
        alpha = rng.uniform(0.05, 1.0, size=(size, n, 1))
        pvals = rng.dirichlet(np.ones(grid), size=(size, n)) ** (1.0 / alpha)
        pvals /= pvals.sum(axis=2, keepdims=True)
        m = rng.multinomial(mass_units, pvals).astype(np.int64)
        bad = _degenerate(m)
        while bad.any():
            resampled += int(bad.sum())
            m[bad] = rng.multinomial(mass_units, pvals[bad]).astype(np.int64)
            bad = _degenerate(m)
        v = _cyclic_mins(m)
        nums.append(v)
        top = np.argsort(v)[-population:]
        keep_m.append(m[top])
        done += size
    nums = np.concatenate(nums)
    sampled_best = int(nums.max())
    pool = np.concatenate(keep_m)
    pool = pool[np.argsort(_cyclic_mins(pool))[-population:]]
    cur = _cyclic_mins(pool)
    idx = np.arange(len(pool))
    for _ in range(refine_steps):
        cand = pool.copy()
        var = rng.integers(0, n, size=len(pool))
        # source point drawn in proportion to its mass
        cum = np.cumsum(cand[idx, var, :], axis=1)
        src = np.argmax(cum > rng.integers(0, mass_units, size=len(pool))[:, None], axis=1)
        dst = rng.integers(0, grid, size=len(pool))
        amount = np.minimum(rng.integers(1, 4, size=len(pool)), cand[idx, var, src])
        cand[idx, var, src] -= amount
        cand[idx, var, dst] += amount
        score = _cyclic_mins(cand)
        better = score >= cur
        pool[better] = cand[better]
        cur[better] = score[better]
    best_i = int(np.argmax(cur))
    best = int(cur[best_i])  # refinement only accepts non-decreasing moves
    return MonteCarloStats(
        n=n,
        trials=trials,
        seed=seed,
        grid=grid,
        mass_units=mass_units,
        max_min=Fraction(best, denom),
        mean_min=float(nums.mean()) / denom,
        sampled_max=Fraction(sampled_best, denom),
        refine_steps=refine_steps,
        resampled=resampled,
        best_masses=tuple(tuple(int(x) for x in row) for row in pool[best_i]),
    )
