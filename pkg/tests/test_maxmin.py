from fractions import Fraction

import pytest
from hypothesis import given, strategies as st

from collchoice.majority import MajorityMatrix
from collchoice.maxmin import (
    audit_cycles,
    cycle_bound,
    cyclic_min_probability,
    elimination_hint,
    exhaustive_bound_check,
    independent_maxmin_mc,
    prob_greater,
)
from collchoice.prefs import Profile
from collchoice.scenarios import borda_profile, cycle_profile

F = Fraction


def test_cycle_bound_values():
    assert cycle_bound(3) == F(2, 3)
    assert cycle_bound(4) == F(3, 4)
    vals = [cycle_bound(n) for n in range(3, 30)]
    assert all(a < b < 1 for a, b in zip(vals, vals[1:]))
    with pytest.raises(ValueError):
        cycle_bound(2)


def test_audit_cycle_table():
    (r,) = audit_cycles(MajorityMatrix.from_profile(cycle_profile()))
    assert r.cycle == ("A", "B", "C")
    assert r.margins == (F(2, 3),) * 3
    assert r.min_margin == r.bound == F(2, 3) and r.bound_respected


def test_audit_transitive_matrix():
    assert audit_cycles(MajorityMatrix.from_profile(Profile.from_orders(["A > B > C"] * 2))) == []


def test_audit_size_cap():
    p = Profile.from_orders(["A > B > C > D > E > F > G"])
    with pytest.raises(ValueError):
        audit_cycles(MajorityMatrix.from_profile(p))


def test_elimination_hints():
    assert elimination_hint(MajorityMatrix.from_profile(Profile.from_orders(["a > b > c"] * 3))) == ("a", "b")
    assert elimination_hint(MajorityMatrix.from_profile(cycle_profile())) is None
    assert elimination_hint(MajorityMatrix.from_profile(borda_profile())) == ("y", "z")


def test_exhaustive_sweep():
    s = exhaustive_bound_check(3, 3)
    assert s.profiles == 2197
    assert s.violations == 0 and s.agreement_failures == 0
    assert s.max_cycle_min == F(2, 3)
    assert s.profiles_with_cycles > 0


def test_five_voter_four_policy_cycle_bound():
    p = Profile.from_orders(["A > B > C > D", "B > C > D > A", "C > D > A > B", "D > A > B > C"])
    reports = audit_cycles(MajorityMatrix.from_profile(p))
    four = [r for r in reports if len(r.cycle) == 4]
    assert four and all(r.min_margin == F(3, 4) == r.bound for r in four)


# -- independent variables ---------------------------------------------------------------------


def test_prob_greater_exact():
    die = {v: F(1, 6) for v in range(1, 7)}
    assert prob_greater(die, die) == F(15, 36)


def test_identical_symmetric_variables_at_most_half():
    d = {0: F(1, 3), 1: F(1, 3), 2: F(1, 3)}
    assert cyclic_min_probability([d, d, d]) <= F(1, 2)


@given(st.lists(st.integers(1, 5), min_size=1, max_size=4), st.integers(3, 5))
def test_identical_distributions_at_most_half(masses, n):
    total = sum(masses)
    d = {i: F(m, total) for i, m in enumerate(masses)}
    assert cyclic_min_probability([d] * n) <= F(1, 2)


def test_efron_style_dice():
    # intransitive dice: each beats the next with probability 5/9
    a = {2: F(1, 3), 4: F(1, 3), 9: F(1, 3)}
    b = {1: F(1, 3), 6: F(1, 3), 8: F(1, 3)}
    c = {3: F(1, 3), 5: F(1, 3), 7: F(1, 3)}
    assert cyclic_min_probability([a, b, c]) == F(5, 9)


def test_cyclic_min_validation():
    with pytest.raises(ValueError):
        cyclic_min_probability([{0: F(1)}])
    with pytest.raises(ValueError):
        cyclic_min_probability([{0: F(1, 2)}, {0: F(1)}])


def test_mc_reproducible_and_bounded():
    a = independent_maxmin_mc(3, 10_000, seed=7, refine_steps=500)
    b = independent_maxmin_mc(3, 10_000, seed=7, refine_steps=500)
    assert a == b
    assert a.max_min <= F(3, 4)
    assert a.max_min >= a.sampled_max


def test_mc_best_configuration_is_exact():
    r = independent_maxmin_mc(3, 10_000, seed=3, refine_steps=500)
    dists = [{v: F(m, r.mass_units) for v, m in enumerate(row) if m} for row in r.best_masses]
    assert cyclic_min_probability(dists) == r.max_min


def test_mc_trend_four_vs_three():
    eps = 0.01
    three = independent_maxmin_mc(3, 100_000, seed=42)
    four = independent_maxmin_mc(4, 100_000, seed=42)
    assert float(four.max_min) >= float(three.max_min) - eps


def test_mc_validation():
    with pytest.raises(ValueError):
        independent_maxmin_mc(2, 10_000, 0)
    with pytest.raises(ValueError):
        independent_maxmin_mc(3, 100, 0)
