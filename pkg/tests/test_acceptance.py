"""Acceptance criteria, one test each.  Every test prints a PASS/FAIL line
with its runtime; the lines are repeated in the terminal summary."""

import itertools
import time
from contextlib import contextmanager
from fractions import Fraction

import pytest

from collchoice.binary import EXPECTED, SIMPLE_MAJORITY, BinaryRule, audit, may_uniqueness, sign, tally
from collchoice.enumeration import count_weak_orders, enumerate_weak_orders
from collchoice.harness import (
    MULTI_POLICY_FUNCTIONS,
    Bounds,
    binary_choice,
    builtin_functions,
    impossibility_report,
    replay,
    run_checks,
)
from collchoice.maxmin import audit_cycles, exhaustive_bound_check, independent_maxmin_mc
from collchoice.multi import borda, condorcet, detect_cycles, pairwise_matrix
from collchoice.prefs import PolicySet, Situation
from collchoice.scenarios import borda_profile, borda_without_x, cycle_profile
from collchoice.weighted import Council, Leaf, evaluate_tree, find_dictator

RESULTS: list[str] = []


@contextmanager
def criterion(number, title, limit):
    start = time.perf_counter()
    ok = False
    try:
        yield
        ok = True
    finally:
        elapsed = time.perf_counter() - start
        in_time = elapsed < limit
        line = f"{'PASS' if ok and in_time else 'FAIL'} criterion {number}: {title} ({elapsed:.2f}s, limit {limit:g}s)"
        RESULTS.append(line)
        print(line)
    assert in_time, line


def test_c01_weak_order_counts():
    with criterion(1, "weak-order counts 1, 3, 13, 75, 541, 4683", 1.0):
        assert [count_weak_orders(n) for n in range(1, 7)] == [1, 3, 13, 75, 541, 4683]
        for n in range(1, 6):
            orders = list(enumerate_weak_orders(PolicySet(tuple("ABCDE"[:n]))))
            assert len(orders) == len(set(orders)) == count_weak_orders(n)


def test_c02_borda_reproduction():
    with criterion(2, "Borda table 9/8/8/5 and restricted 7/7/4", 1.0):
        full = borda(Situation.full(borda_profile()))
        assert full.scores == {"w": 9, "x": 8, "y": 8, "z": 5}
        restricted = borda(borda_without_x().restricted())
        assert restricted.scores == {"w": 7, "y": 7, "z": 4}
        assert restricted.ranking == (frozenset("wy"), frozenset("z"))


def test_c03_voting_paradox_cycle():
    with criterion(3, "cycle table margins 2/3, no winner, bound met with equality", 1.0):
        s = Situation.full(cycle_profile())
        m = pairwise_matrix(s)
        for a, b in (("A", "B"), ("B", "C"), ("C", "A")):
            assert m.margin(a, b) == Fraction(2, 3)
        assert condorcet(s).chosen == frozenset()
        (c,) = detect_cycles(m)
        assert c.members == frozenset("ABC") and c.min_margin == Fraction(2, 3)
        (r,) = audit_cycles(m)
        assert r.min_margin == r.bound == Fraction(3 - 1, 3) and r.bound_respected


def test_c04_possibility_at_desk_scale():
    with criterion(4, "simple majority passes all five checks (n<=3) and May's conditions (n<=5)", 10.0):
        f = binary_choice(BinaryRule(SIMPLE_MAJORITY))
        for n in (1, 2, 3):
            vs = run_checks(f, Bounds(2, n))
            assert all(v.passed for v in vs), [v.condition for v in vs if not v.passed]
        rule = BinaryRule(SIMPLE_MAJORITY)
        for n in range(1, 6):
            assert all(audit(rule, n, EXPECTED[SIMPLE_MAJORITY]))


def test_c05_may_uniqueness():
    with criterion(5, "one survivor among 19683 functions at n=2, equal to sign", 5.0):
        rep = may_uniqueness(2)
        assert rep.functions_checked == 3 ** 9 == 19683
        assert rep.unique and rep.equals_sign


def test_c06_impossibility_shadow():
    with criterion(6, "every built-in function fails a condition at (3,3) with replayable witnesses", 120.0):
        seeds = (Situation.full(cycle_profile()), borda_without_x())
        rep = impossibility_report(Bounds(3, 3), seeds)
        funcs = builtin_functions(0)
        for name in MULTI_POLICY_FUNCTIONS:
            failed = rep.failures(name)
            assert failed, name
            assert all(replay(funcs[name], v) for v in failed), name
        borda_fail = {v.condition: v for v in rep.failures("borda")}
        assert "independence" in borda_fail
        assert borda_fail["independence"].witness.situation == borda_without_x()


def test_c07_exhaustive_cycle_bound():
    with criterion(7, "2197 profiles, every 3-cycle min margin <= 2/3", 30.0):
        s = exhaustive_bound_check(3, 3)
        assert s.profiles == 2197
        assert s.violations == 0
        assert s.max_cycle_min is not None and s.max_cycle_min <= Fraction(2, 3)


def test_c08_weighted_thresholds():
    with criterion(8, "find_dictator matches 2*rho_j > W for n<=5, entries<=4", 30.0):
        rule = BinaryRule("weighted-majority")
        checked = 0
        for n in range(1, 6):
            for rho in itertools.product(range(5), repeat=n):
                w = sum(rho)
                if w == 0:
                    continue
                expected = [j for j, r in enumerate(rho) if 2 * r > w]
                got = find_dictator(rule, rho).voter
                assert got == (expected[0] if expected else None), rho
                checked += 1
        assert checked == sum(5 ** n - 1 for n in range(1, 6))
        assert find_dictator(rule, (1, 2, 4, 8)).voter == 3  # the fourth voter


def _direct_oracle(blocks):
    return sign(sum(sign(sum(b)) for b in blocks))


def test_c09_independent_ceiling():
    with criterion(9, "Monte Carlo n=3, 1e5 trials: max-min <= 0.76", 60.0):
        st = independent_maxmin_mc(3, 100_000, seed=42)
        assert float(st.max_min) <= 0.75 + 0.01


def test_c10_referendum_paradox():
    with criterion(10, "council tree gives +1, direct majority -1", 1.0):
        blocks = [(1, 1, -1), (1, 1, -1), (-1, -1, -1)]
        ballots = tuple(itertools.chain.from_iterable(blocks))
        tree = Council.unit([Council.unit([Leaf(3 * i + k) for k in range(3)]) for i in range(3)])
        assert evaluate_tree(tree, ballots) == _direct_oracle(blocks) == 1
        assert tally(BinaryRule(SIMPLE_MAJORITY), ballots) == sign(sum(ballots)) == -1
