import itertools
from fractions import Fraction

import pytest
from hypothesis import given, settings, strategies as st

from collchoice.binary import BinaryRule, all_profiles, sign, tally
from collchoice.weighted import (
    Council,
    Leaf,
    WeightVector,
    blocking_voters,
    check_weight_bounds,
    essential_voters,
    evaluate_tree,
    find_dictator,
    find_vetoer,
    weighted_tally,
)

SM = BinaryRule("weighted-majority")
NM = BinaryRule("non-minority")
AM34 = BinaryRule("absolute-majority", Fraction(3, 4))


def test_weight_vector_validation():
    with pytest.raises(ValueError):
        WeightVector((0, 0))
    with pytest.raises(ValueError):
        WeightVector((1, -1))
    with pytest.raises(ValueError):
        WeightVector(())
    assert WeightVector.parse("1,2 4").weights == (1, 2, 4)
    with pytest.raises(ValueError):
        weighted_tally(SM, (1, 1), (1,))


def test_unit_weights_reduce_to_egalitarian():
    for n in range(1, 6):
        for rule in (SM, NM, AM34):
            for d in all_profiles(n):
                assert weighted_tally(rule, (1,) * n, d) == tally(rule, d)


def test_weighted_examples():
    assert weighted_tally(SM, (2, 1, 1), (1, -1, -1)) == 0
    assert weighted_tally(SM, (1, 1, 1, 1), (1, 1, -1, -1)) == 0
    assert weighted_tally(SM, (2, 1, 1, 1), (1, 1, -1, -1)) == 1


@given(st.lists(st.integers(0, 4), min_size=1, max_size=5).filter(any), st.integers(2, 5))
@settings(max_examples=60)
def test_scaling_invariance(rho, k):
    for d in all_profiles(len(rho)):
        for rule in (SM, NM, AM34):
            assert weighted_tally(rule, rho, d) == weighted_tally(rule, [k * r for r in rho], d)


# -- dictators, vetoers, essential voters ------------------------------------------------


def test_dictator_examples():
    assert find_dictator(SM, (5, 1, 1, 1, 1)).voter == 0
    r = find_dictator(SM, (1, 2, 4, 8))
    assert r.voter == 3 and r.profiles_checked == 81
    assert set(r.refutations) == {0, 1, 2}
    assert find_dictator(SM, (1, 1, 1)).voter is None


def test_dictator_threshold_exhaustive():
    for n in range(1, 6):
        for rho in itertools.product(range(5), repeat=n):
            if not any(rho):
                continue
            w = sum(rho)
            expect = [j for j, r in enumerate(rho) if 2 * r > w]
            got = find_dictator(SM, rho).voter
            assert (got is None and not expect) or [got] == expect, rho


def test_vetoer_examples():
    assert find_vetoer(SM, (1, 1)).voters == ()
    r = find_vetoer(NM, (2, 1, 1))
    assert r.voters == (0,) and r.outcomes[0] == (0, 0)
    assert find_vetoer(NM, (1, 1, 1)).voters == ()
    assert find_vetoer(SM, (1,)).voters == ()


def test_essential_examples():
    assert essential_voters(SM, (0, 1, 1)).voters == (1, 2)
    assert essential_voters(SM, (1, 1)).voters == (0, 1)


def essential_oracle(rule, rho):
    n = len(rho)
    out = set()
    for d in all_profiles(n):
        for i in range(n):
            for b in (-1, 0, 1):
                e = d[:i] + (b,) + d[i + 1 :]
                if weighted_tally(rule, rho, e) != weighted_tally(rule, rho, d):
                    out.add(i)
    return tuple(sorted(out))


def test_essential_powers_of_two_against_oracle():
    got = essential_voters(SM, (1, 2, 4, 8))
    assert got.voters == essential_oracle(SM, (1, 2, 4, 8))
    for i, cert in got.certificates.items():
        outs = {weighted_tally(SM, (1, 2, 4, 8), cert[:i] + (b,) + cert[i + 1 :]) for b in (-1, 0, 1)}
        assert len(outs) > 1


def test_zero_weight_never_essential_and_dictator_always_is():
    for rho in itertools.product(range(4), repeat=3):
        if not any(rho):
            continue
        e = essential_voters(SM, rho).voters
        assert all(rho[i] > 0 for i in e)
        d = find_dictator(SM, rho).voter
        if d is not None:
            assert d in e


# -- bounds ---------------------------------------------------------------------------------


def test_bounds_unit_weights_safe():
    b = check_weight_bounds(SM, (1, 1, 1, 1))
    assert b.safe_by_bound and b.dictators == () and b.consistent


def test_bounds_flag_and_confirm_dictator():
    b = check_weight_bounds(SM, (3, 1, 1))
    assert b.dictator_flags == (0,) and b.dictators == (0,) and b.consistent


def test_bounds_absolute_majority_vetoer():
    b = check_weight_bounds(AM34, (2, 1, 1))
    assert b.vetoer_flags == (0,)
    assert 0 in b.vetoers
    # weight-1 voters also block: the others reach exactly 3 = alpha * W, which is not enough
    assert b.vetoers == (0, 1, 2)
    assert not b.consistent and len(b.mismatches) == 2
    assert blocking_voters(AM34, (2, 1, 1), 1) == (0, 1, 2)


def test_bounds_never_miss_power_under_majority_rules():
    for n in range(2, 5):
        for rho in itertools.product(range(4), repeat=n):
            if any(rho):
                for rule in (SM, NM):
                    b = check_weight_bounds(rule, rho)
                    assert b.consistent, (rule, rho, b.mismatches)


def test_bounds_refuse_other_rules_and_large_n():
    with pytest.raises(ValueError):
        check_weight_bounds(BinaryRule("pareto"), (1, 1))
    with pytest.raises(ValueError):
        check_weight_bounds(SM, (1,) * 7)


# -- council trees ---------------------------------------------------------------------------


def referendum_tree():
    return Council.unit([Council.unit([Leaf(3 * i + k) for k in range(3)]) for i in range(3)])


def test_flat_council_equals_simple_majority():
    for n in range(1, 7):
        tree = Council.unit([Leaf(i) for i in range(n)])
        for d in all_profiles(n):
            assert evaluate_tree(tree, d) == sign(sum(d))


def test_referendum_paradox():
    d = (1, 1, -1, 1, 1, -1, -1, -1, -1)
    assert evaluate_tree(referendum_tree(), d) == 1
    assert tally(BinaryRule("simple-majority"), d) == -1


def test_council_tie_propagates_as_abstention():
    tree = Council.unit([Council.unit([Leaf(0), Leaf(1)]), Leaf(2)])
    assert evaluate_tree(tree, (1, -1, -1)) == -1
    assert evaluate_tree(tree, (1, -1, 0)) == 0


def test_voter_in_several_councils():
    tree = Council((Council.unit([Leaf(0), Leaf(1), Leaf(2)]), Leaf(0)), (1, 1))
    assert evaluate_tree(tree, (1, -1, -1)) == 0


def test_tree_errors():
    with pytest.raises(ValueError):
        Council((Leaf(0),), (1, 1))
    with pytest.raises(ValueError):
        Council((), ())
    with pytest.raises(ValueError):
        evaluate_tree(Council.unit([Leaf(5)]), (1, 1))
