import itertools

import pytest
from hypothesis import given, strategies as st

from collchoice.enumeration import enumerate_weak_orders
from collchoice.prefs import (
    ChoiceSet,
    PolicySet,
    PreferenceError,
    Profile,
    Situation,
    WeakOrder,
    demote,
    demote_strong,
    is_admissible,
    promote,
    promote_strong,
    promote_to_top,
    restrict,
)
from collchoice.scenarios import borda_profile, cycle_profile

XYZ = PolicySet.of("x y z")
ORDERS3 = list(enumerate_weak_orders(XYZ))
ORDERS4 = list(enumerate_weak_orders(PolicySet.of("w x y z")))


def W(text):
    return WeakOrder.parse(text)


def prof(*orders, voters=None):
    return Profile.from_orders(orders, voters=voters, policies=XYZ)


def pairs_without(order, x):
    return {(a, b): order.compare(a, b) for a in order.policies for b in order.policies if x not in (a, b)}


# -- construction ----------------------------------------------------------------


def test_parse_and_format():
    o = W("A > B = C")
    assert o.classes == (frozenset("A"), frozenset("BC"))
    assert o.format(["A", "B", "C"]) == "A > B = C"
    assert o.compare("B", "C") == 0 and o.prefers("A", "C")


@pytest.mark.parametrize("bad", ["A > > B", "A = A", "", "A > B > A"])
def test_parse_rejects(bad):
    with pytest.raises(PreferenceError):
        W(bad)


def test_cyclic_relation_rejected():
    with pytest.raises(PreferenceError, match="cyclic"):
        WeakOrder.from_relation(["x > y", "y > z", "z > x"])


def test_incomplete_relation_rejected():
    with pytest.raises(PreferenceError, match="not compared"):
        WeakOrder.from_relation(["x > y", "z = z"])


def test_relation_closure():
    o = WeakOrder.from_relation(["x = y", "y > z"])
    assert o == WeakOrder.from_ranking(("x", "y"), "z")
    assert WeakOrder.from_relation([("a", "<", "b")]) == W("b > a")


@pytest.mark.parametrize("order", ORDERS4)
def test_round_trip_through_relation(order):
    assert WeakOrder.from_relation(order.statements()) == order
    rel = order.relation()
    for a, b, c in itertools.product(order.policies, repeat=3):
        assert (a, b) in rel or (b, a) in rel
        if (a, b) in rel and (b, c) in rel:
            assert (a, c) in rel


def test_policy_set_validation():
    with pytest.raises(PreferenceError):
        PolicySet.of("A A")
    with pytest.raises(PreferenceError):
        PolicySet(())
    with pytest.raises(PreferenceError):
        PolicySet.of(["a b"])


def test_profile_validation():
    with pytest.raises(PreferenceError):
        Profile.from_orders(["A > B", "A > C"])
    with pytest.raises(PreferenceError):
        Profile(("1", "1"), (W("A > B"), W("B > A")))
    with pytest.raises(PreferenceError):
        Profile((), ())


def test_situation_requires_known_proposal():
    with pytest.raises(PreferenceError):
        Situation(PolicySet.of("A Q"), cycle_profile())


def test_choice_set_format():
    assert ChoiceSet(frozenset("BA")).format(["A", "B"]) == "{A, B}"
    assert ChoiceSet(frozenset()).format() == "{}"


# -- admissibility -----------------------------------------------------------------


def test_admissible_examples():
    assert is_admissible(W("x > y > z"), XYZ)
    assert not is_admissible(W("x = y = z"), XYZ)
    assert not is_admissible(W("x > y = z"), PolicySet.of("y z"))
    with pytest.raises(PreferenceError):
        is_admissible(W("x > y > z"), ["q"])


# -- promote / demote ----------------------------------------------------------------


def test_promote_examples():
    p = prof("x = y > z")
    assert promote("x", p).orders[0] == W("x > y > z")
    q = prof("y > x > z")
    assert promote("x", q) == q


def test_demote_examples():
    assert demote("x", prof("x = y > z")).orders[0] == W("y > x > z")
    q = prof("x > y > z")
    assert demote("x", q) == q


def test_unknown_policy_and_voter():
    with pytest.raises(PreferenceError):
        promote("q", prof("x > y > z"))
    with pytest.raises(PreferenceError):
        promote("x", prof("x > y > z"), voter="9")


@pytest.mark.parametrize("move", [promote, demote])
def test_weak_moves_idempotent_exhaustive(move):
    # every three-voter, three-policy profile
    for combo in itertools.product(ORDERS3, repeat=3):
        p = Profile(("1", "2", "3"), combo, XYZ)
        for x in XYZ:
            once = move(x, p)
            assert move(x, once) == once


@pytest.mark.parametrize("move", [promote, demote])
def test_weak_moves_touch_only_pairs_with_x(move):
    for o in ORDERS3:
        for x in XYZ:
            after = move(x, prof(o)).orders[0]
            assert pairs_without(after, x) == pairs_without(o, x)
            for y in XYZ:
                if y != x and o.compare(x, y) != 0:
                    assert after.compare(x, y) == o.compare(x, y)
                if y != x and o.compare(x, y) == 0:
                    assert after.compare(x, y) == (1 if move is promote else -1)


def test_strong_step_examples():
    assert promote_strong("x", prof("y > x > z")).orders[0] == WeakOrder.from_ranking(("x", "y"), "z")
    top = prof("x > y > z", "x > z = y")
    assert promote_strong("x", top) == top


def test_promote_strong_reaches_unique_top_within_four_steps():
    for o in ORDERS3:
        for x in XYZ:
            p = prof(o)
            for _ in range(4):
                p = promote_strong("x", p) if x == "x" else promote_strong(x, p)
            assert p.orders[0].classes[0] == frozenset([x])


def test_strong_round_trip_does_not_raise_x():
    # x's strict-above set: the policies x stands strictly above
    def below(o, x):
        return {y for y in o.policies if o.prefers(x, y)}

    for o in ORDERS4:
        for x in "wxyz":
            for k in range(1, 5):
                p = Profile.from_orders([o])
                for _ in range(k):
                    p = promote_strong(x, p)
                for _ in range(k):
                    p = demote_strong(x, p)
                assert below(p.orders[0], x) <= below(o, x)


def test_per_voter_leaves_others_identical():
    p = prof("x = y > z", "y = x > z", "z > x = y")
    q = promote("x", p, voter="1")
    assert q.orders[1] is p.orders[1] and q.orders[2] is p.orders[2]
    assert q.orders[0] == W("x > y > z")


def test_per_voter_on_cycle_table_changes_only_that_row():
    p = cycle_profile()
    # the weak form has nothing to split: A is strictly last for voter z
    assert promote("A", p, voter="z") == p
    q = promote_strong("A", p, voter="z")
    assert q.orders[:2] == p.orders[:2]
    assert q.orders[2] != p.orders[2]


def test_per_voter_moves_commute_exhaustive():
    for o1, o2 in itertools.product(ORDERS3, repeat=2):
        p = prof(o1, o2)
        for x, y in itertools.product(XYZ, repeat=2):
            for move in (promote, demote, promote_strong, demote_strong):
                a = move(y, move(x, p, "1"), "2")
                b = move(x, move(y, p, "2"), "1")
                assert a == b


def test_promote_to_top():
    p = promote_to_top("z", prof("x > y > z", "x = y = z"))
    assert all(o.classes[0] == frozenset("z") for o in p.orders)


# -- restrict ---------------------------------------------------------------------------


def test_restrict_borda_table():
    r = restrict(borda_profile(), "w y z")
    assert r.orders[0] == W("w > y > z")
    assert r.orders[2] == W("y > z > w")
    assert r.policies == PolicySet.of("w y z")


def test_restrict_identity_and_errors():
    p = borda_profile()
    assert restrict(p, p.policies) == p
    with pytest.raises(PreferenceError):
        restrict(p, [])
    with pytest.raises(PreferenceError):
        restrict(p, ["q"])


def test_restrict_composes_exhaustive():
    full = PolicySet.of("w x y z")
    subsets = [c for k in range(1, 5) for c in itertools.combinations(full.policies, k)]
    for o in ORDERS4:
        p = Profile.from_orders([o], policies=full)
        for big in subsets:
            for small in subsets:
                if set(small) <= set(big):
                    assert restrict(restrict(p, big), small) == restrict(p, small)


@given(st.sampled_from(ORDERS4), st.sets(st.sampled_from("wxyz"), min_size=1))
def test_restrict_preserves_surviving_pairs(order, keep):
    r = order.restrict(keep)
    for a, b in itertools.product(keep, repeat=2):
        assert r.compare(a, b) == order.compare(a, b)
