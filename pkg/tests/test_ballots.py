import pytest

from collchoice.ballots import InputError, format_ballots, parse_ballots, parse_council, parse_ternary
from collchoice.prefs import Profile, Situation, WeakOrder
from collchoice.scenarios import borda_profile, cycle_profile
from collchoice.weighted import Council, Leaf, evaluate_tree

CYCLE = """\
policies: A B C
voter x: A > B > C
voter y: C > A > B
voter z: B > C > A
"""


def test_cycle_file():
    s = parse_ballots(CYCLE)
    assert s == Situation.full(cycle_profile())


def test_borda_row_k():
    text = "policies: w x y z\nvoter k: y > z > x > w\n"
    (order,) = parse_ballots(text).profile.orders
    assert order == borda_profile().order_of("k")


def test_ties_and_comments():
    s = parse_ballots("# header\npolicies: A B C  # three\n\nvoter 1: A = B > C\n")
    assert s.profile.orders[0] == WeakOrder((frozenset("AB"), frozenset("C")))


def test_round_trip():
    s = Situation.full(borda_profile())
    assert parse_ballots(format_ballots(s)) == s


@pytest.mark.parametrize(
    "text, message, line",
    [
        ("policies: A B\n", "no ballots", None),
        ("voter 1: A > B\n", "policies", 1),
        ("policies: A B\nvoter 1: A > D\n", "unknown policy 'D'", 2),
        ("policies: A B\nvoter 1: A > B\nvoter 1: B > A\n", "duplicate voter", 3),
        ("policies: A B C\nvoter 1: A > B\n", "missing policies C", 2),
        ("policies: A B\nvoter 1: A > B > A\n", "listed twice", 2),
        ("policies: A B\nvoter 1: A > > B\n", "missing policy id", 2),
        ("policies: A B\nvoter 1:\n", "empty order", 2),
        ("policies: A B\nballot: A > B\n", "expected 'voter", 2),
    ],
)
def test_diagnostics(text, message, line):
    with pytest.raises(InputError) as exc:
        parse_ballots(text, source="f.bal")
    assert message in str(exc.value)
    assert exc.value.line == line
    assert str(exc.value).startswith("f.bal")


def test_unknown_policy_column():
    with pytest.raises(InputError) as exc:
        parse_ballots("policies: A B\nvoter 1: A > D\n")
    assert exc.value.column == len("voter 1: A > ") + 1


def test_ternary():
    t = parse_ternary("voter a: +1\nvoter b: 0\nvoter c: -1\n# done\n")
    assert t.voters == ("a", "b", "c") and t.ballots == (1, 0, -1)
    with pytest.raises(InputError, match="must be"):
        parse_ternary("voter a: 2\n")
    with pytest.raises(InputError, match="no ballots"):
        parse_ternary("# nothing\n")
    with pytest.raises(InputError, match="duplicate"):
        parse_ternary("voter a: 1\nvoter a: 0\n")


TREE = """\
# three districts of three
council (1 1 1) {
  council (1 1 1) { voter 1 voter 2 voter 3 }
  council (1 1 1) { voter 4 voter 5 voter 6 }
  council (1 1 1) { voter 7 voter 8 voter 9 }
}
"""


def test_council_tree():
    tree = parse_council(TREE)
    assert isinstance(tree, Council) and len(tree.children) == 3
    assert tree.children[2].children[0] == Leaf(6)
    ballots = (1, 1, -1, 1, 1, -1, -1, -1, -1)
    assert evaluate_tree(tree, ballots) == 1


@pytest.mark.parametrize(
    "text, message",
    [
        ("council (1 1) { voter 1 }", "2 weights"),
        ("council (1 x) { voter 1 voter 2 }", "non-negative"),
        ("council (1 1) { voter 0 voter 2 }", "1-based"),
        ("council (1 1) { voter 1 voter 2 } extra", "trailing"),
        ("council (1 1) { voter 1 voter 2", "'}'"),
        ("senate (1) { voter 1 }", "unexpected token"),
    ],
)
def test_council_errors(text, message):
    with pytest.raises(InputError, match=message):
        parse_council(text)
