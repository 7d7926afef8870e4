"""Small reference profiles used by the tests, the harness seeds and the CLI demos."""

from __future__ import annotations

from .prefs import PolicySet, Profile, Situation, WeakOrder


def cycle_profile() -> Profile:
    """Three voters whose pairwise majorities run A > B > C > A."""
    return Profile.from_orders(
        ["A > B > C", "C > A > B", "B > C > A"], voters=("x", "y", "z"), policies=("A", "B", "C")
    )


def borda_profile() -> Profile:
    """Two voters w > x > y > z, one voter y > z > x > w."""
    return Profile.from_orders(
        ["w > x > y > z", "w > x > y > z", "y > z > x > w"],
        voters=("i", "j", "k"),
        policies=("w", "x", "y", "z"),
    )


def borda_without_x() -> Situation:
    return Situation(PolicySet.of("w y z"), borda_profile())


def sincere_plurality() -> Profile:
    """Four voters for x, three for y, two for z who prefer y to x."""
    orders = ["x > y > z"] * 4 + ["y > x > z"] * 3 + ["z > y > x"] * 2
    return Profile.from_orders(orders, policies=("x", "y", "z"))


def sophisticated_plurality() -> Profile:
    """The z supporters from :func:`sincere_plurality` vote for y instead."""
    orders = ["x > y > z"] * 4 + ["y > x > z"] * 3 + ["y > z > x"] * 2
    return Profile.from_orders(orders, policies=("x", "y", "z"))


def three_way_plurality() -> Profile:
    orders = ["A > B > C"] * 3 + ["B > C > A"] * 2 + ["C > B > A"] * 2
    return Profile.from_orders(orders, policies=("A", "B", "C"))


def single_voter_tie() -> Profile:
    return Profile.from_orders([WeakOrder.from_ranking(("x", "y"), "z")], policies=("x", "y", "z"))
