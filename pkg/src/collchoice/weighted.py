"""Weighted two-policy voting, dictator/vetoer/essential analysis and council trees."""

from __future__ import annotations

import itertools
from dataclasses import dataclass, field
from typing import Sequence, Union

from .binary import (
    ABSOLUTE_MAJORITY,
    ABSOLUTE_SPECIAL_MAJORITY,
    NON_MINORITY,
    SIMPLE_MAJORITY,
    BinaryRule,
    TernaryFunction,
    all_profiles,
    check_ballots,
    decide,
    sign,
)

MAX_VOTERS = 8


@dataclass(frozen=True)
class WeightVector:
    weights: tuple[int, ...]

    def __post_init__(self) -> None:
        weights = tuple(self.weights)
        object.__setattr__(self, "weights", weights)
        if not weights:
            raise ValueError("weight vector must not be empty")
        for w in weights:
            if not isinstance(w, int) or isinstance(w, bool) or w < 0:
                raise ValueError(f"weights must be non-negative integers, got {w!r}")
        if not any(weights):
            raise ValueError("at least one weight must be non-zero")

    @classmethod
    def parse(cls, text: str) -> WeightVector:
        try:
            return cls(tuple(int(t) for t in text.replace(",", " ").split()))
        except ValueError as exc:
            raise ValueError(f"bad weight vector {text!r}: {exc}") from None

    @property
    def total(self) -> int:
        return sum(self.weights)

    def __len__(self) -> int:
        return len(self.weights)

    def __iter__(self):
        return iter(self.weights)


def _as_weights(rho) -> WeightVector:
    return rho if isinstance(rho, WeightVector) else WeightVector(tuple(rho))


def weighted_tally(rule: BinaryRule, rho: WeightVector | Sequence[int], ballots: Sequence[int]) -> int:
    rho = _as_weights(rho)
    ballots = check_ballots(ballots)
    if len(ballots) != len(rho):
        raise ValueError(f"{len(ballots)} ballots for {len(rho)} weights")
    w_for = sum(w for w, b in zip(rho.weights, ballots) if b == 1)
    w_against = sum(w for w, b in zip(rho.weights, ballots) if b == -1)
    return decide(rule, w_for, w_against, rho.total)


def weighted_rule(rule: BinaryRule, rho: WeightVector | Sequence[int]) -> TernaryFunction:
    rho = _as_weights(rho)
    return lambda ballots: weighted_tally(rule, rho, ballots)


def _check_size(rho: WeightVector) -> None:
    if len(rho) > MAX_VOTERS:
        raise ValueError(f"exhaustive analysis is limited to {MAX_VOTERS} voters")


@dataclass(frozen=True)
class DictatorReport:
    """``voter`` is a 0-based index or None; ``refutations`` maps every other
    voter to the least profile on which the outcome differs from their ballot."""

    voter: int | None
    refutations: dict[int, tuple[int, ...]]
    profiles_checked: int


def find_dictator(rule: BinaryRule, rho: WeightVector | Sequence[int]) -> DictatorReport:
    rho = _as_weights(rho)
    _check_size(rho)
    f = weighted_rule(rule, rho)
    profiles = all_profiles(len(rho))
    outcomes = {d: f(d) for d in profiles}
    refutations: dict[int, tuple[int, ...]] = {}
    dictator = None
    for j in range(len(rho)):
        bad = next((d for d in profiles if d[j] != 0 and outcomes[d] != d[j]), None)
        if bad is None:
            if dictator is None:
                dictator = j
        else:
            refutations[j] = bad
    return DictatorReport(dictator, refutations, len(profiles))


def vetoer_profiles(n: int, j: int) -> tuple[tuple[int, ...], tuple[int, ...]]:
    """Voter j abstains while everyone else votes +1, resp. -1."""
    up = tuple(0 if i == j else 1 for i in range(n))
    down = tuple(0 if i == j else -1 for i in range(n))
    return up, down


@dataclass(frozen=True)
class VetoerReport:
    voters: tuple[int, ...]
    outcomes: dict[int, tuple[int, int]]


def find_vetoer(rule: BinaryRule, rho: WeightVector | Sequence[int]) -> VetoerReport:
    """Voters whose abstention against an otherwise unanimous electorate forces
    a tie in both directions."""
    rho = _as_weights(rho)
    n = len(rho)
    outcomes = {}
    found = []
    for j in range(n):
        up, down = vetoer_profiles(n, j)
        pair = (weighted_tally(rule, rho, up), weighted_tally(rule, rho, down))
        outcomes[j] = pair
        if n > 1 and pair == (0, 0):
            found.append(j)
    return VetoerReport(tuple(found), outcomes)


def blocking_voters(rule: BinaryRule, rho: WeightVector | Sequence[int], direction: int = 1) -> tuple[int, ...]:
    """Voters whose abstention stops everyone else's unanimous ``direction`` vote."""
    rho = _as_weights(rho)
    n = len(rho)
    out = []
    for j in range(n):
        up, down = vetoer_profiles(n, j)
        d = up if direction == 1 else down
        if n > 1 and weighted_tally(rule, rho, d) != direction:
            out.append(j)
    return tuple(out)


@dataclass(frozen=True)
class EssentialReport:
    voters: tuple[int, ...]
    certificates: dict[int, tuple[int, ...]]


def essential_voters(rule: BinaryRule, rho: WeightVector | Sequence[int]) -> EssentialReport:
    """Voters who change the outcome by changing their own ballot on at least
    one completion of the other ballots.  Certificates hold the least such
    completion with the voter's slot set to 0."""
    rho = _as_weights(rho)
    _check_size(rho)
    n = len(rho)
    f = weighted_rule(rule, rho)
    found = []
    certs = {}
    for i in range(n):
        for rest in itertools.product((-1, 0, 1), repeat=n - 1):
            outs = {f(rest[:i] + (b,) + rest[i:]) for b in (-1, 0, 1)}
            if len(outs) > 1:
                found.append(i)
                certs[i] = rest[:i] + (0,) + rest[i:]
                break
    return EssentialReport(tuple(found), certs)


@dataclass(frozen=True)
class BoundsReport:
    """Closed-form flags next to exhaustive findings (0-based voter indices).

    ``mismatches`` lists real powers the bounds failed to flag; ``unconfirmed``
    lists flags that exhaustive search did not bear out.
    """

    rule: BinaryRule
    weights: tuple[int, ...]
    total: int
    safe_by_bound: bool
    dictator_flags: tuple[int, ...]
    vetoer_flags: tuple[int, ...]
    dictators: tuple[int, ...]
    vetoers: tuple[int, ...]
    mismatches: tuple[str, ...] = field(default=())
    unconfirmed: tuple[str, ...] = field(default=())

    @property
    def consistent(self) -> bool:
        return not self.mismatches


def check_weight_bounds(rule: BinaryRule, rho: WeightVector | Sequence[int]) -> BoundsReport:
    """Compare the closed-form weight thresholds with exhaustive search.

    Majority and non-minority: a weight above half the total flags a
    dictator, a weight of at least half flags a vetoer, and all weights
    below half the total is sufficient for safety.  Absolute majority: a weight
    above alpha*W flags a dictator, a weight above (1-alpha)*W flags a voter
    able to block the motion by abstaining.
    """
    rho = _as_weights(rho)
    if len(rho) > 6:
        raise ValueError("bound cross-validation is limited to 6 voters")
    w = rho.total
    if rule.kind in (SIMPLE_MAJORITY, NON_MINORITY):
        dict_flags = tuple(j for j, r in enumerate(rho) if 2 * r > w)
        # half the weight is already enough to block under non-minority
        veto_flags = tuple(j for j, r in enumerate(rho) if 2 * r >= w)
        safe = not veto_flags
        vetoers = find_vetoer(rule, rho).voters
    elif rule.kind in (ABSOLUTE_MAJORITY, ABSOLUTE_SPECIAL_MAJORITY):
        a = rule.alpha
        dict_flags = tuple(j for j, r in enumerate(rho) if r > a * w)
        veto_flags = tuple(j for j, r in enumerate(rho) if r > (1 - a) * w)
        safe = not dict_flags and not veto_flags
        # strongly decisive: a veto shows as the motion failing, never as a tie
        vetoers = blocking_voters(rule, rho, 1)
    else:
        raise ValueError(f"no weight bounds are known for {rule.kind}")
    dictator = find_dictator(rule, rho).voter
    dictators = () if dictator is None else (dictator,)
    mismatches = []
    unconfirmed = []
    if safe and (dictators or vetoers):
        mismatches.append("bound reports safety but exhaustive search finds a dictator or vetoer")
    for j in dictators:
        if j not in dict_flags:
            mismatches.append(f"voter {j + 1} (weight {rho.weights[j]}) dictates below the dictator bound")
    for j in vetoers:
        if j not in veto_flags:
            mismatches.append(f"voter {j + 1} (weight {rho.weights[j]}) vetoes below the vetoer bound")
    for j in dict_flags:
        if j not in dictators:
            unconfirmed.append(f"voter {j + 1} exceeds the dictator bound but is not a dictator")
    for j in veto_flags:
        if j not in vetoers:
            unconfirmed.append(f"voter {j + 1} exceeds the vetoer bound but cannot veto")
    return BoundsReport(
        rule, rho.weights, w, safe, dict_flags, veto_flags, dictators, vetoers,
        tuple(mismatches), tuple(unconfirmed),
    )


# -- representative councils --------------------------------------------------


@dataclass(frozen=True)
class Leaf:
    index: int  # 0-based position in the ternary profile


@dataclass(frozen=True)
class Council:
    children: tuple[CouncilTree, ...]
    weights: WeightVector

    def __post_init__(self) -> None:
        children = tuple(self.children)
        object.__setattr__(self, "children", children)
        if not isinstance(self.weights, WeightVector):
            object.__setattr__(self, "weights", WeightVector(tuple(self.weights)))
        if not children:
            raise ValueError("a council needs at least one member")
        if len(children) != len(self.weights):
            raise ValueError(
                f"council has {len(children)} members but {len(self.weights)} weights"
            )

    @classmethod
    def unit(cls, children: Sequence[CouncilTree]) -> Council:
        return cls(tuple(children), WeightVector((1,) * len(children)))


CouncilTree = Union[Leaf, Council]


def tree_leaves(tree: CouncilTree) -> list[int]:
    if isinstance(tree, Leaf):
        return [tree.index]
    return [i for c in tree.children for i in tree_leaves(c)]


def evaluate_tree(tree: CouncilTree, ballots: Sequence[int]) -> int:
    """Evaluate bottom-up: leaves select their voter's ballot, each council
    takes the sign of its weighted members' outcomes.  A tied council
    emits 0 and acts as an abstaining member above it."""
    ballots = check_ballots(ballots)
    for i in tree_leaves(tree):
        if not 0 <= i < len(ballots):
            raise ValueError(f"leaf refers to voter {i + 1} but only {len(ballots)} ballots exist")

    def ev(node: CouncilTree) -> int:
        if isinstance(node, Leaf):
            return ballots[node.index]
        return sign(sum(w * ev(c) for w, c in zip(node.weights.weights, node.children)))

    return ev(tree)

