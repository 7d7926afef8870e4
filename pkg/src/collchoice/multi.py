"""Multi-policy procedures: plurality, Borda, Condorcet pairings and agendas."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Sequence

from .majority import MajorityMatrix, strongly_connected_components
from .prefs import ChoiceSet, PreferenceError, Situation, WeakOrder


class BallotError(PreferenceError):
    """A ballot the procedure cannot use."""


# -- plurality ---------------------------------------------------------------


@dataclass(frozen=True)
class PluralityTally:
    votes: dict[str, int]
    abstained: tuple[str, ...]
    choice: ChoiceSet


def plurality_tally(situation: Situation, allow_abstain: bool = True) -> PluralityTally:
    """First-choice counts over the proposal.

    A voter whose best proposal class holds more than one policy has no
    single first choice and abstains (or is rejected).
    """
    proposal = situation.proposal
    votes = {p: 0 for p in proposal}
    abstained = []
    for voter, order in zip(situation.profile.voters, situation.profile.orders):
        top = order.top(proposal)
        if len(top) == 1:
            votes[next(iter(top))] += 1
        elif allow_abstain:
            abstained.append(voter)
        else:
            raise BallotError(f"voter {voter} has no single first choice among {proposal}")
    cast = sum(votes.values())
    if cast == 0:
        choice = ChoiceSet(frozenset(), valid=False, note="no votes cast")
    else:
        best = max(votes.values())
        chosen = frozenset(p for p, v in votes.items() if v == best)
        single = cast == 1 and len(situation.profile) > 1
        choice = ChoiceSet(chosen, valid=not single, note="single effective ballot" if single else "")
    return PluralityTally(votes, tuple(abstained), choice)


def plurality(situation: Situation, allow_abstain: bool = True) -> ChoiceSet:
    return plurality_tally(situation, allow_abstain).choice


# -- Borda -------------------------------------------------------------------


def borda_points(order: WeakOrder, policies: Sequence[str]) -> dict[str, Fraction]:
    """len(policies) points for the best down to 1 for the worst; a tied
    class shares the mean of the positions it spans."""
    ranked = order.restrict(policies)
    points = {}
    top = len(policies)
    for cls in ranked.classes:
        share = Fraction(2 * top - len(cls) + 1, 2)  # mean of top, top-1, ..., top-len+1
        for p in cls:
            points[p] = share
        top -= len(cls)
    return points


@dataclass(frozen=True)
class BordaTally:
    scores: dict[str, Fraction]
    ranking: tuple[frozenset[str], ...]

    def format_scores(self, order: Sequence[str]) -> str:
        return ", ".join(f"{p}={_num(self.scores[p])}" for p in order if p in self.scores)


def _num(v: Fraction) -> str:
    return str(v.numerator) if v.denominator == 1 else str(v)


def borda(situation: Situation) -> BordaTally:
    """Score every ballot over the situation's whole policy set and report
    the proposal's policies.

    Pass ``situation.restricted()`` to score with the proposal alone on the
    ballot.
    """
    universe = situation.profile.policies.policies
    totals = {p: Fraction(0) for p in universe}
    for order in situation.profile.orders:
        for p, v in borda_points(order, universe).items():
            totals[p] += v
    scores = {p: totals[p] for p in situation.proposal}
    levels = sorted(set(scores.values()), reverse=True)
    ranking = tuple(frozenset(p for p in scores if scores[p] == s) for s in levels)
    return BordaTally(scores, ranking)


def borda_choice(situation: Situation) -> ChoiceSet:
    return ChoiceSet(borda(situation).ranking[0])


# -- Condorcet ---------------------------------------------------------------


def pairwise_matrix(situation: Situation) -> MajorityMatrix:
    return MajorityMatrix.from_profile(situation.profile, situation.proposal)


def condorcet_winner(matrix: MajorityMatrix) -> str | None:
    for a in matrix.policies:
        if all(matrix.beats(a, b) for b in matrix.policies if b != a):
            return a
    return None


def condorcet(situation: Situation) -> ChoiceSet:
    matrix = pairwise_matrix(situation)
    winner = condorcet_winner(matrix)
    if winner is not None:
        return ChoiceSet(frozenset([winner]))
    cycles = tuple(c for c in strongly_connected_components(matrix) if len(c) > 1)
    return ChoiceSet(frozenset(), cycles=cycles, note="no Condorcet winner")


@dataclass(frozen=True)
class CycleInfo:
    members: frozenset[str]
    min_margin: Fraction


def detect_cycles(matrix: MajorityMatrix) -> list[CycleInfo]:
    """Strongly connected components of three or more policies, each with
    the smallest margin on a majority edge inside it."""
    out = []
    for comp in strongly_connected_components(matrix):
        if len(comp) < 3:
            continue
        margins = [matrix.margin(a, b) for a in comp for b in comp if a != b and matrix.beats(a, b)]
        out.append(CycleInfo(comp, min(margins)))
    order = {p: i for i, p in enumerate(matrix.policies)}
    out.sort(key=lambda c: min(order[p] for p in c.members))
    return out


# -- agendas -----------------------------------------------------------------


@dataclass(frozen=True)
class Stage:
    incumbent: str
    challenger: str
    winner: str | None  # None on a pairwise tie


@dataclass(frozen=True)
class AgendaResult:
    order: tuple[str, ...]
    stages: tuple[Stage, ...]
    final: str | None
    tie: bool
    cycle: bool

    def format(self) -> str:
        if not self.stages:
            return f"{self.final}"
        text = self.stages[0].incumbent
        for st in self.stages:
            text = f"( {text} vs {st.challenger} )" if st is not self.stages[-1] else f"{text} vs {st.challenger}"
        if self.tie:
            return f"{text} = tie between {self.stages[-1].incumbent} and {self.stages[-1].challenger}"
        return f"{text} = {self.final}"


def agenda(situation: Situation, order: Sequence[str]) -> AgendaResult:
    """Sequential pairwise majority contests in introduction order."""
    order = tuple(order)
    if sorted(order) != sorted(situation.proposal) or len(set(order)) != len(order):
        raise PreferenceError(f"agenda {order} is not a permutation of the proposal {situation.proposal}")
    matrix = pairwise_matrix(situation)
    cycle = any(len(c) > 1 for c in strongly_connected_components(matrix))
    survivor = order[0]
    stages = []
    for challenger in order[1:]:
        if matrix.beats(survivor, challenger):
            winner = survivor
        elif matrix.beats(challenger, survivor):
            winner = challenger
        else:
            stages.append(Stage(survivor, challenger, None))
            return AgendaResult(order, tuple(stages), None, True, cycle)
        stages.append(Stage(survivor, challenger, winner))
        survivor = winner
    return AgendaResult(order, tuple(stages), survivor, False, cycle)

