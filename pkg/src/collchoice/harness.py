"""Bounded exhaustive checks of the five collective-choice conditions.

A choice function maps a :class:`Situation` to a :class:`ChoiceSet`.  Each
check sweeps every profile of admissible orders within the given bounds
(profiles outermost, proposals innermost), stops at the first violation and
returns it as a witness.  Witnesses replay: feeding the witness situation
back through the same per-situation test reproduces the same violation.

Seed situations, when given, are examined before the sweep so that known
counterexamples are reported in preference to the lexicographically least
one.
"""

from __future__ import annotations

import itertools
import random
from dataclasses import dataclass, field
from typing import Callable, Iterable, Iterator, Sequence

from .binary import BinaryRule, decide
from .enumeration import enumerate_weak_orders
from .multi import borda_choice, condorcet, plurality
from .prefs import (
    ChoiceSet,
    PolicySet,
    PreferenceError,
    Profile,
    Situation,
    WeakOrder,
    demote_strong,
    demote_to_bottom,
    is_admissible,
    promote_strong,
    promote_to_top,
    restrict,
)

ADMISSIBLE = "admissible-orderings"
MONOTONICITY = "monotonicity"
INDEPENDENCE = "independence"
NON_IMPOSITION = "non-imposition"
NON_DICTATORIAL = "non-dictatorial"
CONDITIONS = (ADMISSIBLE, MONOTONICITY, INDEPENDENCE, NON_IMPOSITION, NON_DICTATORIAL)

FRESH_POLICY = "W"
MAX_SWEEP_POLICIES = 4
MAX_SWEEP_VOTERS = 5


@dataclass(frozen=True)
class ChoiceFunction:
    """``proposal_sizes`` of None means any proposal of two or more policies."""

    name: str
    evaluate: Callable[[Situation], ChoiceSet]
    proposal_sizes: tuple[int, ...] | None = None

    def __call__(self, situation: Situation) -> ChoiceSet:
        return self.evaluate(situation)

    def supports(self, size: int) -> bool:
        return size >= 2 and (self.proposal_sizes is None or size in self.proposal_sizes)


@dataclass(frozen=True)
class Bounds:
    policies: int
    voters: int
    labels: tuple[str, ...] | None = None
    voter_ids: tuple[str, ...] | None = None

    def __post_init__(self) -> None:
        if not 2 <= self.policies <= MAX_SWEEP_POLICIES:
            raise ValueError(f"sweeps support 2..{MAX_SWEEP_POLICIES} policies")
        if not 1 <= self.voters <= MAX_SWEEP_VOTERS:
            raise ValueError(f"sweeps support 1..{MAX_SWEEP_VOTERS} voters")
        if self.labels is None:
            object.__setattr__(self, "labels", tuple("ABCDEFGH"[: self.policies]))
        if self.voter_ids is None:
            object.__setattr__(self, "voter_ids", tuple(str(i + 1) for i in range(self.voters)))
        if len(self.labels) != self.policies or len(self.voter_ids) != self.voters:
            raise ValueError("labels do not match the bounds")
        if FRESH_POLICY in self.labels:
            raise ValueError(f"{FRESH_POLICY!r} is reserved for the tie test")

    def __str__(self) -> str:
        return f"{self.policies} policies, {self.voters} voters"


@dataclass(frozen=True)
class Witness:
    """A situation on which a test failed, plus the parameters that pin the
    failure down (the policy and voter involved, and a derived situation)."""

    situation: Situation
    test: str
    detail: str
    policy: str | None = None
    other: str | None = None
    voter: str | None = None
    counter: Situation | None = None

    def key(self) -> tuple:
        return (self.test, self.policy, self.other, self.voter, self.counter)


@dataclass(frozen=True)
class ConditionVerdict:
    condition: str
    function: str
    passed: bool
    witness: Witness | None
    bounds: str
    cases: int
    note: str = ""
    subtests: tuple[tuple[str, bool], ...] = field(default=())


# -- sweep machinery -----------------------------------------------------------


def _memo(f: ChoiceFunction) -> Callable[[Situation], ChoiceSet]:
    cache: dict[Situation, ChoiceSet] = {}

    def ev(s: Situation) -> ChoiceSet:
        out = cache.get(s)
        if out is None:
            out = cache[s] = f(s)
        return out

    return ev


def profiles_within(bounds: Bounds) -> Iterator[Profile]:
    policies = PolicySet(bounds.labels)
    orders = list(enumerate_weak_orders(policies))
    for combo in itertools.product(orders, repeat=bounds.voters):
        yield Profile(bounds.voter_ids, combo, policies)


def proposals_within(f: ChoiceFunction, policies: PolicySet) -> list[PolicySet]:
    out = []
    for size in range(2, len(policies) + 1):
        if f.supports(size):
            out.extend(PolicySet(c) for c in itertools.combinations(policies.policies, size))
    return out


def situations(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> Iterator[Situation]:
    for s in seeds:
        if f.supports(len(s.proposal)):
            yield s
    props = proposals_within(f, PolicySet(bounds.labels))
    for profile in profiles_within(bounds):
        for y in props:
            if all(is_admissible(o, y) for o in profile.orders):
                yield Situation(y, profile)


def _sweep(condition, f, bounds, seeds, test, note="") -> ConditionVerdict:
    ev = _memo(f)
    cases = 0
    for s in situations(f, bounds, seeds):
        cases += 1
        w = test(ev, f, s)
        if w is not None:
            return ConditionVerdict(condition, f.name, False, w, str(bounds), cases, note)
    return ConditionVerdict(condition, f.name, True, None, str(bounds), cases, note)


# -- admissible orderings ------------------------------------------------------


def _relabel(order: WeakOrder, mapping: dict[str, str]) -> WeakOrder:
    return WeakOrder(tuple(frozenset(mapping[p] for p in c) for c in order.classes))


def symmetric_tie(situation: Situation) -> bool:
    """True when relabelling the proposal can carry any proposal policy to
    any other without changing the multiset of ballots over the proposal."""
    y = situation.proposal.policies
    ballots = sorted(map(str, restrict(situation.profile, y).orders))
    reach = {y[0]}
    for perm in itertools.permutations(y):
        mapping = dict(zip(y, perm))
        moved = sorted(str(_relabel(o, mapping)) for o in restrict(situation.profile, y).orders)
        if moved == ballots:
            reach.add(mapping[y[0]])
    return len(reach) == len(y)


def _admissible_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    if not chosen:
        return Witness(s, "decisive", "empty choice set (global indifference or a policy cycle)")
    if chosen == frozenset(s.proposal) and not symmetric_tie(s):
        return Witness(s, "proper-subset", "whole proposal chosen on a profile that is not symmetric")
    return None


def check_admissible_orderings(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> ConditionVerdict:
    """Every profile of admissible orders must yield a non-empty choice set
    that is a proper subset of the proposal.  Choosing the whole proposal is
    excused only on profiles whose symmetry makes all proposal policies
    interchangeable, where no neutral and anonymous rule could do better."""
    return _sweep(ADMISSIBLE, f, bounds, seeds, _admissible_test)


# -- monotonicity ----------------------------------------------------------------


def _monotonicity_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    for x in sorted(chosen):
        t = Situation(s.proposal, promote_strong(x, s.profile))
        if x not in ev(t).chosen:
            return Witness(s, "promote", f"{x} chosen, dropped after every voter raises it", policy=x, counter=t)
    return None


def check_monotonicity(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> ConditionVerdict:
    return _sweep(MONOTONICITY, f, bounds, seeds, _monotonicity_test)


# -- independence ----------------------------------------------------------------


def _independence_test(ev, f, s) -> Witness | None:
    if len(s.proposal) == len(s.profile.policies):
        return None
    t = s.restricted()
    a, b = ev(s).chosen, ev(t).chosen
    if a != b:
        order = s.proposal.policies
        return Witness(
            s,
            "restrict",
            f"{ChoiceSet(a).format(order)} with the full ballots, {ChoiceSet(b).format(order)} with ballots over the proposal only",
            counter=t,
        )
    return None


def check_independence(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> ConditionVerdict:
    """The choice over Y may depend only on the ballots restricted to Y."""
    return _sweep(INDEPENDENCE, f, bounds, seeds, _independence_test)


# -- non-imposition ----------------------------------------------------------------


def _unilateral_imposition_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    for x in sorted(chosen):
        profile = s.profile
        escaped = False
        for _ in range(2 * len(profile.policies)):
            nxt = demote_strong(x, profile)
            if nxt == profile:
                break
            profile = nxt
            if x not in ev(Situation(s.proposal, profile)).chosen:
                escaped = True
                break
        if not escaped:
            return Witness(
                s,
                "unilateral",
                f"{x} stays chosen even after every voter lowers it to the bottom",
                policy=x,
                counter=Situation(s.proposal, profile),
            )
    return None


def _insertions(order: WeakOrder, fresh: str) -> Iterator[WeakOrder]:
    cls = order.classes
    for i in range(len(cls) + 1):
        yield WeakOrder(cls[:i] + (frozenset([fresh]),) + cls[i:])
    for i in range(len(cls)):
        yield WeakOrder(cls[:i] + (cls[i] | {fresh},) + cls[i + 1 :])


def _tie_test(ev, f, s) -> Witness | None:
    if not f.supports(len(s.proposal) + 1):
        return None
    chosen = sorted(ev(s).chosen)
    if len(chosen) < 2:
        return None
    universe = PolicySet(s.profile.policies.policies + (FRESH_POLICY,))
    proposal = PolicySet(s.proposal.policies + (FRESH_POLICY,))
    options = [list(_insertions(o, FRESH_POLICY)) for o in s.profile.orders]
    for combo in itertools.product(*options):
        t = Situation(proposal, Profile(s.profile.voters, combo, universe))
        after = ev(t).chosen
        for y, z in itertools.combinations(chosen, 2):
            if (y in after) != (z in after):
                kept, lost = (y, z) if y in after else (z, y)
                return Witness(
                    s,
                    "tie",
                    f"{y} and {z} tied; adding {FRESH_POLICY} keeps {kept} and drops {lost}",
                    policy=y,
                    other=z,
                    counter=t,
                )
    return None


def _non_imposition_test(ev, f, s) -> Witness | None:
    return _unilateral_imposition_test(ev, f, s) or _tie_test(ev, f, s)


def check_non_imposition(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> ConditionVerdict:
    """Unilateral test: each chosen policy can be unchosen by lowering it in
    every ballot, one step at a time.  Tie test: when y and z are both
    chosen, inserting a fresh policy anywhere in any ballots never keeps
    one of them while dropping the other."""
    v = _sweep(
        NON_IMPOSITION,
        f,
        bounds,
        seeds,
        _non_imposition_test,
        note="tie test inserts a fresh policy at every position of every ballot and also proposes it",
    )
    uni = not (v.witness and v.witness.test == "unilateral")
    tie = not (v.witness and v.witness.test == "tie")
    return _with_subtests(v, (("unilateral", uni), ("tie", tie)))


def _with_subtests(v: ConditionVerdict, subtests) -> ConditionVerdict:
    return ConditionVerdict(v.condition, v.function, v.passed, v.witness, v.bounds, v.cases, v.note, tuple(subtests))


# -- non-dictatorial ---------------------------------------------------------------


def _others(profile: Profile, j: str) -> list[str]:
    return [v for v in profile.voters if v != j]


def _unilateral_dictator_test(ev, f, s) -> Witness | None:
    for j in s.profile.voters:
        top = s.profile.order_of(j).top(s.proposal)
        if len(top) != 1:
            continue
        x = next(iter(top))
        profile = s.profile
        for i in _others(profile, j):
            profile = demote_to_bottom(x, profile, i)
        t = Situation(s.proposal, profile)
        if ev(t).chosen == frozenset([x]):
            return Witness(s, "dictator", f"voter {j} gets {x} although everyone else ranks it last", policy=x, voter=j, counter=t)
    return None


def _unilateral_vetoer_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    for x in s.proposal:
        if x in chosen:
            continue
        for j in s.profile.voters:
            profile = s.profile
            for i in _others(profile, j):
                profile = promote_to_top(x, profile, i)
            t = Situation(s.proposal, profile)
            if x not in ev(t).chosen:
                return Witness(s, "vetoer", f"voter {j} keeps {x} out although everyone else ranks it first", policy=x, voter=j, counter=t)
    return None


def _lone_pivot(ev, s, move, x) -> tuple[str, Situation] | None:
    base = ev(s).chosen
    changed = []
    for i in s.profile.voters:
        t = Situation(s.proposal, move(x, s.profile, i))
        if ev(t).chosen != base:
            changed.append((i, t))
            if len(changed) > 1:
                return None
    return changed[0] if changed else None


def _tie_dictator_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    for y in s.proposal:
        if y in chosen:
            continue
        hit = _lone_pivot(ev, s, promote_strong, y)
        if hit:
            j, t = hit
            return Witness(s, "tie-dictator", f"only voter {j} can change the outcome by raising {y}", policy=y, voter=j, counter=t)
    return None


def _tie_vetoer_test(ev, f, s) -> Witness | None:
    chosen = ev(s).chosen
    if len(chosen) != 1:
        return None
    x = next(iter(chosen))
    hit = _lone_pivot(ev, s, demote_strong, x)
    if hit:
        j, t = hit
        return Witness(s, "tie-vetoer", f"only voter {j} can change the outcome by lowering {x}", policy=x, voter=j, counter=t)
    return None


_DICTATOR_TESTS = (
    ("dictator", _unilateral_dictator_test),
    ("vetoer", _unilateral_vetoer_test),
    ("tie-dictator", _tie_dictator_test),
    ("tie-vetoer", _tie_vetoer_test),
)


def _non_dictatorial_test(ev, f, s) -> Witness | None:
    if len(s.profile) < 2:
        return None
    for _, test in _DICTATOR_TESTS:
        w = test(ev, f, s)
        if w is not None:
            return w
    return None


def check_non_dictatorial(f: ChoiceFunction, bounds: Bounds, seeds: Iterable[Situation] = ()) -> ConditionVerdict:
    """Four tests: a voter whose unique favourite wins against everyone
    else ranking it last (dictator); a voter who keeps a policy out against
    everyone else ranking it first (vetoer); and a voter who is the only one
    able to change the outcome by raising a rejected policy, or by lowering
    the sole chosen one, by a single step.  With one voter the tests are
    vacuous."""
    note = "vacuous: a single voter" if bounds.voters < 2 else ""
    v = _sweep(NON_DICTATORIAL, f, bounds, seeds, _non_dictatorial_test, note=note)
    failed = v.witness.test if v.witness else None
    return _with_subtests(v, tuple((name, name != failed) for name, _ in _DICTATOR_TESTS))


# -- registry and replay -------------------------------------------------------------


CHECKS = {
    ADMISSIBLE: (check_admissible_orderings, _admissible_test),
    MONOTONICITY: (check_monotonicity, _monotonicity_test),
    INDEPENDENCE: (check_independence, _independence_test),
    NON_IMPOSITION: (check_non_imposition, _non_imposition_test),
    NON_DICTATORIAL: (check_non_dictatorial, _non_dictatorial_test),
}


def run_checks(
    f: ChoiceFunction,
    bounds: Bounds,
    conditions: Sequence[str] | None = None,
    seeds: Iterable[Situation] = (),
) -> list[ConditionVerdict]:
    seeds = tuple(seeds)
    names = CONDITIONS if conditions is None else tuple(conditions)
    unknown = [c for c in names if c not in CHECKS]
    if unknown:
        raise ValueError(f"unknown conditions {unknown}; expected some of {', '.join(CONDITIONS)}")
    return [CHECKS[c][0](f, bounds, seeds) for c in names]


def replay(f: ChoiceFunction, verdict: ConditionVerdict) -> bool:
    """Re-run the failing test on the witness situation; True iff the same
    violation comes back."""
    if verdict.passed or verdict.witness is None:
        return False
    test = CHECKS[verdict.condition][1]
    again = test(_memo(f), f, verdict.witness.situation)
    return again is not None and again.key() == verdict.witness.key()


# -- conflict-resolution combinators --------------------------------------------------


def _pair_votes(situation: Situation, a: str, b: str) -> tuple[list[str], list[str]]:
    pro = [v for v, o in zip(situation.profile.voters, situation.profile.orders) if o.prefers(a, b)]
    con = [v for v, o in zip(situation.profile.voters, situation.profile.orders) if o.prefers(b, a)]
    return pro, con


def unanimous_choice(situation: Situation) -> ChoiceSet:
    """x is chosen when no voter ranks any proposal policy above it and at
    least one voter ranks it above something."""
    y = situation.proposal
    chosen = set()
    for x in y:
        opposed = any(o.rank(x) > min(o.rank(p) for p in y) for o in situation.profile.orders)
        supported = any(any(o.prefers(x, p) for p in y) for o in situation.profile.orders)
        if not opposed and supported:
            chosen.add(x)
    return ChoiceSet(frozenset(chosen))


def unresolved_choice(situation: Situation) -> ChoiceSet:
    """Policies caught in a contradicted pair are dropped, as are policies
    beaten without dissent; whatever is left is chosen."""
    y = situation.proposal.policies
    out = set(y)
    for a, b in itertools.combinations(y, 2):
        pro, con = _pair_votes(situation, a, b)
        if pro and con:
            out.discard(a)
            out.discard(b)
        elif pro:
            out.discard(b)
        elif con:
            out.discard(a)
    return ChoiceSet(frozenset(out))


@dataclass(frozen=True)
class Bias:
    """How a contradicted pair is settled.

    kind "policy": ``value`` is a priority list, earlier wins; policies not
    listed follow in proposal order.  kind "voter": ``value`` names the
    privileged voter, whose strict preference wins (if they are indifferent
    the pair stays open).  kind "random": a coin seeded by ``seed`` and the
    pair.
    """

    kind: str
    value: tuple[str, ...] | str | None = None
    seed: int = 0

    def __post_init__(self) -> None:
        if self.kind not in ("policy", "voter", "random"):
            raise ValueError(f"unknown bias kind {self.kind!r}")
        if self.kind == "policy" and isinstance(self.value, str):
            object.__setattr__(self, "value", (self.value,))
        if self.kind in ("policy", "voter") and not self.value:
            raise ValueError(f"a {self.kind} bias needs a value")

    def settle(self, situation: Situation, a: str, b: str) -> str | None:
        if self.kind == "policy":
            order = list(self.value) + [p for p in situation.proposal if p not in self.value]
            return a if order.index(a) < order.index(b) else b
        if self.kind == "voter":
            c = situation.profile.order_of(self.value).compare(a, b)
            return a if c > 0 else (b if c < 0 else None)
        lo, hi = sorted((a, b))
        return random.Random(f"{self.seed}:{lo}:{hi}").choice((lo, hi))


def biased_choice(situation: Situation, bias: Bias) -> ChoiceSet:
    """Pairs without dissent go to the side some voter prefers; contradicted
    pairs are settled by ``bias``.  The undefeated policies are chosen."""
    y = situation.proposal.policies
    beaten = set()
    for a, b in itertools.combinations(y, 2):
        pro, con = _pair_votes(situation, a, b)
        if pro and con:
            winner = bias.settle(situation, a, b)
        elif pro:
            winner = a
        elif con:
            winner = b
        else:
            winner = None
        if winner is not None:
            beaten.add(b if winner == a else a)
    return ChoiceSet(frozenset(p for p in y if p not in beaten))


# -- built-in functions ---------------------------------------------------------------


def binary_choice(rule: BinaryRule, weights: Sequence[int] | None = None, name: str | None = None) -> ChoiceFunction:
    """Lift a two-policy rule: the proposal's first policy plays +1."""

    def evaluate(s: Situation) -> ChoiceSet:
        if len(s.proposal) != 2:
            raise PreferenceError("a two-policy rule needs exactly two proposals")
        a, b = s.proposal.policies
        ballots = [o.compare(a, b) for o in s.profile.orders]
        w = weights if weights is not None else (1,) * len(ballots)
        if len(w) != len(ballots):
            raise PreferenceError(f"{len(w)} weights for {len(ballots)} voters")
        w_for = sum(wi for wi, d in zip(w, ballots) if d == 1)
        w_against = sum(wi for wi, d in zip(w, ballots) if d == -1)
        out = decide(rule, w_for, w_against, sum(w))
        chosen = {1: {a}, -1: {b}, 0: {a, b}}[out]
        effective = sum(1 for wi, d in zip(w, ballots) if d != 0 and wi)
        single = effective == 1 and len(ballots) > 1
        return ChoiceSet(frozenset(chosen), valid=not single)

    label = name or (str(rule) if weights is None else f"{rule} weights={','.join(map(str, weights))}")
    return ChoiceFunction(label, evaluate, (2,))


def builtin_functions(seed: int = 0) -> dict[str, ChoiceFunction]:
    return {
        "plurality": ChoiceFunction("plurality", plurality),
        "borda": ChoiceFunction("borda", borda_choice),
        "condorcet": ChoiceFunction("condorcet", condorcet),
        "unanimous": ChoiceFunction("unanimous", unanimous_choice),
        "biased": ChoiceFunction("biased", lambda s: biased_choice(s, Bias("policy", (s.proposal.policies[0],)))),
        "biased-random": ChoiceFunction("biased-random", lambda s: biased_choice(s, Bias("random", seed=seed))),
        "unresolved": ChoiceFunction("unresolved", unresolved_choice),
    }


MULTI_POLICY_FUNCTIONS = ("plurality", "borda", "condorcet", "unanimous", "biased", "unresolved")


@dataclass(frozen=True)
class ImpossibilityReport:
    bounds: str
    verdicts: dict[str, list[ConditionVerdict]]

    def failures(self, name: str) -> list[ConditionVerdict]:
        return [v for v in self.verdicts[name] if not v.passed]

    @property
    def every_function_fails(self) -> bool:
        return all(self.failures(n) for n in self.verdicts)


def impossibility_report(
    bounds: Bounds,
    seeds: Iterable[Situation] = (),
    names: Sequence[str] = MULTI_POLICY_FUNCTIONS,
    seed: int = 0,
) -> ImpossibilityReport:
    funcs = builtin_functions(seed)
    seeds = tuple(seeds)
    return ImpossibilityReport(str(bounds), {n: run_checks(funcs[n], bounds, seeds=seeds) for n in names})
