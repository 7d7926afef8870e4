"""Preference model: policies, weak orders, profiles and situations.

A weak order is stored as a tuple of indifference classes, best first, so
transitivity and connectedness hold by construction.  Everything here is
immutable; the transformation functions return new objects.
"""

from __future__ import annotations

import itertools
import re
from dataclasses import dataclass, field
from typing import Iterable, Iterator, Sequence

_ID_RE = re.compile(r"^[^\s>=<:#,(){}]+$")


class PreferenceError(ValueError):
    """Malformed preference data or an operation on unknown policies/voters."""


def _check_id(name: str, what: str = "policy") -> str:
    if not isinstance(name, str) or not _ID_RE.match(name):
        raise PreferenceError(f"invalid {what} id {name!r}")
    return name


@dataclass(frozen=True)
class PolicySet:
    """An ordered, duplicate-free collection of policy ids."""

    policies: tuple[str, ...]

    def __post_init__(self) -> None:
        policies = tuple(self.policies)
        object.__setattr__(self, "policies", policies)
        if not policies:
            raise PreferenceError("policy set must not be empty")
        for p in policies:
            _check_id(p)
        if len(set(policies)) != len(policies):
            raise PreferenceError(f"duplicate policy ids in {policies}")

    @classmethod
    def of(cls, policies: Iterable[str] | str) -> PolicySet:
        if isinstance(policies, str):
            policies = policies.replace(",", " ").split()
        return cls(tuple(policies))

    def __iter__(self) -> Iterator[str]:
        return iter(self.policies)

    def __len__(self) -> int:
        return len(self.policies)

    def __contains__(self, item: object) -> bool:
        return item in self.policies

    def index(self, policy: str) -> int:
        return self.policies.index(policy)

    def subset(self, members: Iterable[str]) -> PolicySet:
        """Members of this set that appear in ``members``, in this set's order."""
        wanted = set(members)
        unknown = wanted - set(self.policies)
        if unknown:
            raise PreferenceError(f"unknown policies {sorted(unknown)}")
        return PolicySet(tuple(p for p in self.policies if p in wanted))

    def __str__(self) -> str:
        return " ".join(self.policies)


@dataclass(frozen=True)
class WeakOrder:
    """One voter's ranking: indifference classes, best class first."""

    classes: tuple[frozenset[str], ...]
    _rank: dict = field(init=False, repr=False, compare=False, hash=False)

    def __post_init__(self) -> None:
        classes = tuple(frozenset(c) for c in self.classes)
        object.__setattr__(self, "classes", classes)
        if not classes:
            raise PreferenceError("a weak order needs at least one class")
        rank: dict[str, int] = {}
        for i, cls in enumerate(classes):
            if not cls:
                raise PreferenceError("empty indifference class")
            for p in cls:
                _check_id(p)
                if p in rank:
                    raise PreferenceError(f"policy {p!r} appears in more than one class")
                rank[p] = i
        object.__setattr__(self, "_rank", rank)

    @classmethod
    def from_ranking(cls, *classes: Iterable[str] | str) -> WeakOrder:
        """``WeakOrder.from_ranking("A", ("B", "C"))`` is A > B = C."""
        return cls(tuple(frozenset([c]) if isinstance(c, str) else frozenset(c) for c in classes))

    @classmethod
    def parse(cls, text: str) -> WeakOrder:
        """Parse ``"A > B = C"``."""
        groups = []
        for chunk in text.split(">"):
            names = [t.strip() for t in chunk.split("=")]
            if any(not n for n in names):
                raise PreferenceError(f"malformed order {text!r}")
            groups.append(frozenset(names))
            if len(groups[-1]) != len(names):
                raise PreferenceError(f"policy repeated inside a class in {text!r}")
        return cls(tuple(groups))

    @classmethod
    def from_relation(cls, statements: Iterable[tuple[str, str, str] | str]) -> WeakOrder:
        """Build a weak order from pairwise statements such as ``"x > y"``.

        Statements may use ``>``, ``<`` or ``=``.  The statements must induce
        a total preorder: every pair must be comparable (possibly through
        transitivity) and no strict preference may lie on a cycle.
        """
        geq: set[tuple[str, str]] = set()
        strict: set[tuple[str, str]] = set()
        items: set[str] = set()
        for st in statements:
            if isinstance(st, str):
                m = re.fullmatch(r"\s*(\S+)\s*([<>=])\s*(\S+)\s*", st)
                if not m:
                    raise PreferenceError(f"cannot parse relation {st!r}")
                a, op, b = m.groups()
            else:
                a, op, b = st
            _check_id(a)
            _check_id(b)
            items.update((a, b))
            if op == "<":
                a, b, op = b, a, ">"
            if op == ">":
                geq.add((a, b))
                strict.add((a, b))
            elif op == "=":
                geq.add((a, b))
                geq.add((b, a))
            else:
                raise PreferenceError(f"unknown relation {op!r}")
        for p in items:
            geq.add((p, p))
        # transitive closure (Warshall); inputs are small
        order = sorted(items)
        for k in order:
            for i in order:
                if (i, k) not in geq:
                    continue
                for j in order:
                    if (k, j) in geq:
                        geq.add((i, j))
        for a, b in strict:
            if (b, a) in geq:
                raise PreferenceError(f"cyclic preference through {a} > {b}")
        for a, b in itertools.combinations(order, 2):
            if (a, b) not in geq and (b, a) not in geq:
                raise PreferenceError(f"{a} and {b} are not compared")
        # number of items each policy weakly beats orders the classes
        score = {p: sum((p, q) in geq for q in order) for p in order}
        groups: dict[int, set[str]] = {}
        for p, s in score.items():
            groups.setdefault(s, set()).add(p)
        return cls(tuple(frozenset(groups[s]) for s in sorted(groups, reverse=True)))

    @property
    def policies(self) -> frozenset[str]:
        return frozenset(self._rank)

    def rank(self, policy: str) -> int:
        try:
            return self._rank[policy]
        except KeyError:
            raise PreferenceError(f"unknown policy {policy!r}") from None

    def compare(self, a: str, b: str) -> int:
        """+1 if a is strictly preferred to b, -1 if b to a, 0 if indifferent."""
        ra, rb = self.rank(a), self.rank(b)
        return (ra < rb) - (ra > rb)

    def prefers(self, a: str, b: str) -> bool:
        return self.rank(a) < self.rank(b)

    def relation(self) -> frozenset[tuple[str, str]]:
        """All pairs (a, b) with a weakly preferred to b."""
        return frozenset(
            (a, b) for a in self._rank for b in self._rank if self._rank[a] <= self._rank[b]
        )

    def statements(self) -> list[str]:
        """Pairwise statements (``a > b`` / ``a = b``) covering every pair."""
        out = []
        for a, b in itertools.combinations(sorted(self._rank), 2):
            c = self.compare(a, b)
            out.append(f"{a} = {b}" if c == 0 else (f"{a} > {b}" if c > 0 else f"{b} > {a}"))
        return out

    def top(self, within: Iterable[str] | None = None) -> frozenset[str]:
        if within is None:
            return self.classes[0]
        return self.restrict(within).classes[0]

    def restrict(self, policies: Iterable[str]) -> WeakOrder:
        keep = set(policies)
        unknown = keep - self._rank.keys()
        if unknown:
            raise PreferenceError(f"unknown policies {sorted(unknown)}")
        if not keep:
            raise PreferenceError("cannot restrict to an empty set")
        return WeakOrder(tuple(c & keep for c in self.classes if c & keep))

    def format(self, order: Sequence[str] | None = None) -> str:
        """Render as ``A > B = C``; members of a class follow ``order`` if given."""
        pos = {p: i for i, p in enumerate(order)} if order else {}
        key = (lambda p: (pos.get(p, len(pos)), p))
        return " > ".join(" = ".join(sorted(c, key=key)) for c in self.classes)

    def __str__(self) -> str:
        return self.format()


@dataclass(frozen=True)
class Profile:
    """One weak order per voter, all over the same policy set."""

    voters: tuple[str, ...]
    orders: tuple[WeakOrder, ...]
    policies: PolicySet | None = None

    def __post_init__(self) -> None:
        voters = tuple(self.voters)
        orders = tuple(self.orders)
        object.__setattr__(self, "voters", voters)
        object.__setattr__(self, "orders", orders)
        if len(voters) != len(orders):
            raise PreferenceError("one order per voter is required")
        if not orders:
            raise PreferenceError("a profile needs at least one voter")
        for v in voters:
            _check_id(v, "voter")
        if len(set(voters)) != len(voters):
            raise PreferenceError("duplicate voter ids")
        universe = orders[0].policies
        policies = self.policies
        if policies is None:
            policies = PolicySet(tuple(sorted(universe)))
            object.__setattr__(self, "policies", policies)
        if set(policies) != universe:
            raise PreferenceError("orders do not cover the declared policy set")
        for v, o in zip(voters, orders):
            if o.policies != universe:
                raise PreferenceError(f"order of voter {v} is not over the common policy set")

    @classmethod
    def from_orders(
        cls,
        orders: Iterable[WeakOrder | str],
        voters: Iterable[str] | None = None,
        policies: PolicySet | Iterable[str] | None = None,
    ) -> Profile:
        orders = tuple(WeakOrder.parse(o) if isinstance(o, str) else o for o in orders)
        voters = tuple(voters) if voters is not None else tuple(str(i + 1) for i in range(len(orders)))
        if policies is not None and not isinstance(policies, PolicySet):
            policies = PolicySet.of(policies)
        return cls(voters, orders, policies)

    def __len__(self) -> int:
        return len(self.orders)

    def __iter__(self) -> Iterator[WeakOrder]:
        return iter(self.orders)

    def order_of(self, voter: str) -> WeakOrder:
        return self.orders[self.voter_index(voter)]

    def voter_index(self, voter: str) -> int:
        try:
            return self.voters.index(voter)
        except ValueError:
            raise PreferenceError(f"unknown voter {voter!r}") from None

    def replace(self, voter: str, order: WeakOrder) -> Profile:
        i = self.voter_index(voter)
        return Profile(self.voters, self.orders[:i] + (order,) + self.orders[i + 1 :], self.policies)

    def format(self) -> str:
        return "; ".join(f"{v}: {o.format(self.policies.policies)}" for v, o in zip(self.voters, self.orders))


@dataclass(frozen=True)
class Situation:
    """A proposal set put to the vote together with the full profile."""

    proposal: PolicySet
    profile: Profile

    def __post_init__(self) -> None:
        if not isinstance(self.proposal, PolicySet):
            object.__setattr__(self, "proposal", PolicySet.of(self.proposal))
        missing = set(self.proposal) - set(self.profile.policies)
        if missing:
            raise PreferenceError(f"proposal mentions unknown policies {sorted(missing)}")

    @classmethod
    def full(cls, profile: Profile) -> Situation:
        return cls(profile.policies, profile)

    def restricted(self) -> Situation:
        """The same vote with every ballot projected onto the proposal."""
        return Situation(self.proposal, restrict(self.profile, self.proposal))


@dataclass(frozen=True)
class ChoiceSet:
    """Outcome of a collective choice function.

    ``valid`` is cleared when a decision rests on a single effective ballot
    (everyone else abstained) or when no ballot was cast at all.
    """

    chosen: frozenset[str]
    valid: bool = True
    cycles: tuple[frozenset[str], ...] = ()
    note: str = ""

    def __post_init__(self) -> None:
        object.__setattr__(self, "chosen", frozenset(self.chosen))

    def __contains__(self, item: object) -> bool:
        return item in self.chosen

    def __len__(self) -> int:
        return len(self.chosen)

    def format(self, order: Sequence[str] | None = None) -> str:
        pos = {p: i for i, p in enumerate(order or ())}
        return "{" + ", ".join(sorted(self.chosen, key=lambda p: (pos.get(p, len(pos)), p))) + "}"


def is_admissible(order: WeakOrder, proposal: PolicySet | Iterable[str]) -> bool:
    """True iff the order, restricted to the proposal, is not completely indifferent."""
    proposal = set(proposal)
    unknown = proposal - order.policies
    if unknown:
        raise PreferenceError(f"unknown policies {sorted(unknown)}")
    return len(order.restrict(proposal).classes) > 1


# -- order-level moves -------------------------------------------------------


def _split(order: WeakOrder, x: str, above: bool) -> WeakOrder:
    c = order.rank(x)
    cls = order.classes[c]
    if len(cls) == 1:
        return order
    pair = (frozenset([x]), cls - {x}) if above else (cls - {x}, frozenset([x]))
    return WeakOrder(order.classes[:c] + pair + order.classes[c + 1 :])


def _step(order: WeakOrder, x: str, up: bool) -> WeakOrder:
    c = order.rank(x)
    if len(order.classes[c]) > 1:
        return _split(order, x, above=up)
    t = c - 1 if up else c + 1
    if t < 0 or t >= len(order.classes):
        return order
    merged = order.classes[t] | {x}
    lo, hi = min(c, t), max(c, t)
    return WeakOrder(order.classes[:lo] + (merged,) + order.classes[hi + 1 :])


def _apply(profile: Profile, x: str, voter: str | None, move) -> Profile:
    if x not in profile.policies:
        raise PreferenceError(f"unknown policy {x!r}")
    if voter is not None:
        i = profile.voter_index(voter)
        orders = list(profile.orders)
        orders[i] = move(orders[i], x)
        return Profile(profile.voters, tuple(orders), profile.policies)
    return Profile(profile.voters, tuple(move(o, x) for o in profile.orders), profile.policies)


def promote(x: str, profile: Profile, voter: str | None = None) -> Profile:
    """Turn every indifference ``x = y`` into ``x > y``; nothing else moves."""
    return _apply(profile, x, voter, lambda o, p: _split(o, p, above=True))


def demote(x: str, profile: Profile, voter: str | None = None) -> Profile:
    """Turn every indifference ``x = y`` into ``y > x``; nothing else moves."""
    return _apply(profile, x, voter, lambda o, p: _split(o, p, above=False))


def promote_strong(x: str, profile: Profile, voter: str | None = None) -> Profile:
    """Move x one step up: out of its class if shared, else into the class above."""
    return _apply(profile, x, voter, lambda o, p: _step(o, p, up=True))


def demote_strong(x: str, profile: Profile, voter: str | None = None) -> Profile:
    return _apply(profile, x, voter, lambda o, p: _step(o, p, up=False))


def promote_to_top(x: str, profile: Profile, voter: str | None = None) -> Profile:
    """Iterate :func:`promote_strong` until x is the unique top class."""
    limit = 2 * len(profile.policies)
    for _ in range(limit):
        nxt = promote_strong(x, profile, voter)
        if nxt == profile:
            break
        profile = nxt
    return profile


def demote_to_bottom(x: str, profile: Profile, voter: str | None = None) -> Profile:
    limit = 2 * len(profile.policies)
    for _ in range(limit):
        nxt = demote_strong(x, profile, voter)
        if nxt == profile:
            break
        profile = nxt
    return profile


def restrict(profile: Profile, proposal: PolicySet | Iterable[str]) -> Profile:
    """Project every ballot onto ``proposal``, keeping relative relations."""
    if not isinstance(proposal, PolicySet):
        proposal = PolicySet.of(proposal if isinstance(proposal, str) else list(proposal))
    ordered = profile.policies.subset(proposal)
    return Profile(profile.voters, tuple(o.restrict(ordered) for o in profile.orders), ordered)
