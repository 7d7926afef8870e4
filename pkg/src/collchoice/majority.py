"""Pairwise majority matrix and the strict-majority digraph."""

from __future__ import annotations

from dataclasses import dataclass
from fractions import Fraction
from typing import Iterator, Sequence

from .prefs import PolicySet, Profile


@dataclass(frozen=True)
class MajorityMatrix:
    """m(a, b): share of voters preferring a to b among those not indifferent.

    ``wins[(a, b)]`` keeps the raw count so callers can recover ties and the
    number of indifferent voters.
    """

    policies: PolicySet
    n_voters: int
    wins: dict[tuple[str, str], int]

    @classmethod
    def from_profile(cls, profile: Profile, policies: PolicySet | None = None) -> MajorityMatrix:
        policies = profile.policies if policies is None else profile.policies.subset(policies)
        wins = {}
        for a in policies:
            for b in policies:
                if a != b:
                    wins[(a, b)] = sum(1 for o in profile.orders if o.prefers(a, b))
        return cls(policies, len(profile), wins)

    def count(self, a: str, b: str) -> int:
        return self.wins[(a, b)]

    def indifferent(self, a: str, b: str) -> int:
        return self.n_voters - self.wins[(a, b)] - self.wins[(b, a)]

    def margin(self, a: str, b: str) -> Fraction:
        expressed = self.wins[(a, b)] + self.wins[(b, a)]
        if expressed == 0:
            return Fraction(0)
        return Fraction(self.wins[(a, b)], expressed)

    def beats(self, a: str, b: str) -> bool:
        return self.wins[(a, b)] > self.wins[(b, a)]

    def edges(self) -> list[tuple[str, str]]:
        return [(a, b) for a in self.policies for b in self.policies if a != b and self.beats(a, b)]

    def successors(self, a: str) -> list[str]:
        return [b for b in self.policies if b != a and self.beats(a, b)]

    def rows(self) -> list[list[str]]:
        """Margins as strings, row policy against column policy."""
        out = []
        for a in self.policies:
            out.append(["-" if a == b else str(self.margin(a, b)) for b in self.policies])
        return out


def strongly_connected_components(matrix: MajorityMatrix) -> list[frozenset[str]]:
    """Tarjan's algorithm on the strict-majority digraph (iterative)."""
    index: dict[str, int] = {}
    low: dict[str, int] = {}
    on_stack: set[str] = set()
    stack: list[str] = []
    comps: list[frozenset[str]] = []
    counter = 0
    for root in matrix.policies:
        if root in index:
            continue
        work = [(root, iter(matrix.successors(root)))]
        index[root] = low[root] = counter
        counter += 1
        stack.append(root)
        on_stack.add(root)
        while work:
            v, it = work[-1]
            advanced = False
            for w in it:
                if w not in index:
                    index[w] = low[w] = counter
                    counter += 1
                    stack.append(w)
                    on_stack.add(w)
                    work.append((w, iter(matrix.successors(w))))
                    advanced = True
                    break
                if w in on_stack:
                    low[v] = min(low[v], index[w])
            if advanced:
                continue
            work.pop()
            if work:
                u = work[-1][0]
                low[u] = min(low[u], low[v])
            if low[v] == index[v]:
                comp = set()
                while True:
                    w = stack.pop()
                    on_stack.discard(w)
                    comp.add(w)
                    if w == v:
                        break
                comps.append(frozenset(comp))
    return comps


def simple_cycles(matrix: MajorityMatrix, min_length: int = 3) -> Iterator[tuple[str, ...]]:
    """Directed simple cycles, each reported once starting from its earliest policy."""
    order = {p: i for i, p in enumerate(matrix.policies)}

    def walk(start: str, path: list[str], seen: set[str]) -> Iterator[tuple[str, ...]]:
        for w in matrix.successors(path[-1]):
            if w == start and len(path) >= min_length:
                yield tuple(path)
            elif w not in seen and order[w] > order[start]:
                seen.add(w)
                path.append(w)
                yield from walk(start, path, seen)
                path.pop()
                seen.discard(w)

    for p in matrix.policies:
        yield from walk(p, [p], {p})


def cycle_margins(matrix: MajorityMatrix, cycle: Sequence[str]) -> tuple[Fraction, ...]:
    return tuple(matrix.margin(cycle[i], cycle[(i + 1) % len(cycle)]) for i in range(len(cycle)))
