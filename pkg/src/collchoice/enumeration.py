"""Counting and listing weak orders via integer partitions.

A weak order of n policies is an ordered partition of the policies into
indifference classes.  Counting goes partition by partition: the number of
distinct arrangements of the block sizes times the number of ways to deal
the policies into blocks of those sizes.
"""

from __future__ import annotations

import itertools
from collections import Counter
from dataclasses import dataclass
from math import factorial, prod
from typing import Iterable, Iterator

from .prefs import PolicySet, PreferenceError, WeakOrder

MAX_COUNT_N = 12
MAX_ENUM_N = 6


@dataclass(frozen=True)
class PartitionTerm:
    partition: tuple[int, ...]
    n_policies: int
    n_partitions: int

    @property
    def total(self) -> int:
        return self.n_policies * self.n_partitions


def _check_n(n: int, cap: int) -> None:
    if not isinstance(n, int) or isinstance(n, bool) or not 1 <= n <= cap:
        raise ValueError(f"n must be an integer in 1..{cap}, got {n!r}")


def integer_partitions(n: int) -> list[tuple[int, ...]]:
    """Partitions of n as non-increasing tuples, largest first part first."""
    _check_n(n, MAX_COUNT_N)

    def gen(rest: int, largest: int) -> Iterator[tuple[int, ...]]:
        if rest == 0:
            yield ()
            return
        for part in range(min(rest, largest), 0, -1):
            for tail in gen(rest - part, part):
                yield (part,) + tail

    return list(gen(n, n))


def partition_term(partition: tuple[int, ...]) -> PartitionTerm:
    n = sum(partition)
    repeats = Counter(partition).values()
    # distinct left-to-right arrangements of the block sizes
    n_partitions = factorial(len(partition)) // prod(factorial(m) for m in repeats)
    # ways to deal n labelled policies into an arranged sequence of blocks
    n_policies = factorial(n) // prod(factorial(s) for s in partition)
    return PartitionTerm(tuple(partition), n_policies, n_partitions)


def partition_terms(n: int) -> list[PartitionTerm]:
    return [partition_term(p) for p in integer_partitions(n)]


def count_weak_orders(n: int) -> int:
    """Number of weak orders (ties allowed) over n policies."""
    return sum(t.total for t in partition_terms(n))


def enumerate_weak_orders(policies: PolicySet | Iterable[str]) -> Iterator[WeakOrder]:
    """Yield every weak order over ``policies`` exactly once.

    Orders come out grouped by the first class, which is picked among the
    remaining policies in increasing size, then recursively.
    """
    if not isinstance(policies, PolicySet):
        policies = PolicySet.of(list(policies))
    if len(policies) > MAX_ENUM_N:
        raise PreferenceError(f"enumeration is limited to {MAX_ENUM_N} policies")
    items = policies.policies

    def gen(rest: tuple[str, ...]) -> Iterator[tuple[frozenset[str], ...]]:
        if not rest:
            yield ()
            return
        for size in range(1, len(rest) + 1):
            for first in itertools.combinations(rest, size):
                remaining = tuple(p for p in rest if p not in first)
                for tail in gen(remaining):
                    yield (frozenset(first),) + tail

    for classes in gen(items):
        yield WeakOrder(classes)
