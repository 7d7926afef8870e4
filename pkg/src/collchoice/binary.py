"""Two-policy choice functions over ternary ballots.

A ballot is +1 (x preferred to y), -1 (y preferred to x) or 0 (indifferent /
abstaining).  A profile is a tuple of ballots.  Any callable mapping a
profile to an outcome in {-1, 0, 1} can be audited with the ``check_*``
functions, which search the whole space of 3**n profiles.
"""

from __future__ import annotations

import itertools
from dataclasses import dataclass
from fractions import Fraction
from functools import lru_cache
from typing import Callable, Sequence

Ballots = tuple[int, ...]
TernaryFunction = Callable[[Ballots], int]

SIMPLE_MAJORITY = "simple-majority"
NON_MINORITY = "non-minority"
SPECIFIED_MAJORITY = "specified-majority"
ABSOLUTE_MAJORITY = "absolute-majority"
ABSOLUTE_SPECIAL_MAJORITY = "absolute-special-majority"
PARETO = "pareto"

KINDS = (
    SIMPLE_MAJORITY,
    NON_MINORITY,
    SPECIFIED_MAJORITY,
    ABSOLUTE_MAJORITY,
    ABSOLUTE_SPECIAL_MAJORITY,
    PARETO,
)
ALPHA_KINDS = frozenset({SPECIFIED_MAJORITY, ABSOLUTE_MAJORITY, ABSOLUTE_SPECIAL_MAJORITY})
ALIASES = {"weighted-majority": SIMPLE_MAJORITY, "majority": SIMPLE_MAJORITY, "unanimous": PARETO}

MAX_EXHAUSTIVE_N = 8


def _fraction(value) -> Fraction:
    if isinstance(value, Fraction):
        return value
    if isinstance(value, float):
        raise TypeError("alpha must be exact: pass a Fraction, int or 'p/q' string")
    return Fraction(value)


@dataclass(frozen=True)
class BinaryRule:
    kind: str
    alpha: Fraction | None = None

    def __post_init__(self) -> None:
        kind = ALIASES.get(self.kind, self.kind)
        if kind not in KINDS:
            raise ValueError(f"unknown rule {self.kind!r}; expected one of {', '.join(KINDS)}")
        object.__setattr__(self, "kind", kind)
        if kind in ALPHA_KINDS:
            if self.alpha is None:
                raise ValueError(f"rule {kind} needs alpha")
            alpha = _fraction(self.alpha)
            if not 0 < alpha < 1:
                raise ValueError("alpha must lie strictly between 0 and 1")
            object.__setattr__(self, "alpha", alpha)
        elif self.alpha is not None:
            raise ValueError(f"rule {kind} takes no alpha")

    def __call__(self, ballots: Sequence[int]) -> int:
        return tally(self, ballots)

    def __str__(self) -> str:
        return self.kind if self.alpha is None else f"{self.kind}(alpha={self.alpha})"


def check_ballots(ballots: Sequence[int]) -> Ballots:
    ballots = tuple(ballots)
    if not ballots:
        raise ValueError("empty ternary profile")
    for b in ballots:
        if b not in (-1, 0, 1) or isinstance(b, bool):
            raise ValueError(f"ballot {b!r} is not one of -1, 0, +1")
    return ballots


def sign(v) -> int:
    return (v > 0) - (v < 0)


def decide(rule: BinaryRule, w_for: int, w_against: int, w_total: int) -> int:
    """Outcome from the (weighted) mass voting for, against and in total.

    Comparisons against ``alpha * total`` are done on cross-multiplied
    integers so boundary cases are exact.
    """
    kind = rule.kind
    if kind == SIMPLE_MAJORITY:
        return sign(w_for - w_against)
    if kind == NON_MINORITY:
        if 2 * w_for > w_total:
            return 1
        if 2 * w_against > w_total:
            return -1
        return 0
    p, q = (rule.alpha.numerator, rule.alpha.denominator) if rule.alpha is not None else (0, 1)
    if kind == SPECIFIED_MAJORITY:
        if w_for * q > p * w_total:
            return 1
        if w_against * q > p * w_total:
            return -1
        return 0
    if kind == ABSOLUTE_MAJORITY:
        return 1 if w_for * q > p * w_total else -1
    if kind == ABSOLUTE_SPECIAL_MAJORITY:
        # abstentions side with the motion; only dissent counts against it
        return -1 if (w_total - w_against) * q <= p * w_total else 1
    if kind == PARETO:
        if w_against == 0 and w_for > 0:
            return 1
        if w_for == 0 and w_against > 0:
            return -1
        return 0
    raise AssertionError(kind)


def tally(rule: BinaryRule, ballots: Sequence[int]) -> int:
    ballots = check_ballots(ballots)
    return decide(rule, ballots.count(1), ballots.count(-1), len(ballots))


def outcome_label(rule: BinaryRule, ballots: Sequence[int]) -> str:
    """Describe an outcome; separates Paretian indifference from an unresolved split."""
    ballots = check_ballots(ballots)
    out = tally(rule, ballots)
    if out == 1:
        return "for"
    if out == -1:
        return "against"
    if rule.kind == PARETO:
        return "indifference" if all(b == 0 for b in ballots) else "unresolved"
    return "tie"


def paretian(f: TernaryFunction) -> TernaryFunction:
    """Add the Paretian requirement to a rule: no decision against any dissent."""

    def g(ballots: Sequence[int]) -> int:
        out = f(ballots)
        if out != 0 and -out in ballots:
            return 0
        return out

    return g


def simplex_point(ballots: Sequence[int]) -> tuple[Fraction, Fraction]:
    """Share of +1 ballots and share of -1 ballots."""
    ballots = check_ballots(ballots)
    n = len(ballots)
    return Fraction(ballots.count(1), n), Fraction(ballots.count(-1), n)


# -- exhaustive condition checks --------------------------------------------


@lru_cache(maxsize=None)
def all_profiles(n: int) -> tuple[Ballots, ...]:
    """Every ternary profile of length n in lexicographic order (-1 < 0 < 1)."""
    if not 1 <= n <= MAX_EXHAUSTIVE_N:
        raise ValueError(f"exhaustive search is limited to 1..{MAX_EXHAUSTIVE_N} voters")
    return tuple(itertools.product((-1, 0, 1), repeat=n))


def negate(ballots: Ballots) -> Ballots:
    return tuple(-b for b in ballots)


@dataclass(frozen=True)
class PropertyCheck:
    """Result of an exhaustive property check; ``witness`` is the least counterexample."""

    name: str
    holds: bool
    n: int
    witness: tuple | None = None

    def __bool__(self) -> bool:
        return self.holds


def _first(name: str, n: int, bad) -> PropertyCheck:
    for w in bad:
        return PropertyCheck(name, False, n, w)
    return PropertyCheck(name, True, n)


def check_strongly_neutral(f: TernaryFunction, n: int) -> PropertyCheck:
    bad = (d for d in all_profiles(n) if f(negate(d)) != -f(d))
    return _first("strongly-neutral", n, bad)


def check_neutral(f: TernaryFunction, n: int) -> PropertyCheck:
    bad = (
        d
        for d in all_profiles(n)
        if d.count(1) != d.count(-1) and f(negate(d)) != -f(d)
    )
    return _first("neutral", n, bad)


def _dominated_pairs(n: int):
    """Pairs (D, D') with D >= D' componentwise, ordered by D then D'."""
    for d in all_profiles(n):
        ranges = [range(-1, b + 1) for b in d]
        for lower in itertools.product(*ranges):
            yield d, lower


def check_monotonic(f: TernaryFunction, n: int) -> PropertyCheck:
    bad = ((d, e) for d, e in _dominated_pairs(n) if f(d) < f(e))
    return _first("monotonic", n, bad)


def check_strongly_monotonic(f: TernaryFunction, n: int) -> PropertyCheck:
    def violations():
        for d, e in _dominated_pairs(n):
            fd, fe = f(d), f(e)
            if fd < fe or (d != e and fe == 0 and fd != 1):
                yield d, e

    return _first("strongly-monotonic", n, violations())


def check_egalitarian(f: TernaryFunction, n: int) -> PropertyCheck:
    bad = (d for d in all_profiles(n) if f(d) != f(tuple(sorted(d))))
    return _first("egalitarian", n, bad)


def check_strongly_decisive(f: TernaryFunction, n: int) -> PropertyCheck:
    return _first("strongly-decisive", n, (d for d in all_profiles(n) if f(d) == 0))


def check_unanimity_unambiguous(f: TernaryFunction, n: int) -> PropertyCheck:
    bad = [d for d in ((-1,) * n, (1,) * n) if f(d) != d[0]]
    return _first("unanimity-unambiguous", n, iter(bad))


def check_pro_biased(f: TernaryFunction, n: int) -> PropertyCheck:
    def violations():
        for d in all_profiles(n):
            for i, b in enumerate(d):
                if b == 0:
                    up = d[:i] + (1,) + d[i + 1 :]
                    if f(up) != f(d):
                        yield d, up

    return _first("pro-biased", n, violations())


CONDITIONS: dict[str, Callable[[TernaryFunction, int], PropertyCheck]] = {
    "strongly-neutral": check_strongly_neutral,
    "neutral": check_neutral,
    "strongly-monotonic": check_strongly_monotonic,
    "monotonic": check_monotonic,
    "egalitarian": check_egalitarian,
    "strongly-decisive": check_strongly_decisive,
    "unanimity-unambiguous": check_unanimity_unambiguous,
    "pro-biased": check_pro_biased,
}

# Properties each rule is built to have; used to decide CLI exit status.
EXPECTED = {
    SIMPLE_MAJORITY: ("strongly-neutral", "strongly-monotonic", "egalitarian", "neutral", "monotonic", "unanimity-unambiguous"),
    NON_MINORITY: ("strongly-neutral", "monotonic", "egalitarian", "neutral", "unanimity-unambiguous"),
    SPECIFIED_MAJORITY: ("strongly-neutral", "monotonic", "egalitarian", "unanimity-unambiguous"),
    ABSOLUTE_MAJORITY: ("strongly-decisive", "monotonic", "egalitarian", "unanimity-unambiguous"),
    ABSOLUTE_SPECIAL_MAJORITY: ("strongly-decisive", "monotonic", "egalitarian", "unanimity-unambiguous", "pro-biased"),
    PARETO: ("strongly-neutral", "monotonic", "egalitarian", "unanimity-unambiguous"),
}


def audit(f: TernaryFunction, n: int, conditions: Sequence[str] | None = None) -> list[PropertyCheck]:
    names = list(CONDITIONS) if conditions is None else list(conditions)
    unknown = [c for c in names if c not in CONDITIONS]
    if unknown:
        raise ValueError(f"unknown conditions {unknown}")
    return [CONDITIONS[c](f, n) for c in names]


# -- May's theorem by brute force -------------------------------------------

MAY_CONDITIONS = ("strongly-neutral", "strongly-monotonic", "egalitarian")


@dataclass(frozen=True)
class MayReport:
    n: int
    conditions: tuple[str, ...]
    functions_checked: int
    survivors: tuple[tuple[int, ...], ...]
    profiles: tuple[Ballots, ...]

    @property
    def unique(self) -> bool:
        return len(self.survivors) == 1

    @property
    def equals_sign(self) -> bool:
        rule = tuple(sign(sum(d)) for d in self.profiles)
        return self.unique and self.survivors[0] == rule


def may_uniqueness(n: int, conditions: Sequence[str] = MAY_CONDITIONS) -> MayReport:
    """Enumerate every function {-1,0,1}^n -> {-1,0,1} and keep those meeting ``conditions``.

    Only n <= 2 is allowed: there are 3**(3**n) functions.
    """
    if n > 2 or n < 1:
        raise ValueError("the function space is only searched for n = 1 or 2")
    conditions = tuple(conditions)
    allowed = {"strongly-neutral", "strongly-monotonic", "monotonic", "egalitarian", "neutral"}
    if not set(conditions) <= allowed:
        raise ValueError(f"conditions must be drawn from {sorted(allowed)}")
    profiles = all_profiles(n)
    index = {d: i for i, d in enumerate(profiles)}
    neg = [index[negate(d)] for d in profiles]
    srt = [index[tuple(sorted(d))] for d in profiles]
    ge = [(index[d], index[e]) for d, e in _dominated_pairs(n)]
    gt = [(i, j) for i, j in ge if i != j]
    tie = [d.count(1) == d.count(-1) for d in profiles]

    def ok(fn: tuple[int, ...]) -> bool:
        if "strongly-neutral" in conditions and any(fn[neg[i]] != -fn[i] for i in range(len(fn))):
            return False
        if "neutral" in conditions and any(
            not tie[i] and fn[neg[i]] != -fn[i] for i in range(len(fn))
        ):
            return False
        if "egalitarian" in conditions and any(fn[srt[i]] != fn[i] for i in range(len(fn))):
            return False
        if ("monotonic" in conditions or "strongly-monotonic" in conditions) and any(
            fn[i] < fn[j] for i, j in ge
        ):
            return False
        if "strongly-monotonic" in conditions and any(fn[j] == 0 and fn[i] != 1 for i, j in gt):
            return False
        return True

    checked = 0
    survivors = []
    for fn in itertools.product((-1, 0, 1), repeat=len(profiles)):
        checked += 1
        if ok(fn):
            survivors.append(fn)
    return MayReport(n, conditions, checked, tuple(survivors), profiles)
