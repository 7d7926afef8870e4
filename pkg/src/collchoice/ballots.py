"""Readers for the three text formats: ranked ballots, ternary ballots and
council trees.  Errors carry the line and column of the offending token."""

from __future__ import annotations

import re
from dataclasses import dataclass
from pathlib import Path

from .prefs import PolicySet, PreferenceError, Profile, Situation, WeakOrder
from .weighted import Council, CouncilTree, Leaf, WeightVector


class InputError(ValueError):
    def __init__(self, message: str, source: str = "<input>", line: int | None = None, column: int | None = None):
        self.source, self.line, self.column = source, line, column
        where = source
        if line is not None:
            where += f":{line}"
            if column is not None:
                where += f":{column}"
        super().__init__(f"{where}: {message}")


def _strip(raw: str) -> str:
    return raw.split("#", 1)[0].rstrip()


def _col(raw: str, token: str, start: int = 0) -> int:
    i = raw.find(token, start)
    return (i if i >= 0 else start) + 1


_VOTER_RE = re.compile(r"^\s*voter\s+(\S+?)\s*:(.*)$")


def parse_ballots(text: str, source: str = "<input>") -> Situation:
    """``policies: A B C`` followed by ``voter <id>: A > B = C`` lines."""
    policies: PolicySet | None = None
    voters: list[str] = []
    orders: list[WeakOrder] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        if policies is None:
            m = re.match(r"^\s*policies\s*:(.*)$", line)
            if not m:
                raise InputError("expected 'policies: ...' before any ballot", source, lineno, 1)
            try:
                policies = PolicySet.of(m.group(1).split())
            except PreferenceError as exc:
                raise InputError(str(exc), source, lineno, _col(raw, ":") + 1) from None
            continue
        m = _VOTER_RE.match(line)
        if not m:
            raise InputError("expected 'voter <id>: <order>'", source, lineno, len(line) - len(line.lstrip()) + 1)
        voter, body = m.group(1), m.group(2)
        if voter in seen:
            raise InputError(f"duplicate voter {voter!r} (first on line {seen[voter]})", source, lineno, _col(raw, voter))
        seen[voter] = lineno
        orders.append(_parse_order(body, raw, m.start(2), policies, source, lineno))
        voters.append(voter)
    if policies is None:
        raise InputError("missing 'policies:' line", source)
    if not orders:
        raise InputError("no ballots", source)
    try:
        profile = Profile(tuple(voters), tuple(orders), policies)
    except PreferenceError as exc:
        raise InputError(str(exc), source) from None
    return Situation(policies, profile)


def _parse_order(body, raw, offset, policies, source, lineno) -> WeakOrder:
    if not body.strip():
        raise InputError("empty order", source, lineno, offset + 1)
    classes = []
    mentioned: set[str] = set()
    pos = offset
    for chunk in body.split(">"):
        group = []
        for name in chunk.split("="):
            token = name.strip()
            col = _col(raw, token, pos) if token else pos + 1
            if not token:
                raise InputError("missing policy id", source, lineno, col)
            if token not in policies:
                raise InputError(f"unknown policy {token!r}", source, lineno, col)
            if token in mentioned:
                raise InputError(f"policy {token!r} listed twice", source, lineno, col)
            mentioned.add(token)
            group.append(token)
            pos = col - 1 + len(token)
        classes.append(frozenset(group))
    missing = [p for p in policies if p not in mentioned]
    if missing:
        raise InputError(f"missing policies {' '.join(missing)}", source, lineno, len(raw.rstrip()) + 1)
    return WeakOrder(tuple(classes))


def format_ballots(situation: Situation) -> str:
    lines = [f"policies: {situation.profile.policies}"]
    for v, o in zip(situation.profile.voters, situation.profile.orders):
        lines.append(f"voter {v}: {o.format(situation.profile.policies.policies)}")
    return "\n".join(lines) + "\n"


@dataclass(frozen=True)
class TernaryFile:
    voters: tuple[str, ...]
    ballots: tuple[int, ...]


def parse_ternary(text: str, source: str = "<input>") -> TernaryFile:
    """``voter <id>: +1|0|-1`` lines."""
    voters: list[str] = []
    ballots: list[int] = []
    seen: dict[str, int] = {}
    for lineno, raw in enumerate(text.splitlines(), 1):
        line = _strip(raw)
        if not line.strip():
            continue
        m = _VOTER_RE.match(line)
        if not m:
            raise InputError("expected 'voter <id>: +1|0|-1'", source, lineno, 1)
        voter, value = m.group(1), m.group(2).strip()
        if voter in seen:
            raise InputError(f"duplicate voter {voter!r} (first on line {seen[voter]})", source, lineno, _col(raw, voter))
        if value not in ("+1", "1", "0", "-1"):
            raise InputError(f"ballot must be +1, 0 or -1, got {value!r}", source, lineno, _col(raw, value, raw.index(":")))
        seen[voter] = lineno
        voters.append(voter)
        ballots.append(int(value))
    if not ballots:
        raise InputError("no ballots", source)
    return TernaryFile(tuple(voters), tuple(ballots))


_TOKEN_RE = re.compile(r"\s*(?:(#[^\n]*)|([(){}])|([^\s(){}#]+))")


def _tokens(text: str, source: str):
    out = []
    for lineno, raw in enumerate(text.splitlines(), 1):
        pos = 0
        while pos < len(raw):
            m = _TOKEN_RE.match(raw, pos)
            if not m or m.end() == pos:
                break
            if m.group(1):
                break
            tok = m.group(2) or m.group(3)
            if tok:
                out.append((tok, lineno, m.start(2) if m.group(2) else m.start(3)))
            pos = m.end()
    return out


def parse_council(text: str, source: str = "<input>") -> CouncilTree:
    """``council (w1 w2 ...) { child child ... }`` with leaves ``voter <index>``
    (1-based)."""
    toks = _tokens(text, source)
    i = 0

    def err(msg, k=None):
        k = i if k is None else k
        if k < len(toks):
            return InputError(msg, source, toks[k][1], toks[k][2] + 1)
        return InputError(msg + " at end of input", source)

    def expect(tok):
        nonlocal i
        if i >= len(toks) or toks[i][0] != tok:
            raise err(f"expected {tok!r}")
        i += 1

    def node() -> CouncilTree:
        nonlocal i
        if i >= len(toks):
            raise err("expected 'council' or 'voter'")
        word = toks[i][0]
        if word == "voter":
            i += 1
            if i >= len(toks) or not toks[i][0].isdigit() or int(toks[i][0]) < 1:
                raise err("expected a 1-based voter index")
            leaf = Leaf(int(toks[i][0]) - 1)
            i += 1
            return leaf
        if word == "council":
            start = i
            i += 1
            expect("(")
            weights = []
            while i < len(toks) and toks[i][0] != ")":
                if not toks[i][0].isdigit():
                    raise err("weights must be non-negative integers")
                weights.append(int(toks[i][0]))
                i += 1
            expect(")")
            expect("{")
            children = []
            while i < len(toks) and toks[i][0] != "}":
                children.append(node())
            expect("}")
            try:
                return Council(tuple(children), WeightVector(tuple(weights)))
            except ValueError as exc:
                raise err(str(exc), start) from None
        raise err(f"unexpected token {word!r}")

    tree = node()
    if i != len(toks):
        raise err("trailing input after the root council")
    return tree


def read_text(path: str | Path) -> tuple[str, bytes]:
    data = Path(path).read_bytes()
    try:
        return data.decode("utf-8"), data
    except UnicodeDecodeError as exc:
        raise InputError(f"not UTF-8: {exc}", str(path)) from None
