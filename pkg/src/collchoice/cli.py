"""Command-line entry point.

Every command prints a short header echoing its configuration (and the
SHA-256 of any input file) so that a report can be replayed.  Exit status:
0 on success, 1 on bad input, 2 when a check that is expected to pass fails.
"""

from __future__ import annotations

import argparse
import csv
import hashlib
import io
import sys
from dataclasses import dataclass, field
from fractions import Fraction
from typing import Sequence

from . import __version__
from .ballots import InputError, parse_ballots, parse_council, parse_ternary, read_text
from .binary import ALIASES, EXPECTED, KINDS, BinaryRule, audit as audit_binary, outcome_label, simplex_point, tally as tally_binary
from .enumeration import count_weak_orders, enumerate_weak_orders
from .harness import (
    CONDITIONS as HARNESS_CONDITIONS,
    MULTI_POLICY_FUNCTIONS,
    Bounds,
    binary_choice,
    builtin_functions,
    impossibility_report,
    run_checks,
)
from .maxmin import audit_cycles, elimination_hint, independent_maxmin_mc
from .multi import agenda, borda, condorcet, detect_cycles, pairwise_matrix, plurality_tally
from .prefs import PolicySet, PreferenceError, Situation
from .scenarios import borda_without_x, cycle_profile
from .weighted import (
    WeightVector,
    check_weight_bounds,
    essential_voters,
    evaluate_tree,
    find_dictator,
    find_vetoer,
    tree_leaves,
    weighted_tally,
)

DEFAULT_SEED = 20240601
EXIT_OK, EXIT_INPUT, EXIT_AUDIT = 0, 1, 2
CSV_COMMANDS = {"tally", "pairwise"}


class UsageError(ValueError):
    pass


@dataclass
class Report:
    header: list[tuple[str, str]] = field(default_factory=list)
    lines: list[str] = field(default_factory=list)
    rows: list[list[str]] | None = None
    exit_code: int = EXIT_OK

    def echo(self, key: str, value) -> None:
        self.header.append((key, str(value)))

    def add(self, line: str = "") -> None:
        self.lines.append(line)

    def render(self, fmt: str) -> str:
        head = "".join(f"# {k}: {v}\n" for k, v in self.header)
        if fmt == "csv":
            buf = io.StringIO()
            csv.writer(buf, lineterminator="\n").writerows(self.rows or [])
            return head + buf.getvalue()
        return head + "".join(line + "\n" for line in self.lines)


def _num(v) -> str:
    if isinstance(v, Fraction) and v.denominator == 1:
        return str(v.numerator)
    return str(v)


def _load(report: Report, path: str) -> str:
    text, data = read_text(path)
    report.echo("input", f"{path} sha256={hashlib.sha256(data).hexdigest()}")
    return text


def _situation(report: Report, args) -> Situation:
    s = parse_ballots(_load(report, args.ballots), args.ballots)
    if getattr(args, "proposal", None):
        s = Situation(s.profile.policies.subset(_split(args.proposal)), s.profile)
        report.echo("proposal", s.proposal)
    if getattr(args, "restrict", False):
        s = s.restricted()
        report.echo("ballots", "restricted to the proposal")
    return s


def _split(text: str) -> list[str]:
    return [t for t in text.replace(",", " ").split() if t]


def _rule(kind: str, alpha: str | None) -> BinaryRule:
    try:
        return BinaryRule(kind, Fraction(alpha) if alpha is not None else None)
    except (ValueError, ZeroDivisionError) as exc:
        raise UsageError(str(exc)) from None


def _choice_line(choice, order) -> str:
    text = f"choice: {choice.format(order)}"
    if not choice.valid:
        text += f"  [validity flag: {choice.note or 'anomalous quorum'}]"
    return text


# -- commands ------------------------------------------------------------------


def cmd_tally(args, report: Report) -> None:
    s = _situation(report, args)
    order = s.proposal.policies
    report.echo("rule", args.rule)
    if args.rule == "plurality":
        report.echo("abstain", "allowed" if not args.no_abstain else "rejected")
        t = plurality_tally(s, allow_abstain=not args.no_abstain)
        for p in order:
            report.add(f"{p}: {t.votes[p]}")
        if t.abstained:
            report.add(f"abstained: {' '.join(t.abstained)}")
        report.add(_choice_line(t.choice, order))
        report.rows = [["policy", "votes"]] + [[p, str(t.votes[p])] for p in order]
    elif args.rule == "borda":
        t = borda(s)
        for p in order:
            report.add(f"{p}: {_num(t.scores[p])}")
        report.add("ranking: " + " > ".join(" = ".join(p for p in order if p in cls) for cls in t.ranking))
        report.add(f"choice: {{{', '.join(p for p in order if p in t.ranking[0])}}}")
        report.rows = [["policy", "score"]] + [[p, _num(t.scores[p])] for p in order]
    else:
        m = pairwise_matrix(s)
        c = condorcet(s)
        _matrix_lines(report, m)
        if c.chosen:
            report.add(f"Condorcet winner: {next(iter(c.chosen))}")
        else:
            cyc = ", ".join("{" + ",".join(p for p in order if p in comp) + "}" for comp in c.cycles)
            report.add("no Condorcet winner" + (f"; cycle {cyc}" if cyc else ""))
        report.add(_choice_line(c, order))


def _matrix_lines(report: Report, m) -> None:
    order = m.policies.policies
    width = max(len(p) for p in order)
    cells = m.rows()
    cw = max(width, max(len(x) for r in cells for x in r))
    report.add(" " * (width + 1) + " ".join(p.rjust(cw) for p in order))
    for p, r in zip(order, cells):
        report.add(p.ljust(width) + " " + " ".join(x.rjust(cw) for x in r))
    report.rows = [["policy"] + list(order)] + [[p] + r for p, r in zip(order, cells)]


def cmd_tally2(args, report: Report) -> None:
    rule = _rule(args.rule, args.alpha)
    tf = parse_ternary(_load(report, args.ballots), args.ballots)
    report.echo("rule", rule)
    if args.weights:
        rho = WeightVector.parse(args.weights)
        report.echo("weights", ",".join(map(str, rho)))
        out = weighted_tally(rule, rho, tf.ballots)
    else:
        out = tally_binary(rule, tf.ballots)
        report.add(f"label: {outcome_label(rule, tf.ballots)}")
    p, q = simplex_point(tf.ballots)
    report.add(f"ballots: {len(tf.ballots)} (+1: {tf.ballots.count(1)}, 0: {tf.ballots.count(0)}, -1: {tf.ballots.count(-1)})")
    report.add(f"simplex point: ({p}, {q})")
    report.add(f"outcome: {out:+d}" if out else "outcome: 0")


def cmd_audit2(args, report: Report) -> None:
    rule = _rule(args.rule, args.alpha)
    conditions = None if args.conditions == "all" else _split(args.conditions)
    report.echo("rule", rule)
    report.echo("voters", args.voters)
    expected = set(EXPECTED[rule.kind])
    for r in audit_binary(rule, args.voters, conditions):
        status = "pass" if r.holds else "FAIL"
        tag = " (expected)" if r.name in expected else ""
        line = f"{r.name:24} {status}{tag}"
        if r.witness is not None:
            line += f"  witness {r.witness}"
        report.add(line)
        if not r.holds and r.name in expected:
            report.exit_code = EXIT_AUDIT


def _harness_function(args):
    if args.rule in MULTI_POLICY_FUNCTIONS or args.rule == "biased-random":
        return builtin_functions(args.seed)[args.rule], False
    rule = _rule(args.rule, args.alpha)
    weights = tuple(WeightVector.parse(args.weights)) if args.weights else None
    return binary_choice(rule, weights), rule.kind == "simple-majority" and weights is None


def cmd_audit(args, report: Report) -> None:
    f, possibility = _harness_function(args)
    if f.proposal_sizes == (2,) and args.policies != 2:
        raise UsageError(f"{f.name} decides between exactly 2 policies; use --policies 2")
    conditions = None if args.conditions == "all" else _split(args.conditions)
    bounds = Bounds(args.policies, args.voters)
    report.echo("function", f.name)
    report.echo("bounds", bounds)
    report.echo("seed", args.seed)
    expected = set(_split(args.expect)) if args.expect else (set(HARNESS_CONDITIONS) if possibility else set())
    for v in run_checks(f, bounds, conditions):
        _verdict_lines(report, v, v.condition in expected)
        if not v.passed and v.condition in expected:
            report.exit_code = EXIT_AUDIT


def _verdict_lines(report: Report, v, expected: bool = False) -> None:
    tag = " (expected)" if expected else ""
    extra = f"  [{v.note}]" if v.note else ""
    report.add(f"{v.condition:22} {'pass' if v.passed else 'FAIL'}{tag}  cases={v.cases}{extra}")
    if v.subtests:
        report.add("    " + ", ".join(f"{n}={'pass' if ok else 'FAIL'}" for n, ok in v.subtests))
    if v.witness:
        w = v.witness
        report.add(f"    witness [{w.test}] proposal {{{', '.join(w.situation.proposal)}}}; {w.situation.profile.format()}")
        report.add(f"    {w.detail}")


def cmd_impossibility(args, report: Report) -> None:
    bounds = Bounds(args.policies, args.voters)
    report.echo("bounds", bounds)
    report.echo("seed", args.seed)
    seeds = [Situation.full(cycle_profile()), borda_without_x()] if not args.no_seeds else []
    report.echo("seed situations", len(seeds))
    rep = impossibility_report(bounds, seeds, seed=args.seed)
    for name, verdicts in rep.verdicts.items():
        failed = [v.condition for v in verdicts if not v.passed]
        report.add(f"== {name}: fails {', '.join(failed) if failed else 'nothing'}")
        for v in verdicts:
            _verdict_lines(report, v)
    if rep.every_function_fails:
        report.add("every function violates at least one condition")
    else:
        report.add("some function passed every condition within these bounds")
        report.exit_code = EXIT_AUDIT


def cmd_enumerate(args, report: Report) -> None:
    n = args.policies
    report.echo("policies", n)
    if args.count_only:
        report.add(str(count_weak_orders(n)))
        return
    labels = _split(args.labels) if args.labels else [chr(ord("A") + i) for i in range(n)]
    if len(labels) != n:
        raise UsageError(f"{len(labels)} labels for {n} policies")
    ps = PolicySet(tuple(labels))
    for o in enumerate_weak_orders(ps):
        report.add(o.format(ps.policies))


def cmd_pairwise(args, report: Report) -> None:
    s = _situation(report, args)
    m = pairwise_matrix(s)
    _matrix_lines(report, m)
    if args.detect_cycles:
        found = detect_cycles(m)
        if not found:
            report.add("no cycles")
        for c in found:
            members = ",".join(p for p in m.policies if p in c.members)
            report.add(f"cycle {{{members}}} min margin {c.min_margin}")


def cmd_agenda(args, report: Report) -> None:
    s = _situation(report, args)
    order = _split(args.order)
    report.echo("order", ",".join(order))
    r = agenda(s, order)
    for st in r.stages:
        outcome = st.winner if st.winner else "tie"
        report.add(f"{st.incumbent} vs {st.challenger}: {outcome}")
    report.add(r.format())
    if r.cycle:
        report.add("note: the majority relation over the proposal contains a cycle")


def _kv(items: Sequence[str]) -> dict[str, int]:
    out = {}
    for item in items:
        key, sep, value = item.partition("=")
        if not sep or key not in ("n", "trials", "seed"):
            raise UsageError(f"expected n=<int>, trials=<int> or seed=<int>, got {item!r}")
        try:
            out[key] = int(value)
        except ValueError:
            raise UsageError(f"{key} must be an integer") from None
    return out


def cmd_maxmin(args, report: Report) -> None:
    if args.independent_mc is not None:
        kv = _kv(args.independent_mc)
        n, trials, seed = kv.get("n", 3), kv.get("trials", 100_000), kv.get("seed", args.seed)
        report.echo("independent-mc", f"n={n} trials={trials} seed={seed}")
        try:
            st = independent_maxmin_mc(n, trials, seed)
        except ValueError as exc:
            raise UsageError(str(exc)) from None
        report.add(f"max min cyclic probability: {float(st.max_min):.6f} ({st.max_min})")
        report.add(f"best before refinement: {float(st.sampled_max):.6f}")
        report.add(f"mean over samples: {st.mean_min:.6f}")
        report.add(f"grid {st.grid}, mass units {st.mass_units}, refinement steps {st.refine_steps}, resampled {st.resampled}")
        report.add(f"ceiling 3/4 respected: {st.max_min <= st.ceiling}")
        return
    if not args.ballots:
        raise UsageError("give a ballot file or --independent-mc")
    s = _situation(report, args)
    m = pairwise_matrix(s)
    _matrix_lines(report, m)
    cycles = audit_cycles(m)
    if not cycles:
        report.add("no cycles")
    for c in cycles:
        margins = " ".join(str(x) for x in c.margins)
        report.add(
            f"cycle {' > '.join(c.cycle)} > {c.cycle[0]}: margins {margins}; min {c.min_margin}; "
            f"bound {c.bound}; respected {c.bound_respected}"
        )
        if not c.bound_respected:
            report.exit_code = EXIT_AUDIT
    hint = elimination_hint(m)
    report.add(f"unanimous pair: {hint[0]} over {hint[1]}" if hint else "unanimous pair: none")


def cmd_weights(args, report: Report) -> None:
    rule = _rule(args.rule, args.alpha)
    rho = WeightVector.parse(args.vector)
    checks = _split(args.check)
    unknown = set(checks) - {"dictator", "vetoer", "essential", "bounds"}
    if unknown:
        raise UsageError(f"unknown checks {sorted(unknown)}")
    report.echo("rule", rule)
    report.echo("weights", ",".join(map(str, rho)))
    report.echo("total", rho.total)
    report.add("voters are numbered from 1")
    if "dictator" in checks:
        d = find_dictator(rule, rho)
        report.add(f"dictator: {d.voter + 1 if d.voter is not None else 'none'} ({d.profiles_checked} profiles)")
    if "vetoer" in checks:
        v = find_vetoer(rule, rho)
        report.add(f"vetoers: {' '.join(str(j + 1) for j in v.voters) or 'none'}")
    if "essential" in checks:
        e = essential_voters(rule, rho)
        report.add(f"essential: {' '.join(str(j + 1) for j in e.voters) or 'none'}")
    if "bounds" in checks:
        b = check_weight_bounds(rule, rho)
        fmt = lambda xs: " ".join(str(j + 1) for j in xs) or "none"
        report.add(f"bounds: safe={b.safe_by_bound} dictator-flags={fmt(b.dictator_flags)} vetoer-flags={fmt(b.vetoer_flags)}")
        report.add(f"exhaustive: dictators={fmt(b.dictators)} vetoers={fmt(b.vetoers)}")
        for msg in b.mismatches:
            report.add(f"mismatch: {msg}")
        for msg in b.unconfirmed:
            report.add(f"unconfirmed: {msg}")


def cmd_tree(args, report: Report) -> None:
    tree = parse_council(_load(report, args.council), args.council)
    tf = parse_ternary(_load(report, args.ballots), args.ballots)
    out = evaluate_tree(tree, tf.ballots)
    leaves = sorted(set(tree_leaves(tree)))
    direct = tally_binary(BinaryRule("simple-majority"), [tf.ballots[i] for i in leaves])
    report.add(f"council outcome: {out:+d}" if out else "council outcome: 0")
    report.add(f"direct majority over the {len(leaves)} represented voters: {direct:+d}" if direct else f"direct majority over the {len(leaves)} represented voters: 0")
    if out != direct:
        report.add("the representative outcome differs from the direct vote")


COMMANDS = {
    "tally": cmd_tally,
    "tally2": cmd_tally2,
    "audit": cmd_audit,
    "audit2": cmd_audit2,
    "impossibility": cmd_impossibility,
    "enumerate": cmd_enumerate,
    "pairwise": cmd_pairwise,
    "agenda": cmd_agenda,
    "maxmin": cmd_maxmin,
    "weights": cmd_weights,
    "tree": cmd_tree,
}


def build_parser() -> argparse.ArgumentParser:
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--format", choices=("text", "csv"), default="text")
    common.add_argument("--seed", type=int, default=DEFAULT_SEED, help="seed for every random choice")

    p = argparse.ArgumentParser(prog="collchoice", description="Collective choice tallies and audits.")
    p.add_argument("--version", action="version", version=f"collchoice {__version__}")
    sub = p.add_subparsers(dest="command", required=True)
    binary_kinds = sorted(set(KINDS) | set(ALIASES))

    def ballot_opts(sp):
        sp.add_argument("ballots", help="ranked ballot file")
        sp.add_argument("--proposal", help="comma-separated subset of the policies put to the vote")
        sp.add_argument("--restrict", action="store_true", help="project the ballots onto the proposal first")

    sp = sub.add_parser("tally", parents=[common], help="multi-policy tally")
    sp.add_argument("--rule", choices=("plurality", "borda", "condorcet"), required=True)
    sp.add_argument("--no-abstain", action="store_true", help="reject ballots without a single first choice")
    ballot_opts(sp)

    sp = sub.add_parser("tally2", parents=[common], help="two-policy ternary tally")
    sp.add_argument("--rule", choices=binary_kinds, required=True)
    sp.add_argument("--alpha")
    sp.add_argument("--weights")
    sp.add_argument("ballots", help="ternary ballot file")

    sp = sub.add_parser("audit", parents=[common], help="check the five conditions by exhaustive sweep")
    sp.add_argument("--rule", choices=sorted(set(MULTI_POLICY_FUNCTIONS) | {"biased-random"} | set(binary_kinds)), required=True)
    sp.add_argument("--alpha")
    sp.add_argument("--weights")
    sp.add_argument("--policies", type=int, default=3)
    sp.add_argument("--voters", type=int, default=3)
    sp.add_argument("--conditions", default="all")
    sp.add_argument("--expect", help="conditions that must pass (exit 2 otherwise)")

    sp = sub.add_parser("audit2", parents=[common], help="check two-policy rule properties exhaustively")
    sp.add_argument("--rule", choices=binary_kinds, required=True)
    sp.add_argument("--alpha")
    sp.add_argument("--voters", type=int, default=3)
    sp.add_argument("--conditions", default="all")

    sp = sub.add_parser("impossibility", parents=[common], help="audit every built-in multi-policy function")
    sp.add_argument("--policies", type=int, default=3)
    sp.add_argument("--voters", type=int, default=3)
    sp.add_argument("--no-seeds", action="store_true", help="skip the reference situations")

    sp = sub.add_parser("enumerate", parents=[common], help="count or list weak orders")
    sp.add_argument("--policies", type=int, required=True)
    sp.add_argument("--count-only", action="store_true")
    sp.add_argument("--labels")

    sp = sub.add_parser("pairwise", parents=[common], help="pairwise majority matrix")
    sp.add_argument("--detect-cycles", action="store_true")
    ballot_opts(sp)

    sp = sub.add_parser("agenda", parents=[common], help="sequential pairwise contests")
    sp.add_argument("--order", required=True)
    ballot_opts(sp)

    sp = sub.add_parser("maxmin", parents=[common], help="cycle margin bounds")
    sp.add_argument("ballots", nargs="?")
    sp.add_argument("--proposal")
    sp.add_argument("--restrict", action="store_true")
    sp.add_argument("--independent-mc", nargs="*", metavar="KEY=VALUE")

    sp = sub.add_parser("weights", parents=[common], help="weighted voting analysis")
    sp.add_argument("--vector", required=True)
    sp.add_argument("--rule", choices=binary_kinds, default="weighted-majority")
    sp.add_argument("--alpha")
    sp.add_argument("--check", default="dictator,vetoer,essential,bounds")

    sp = sub.add_parser("tree", parents=[common], help="evaluate a council tree")
    sp.add_argument("council")
    sp.add_argument("ballots")
    return p


def run(argv: Sequence[str] | None = None, out=None, err=None) -> int:
    out = out or sys.stdout
    err = err or sys.stderr
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_OK if exc.code == 0 else EXIT_INPUT
    report = Report()
    report.echo("command", args.command)
    report.echo("version", f"collchoice {__version__}")
    try:
        if args.format == "csv" and args.command not in CSV_COMMANDS:
            raise UsageError(f"csv output is available for {', '.join(sorted(CSV_COMMANDS))} only")
        COMMANDS[args.command](args, report)
    except (InputError, PreferenceError, UsageError, ValueError, OSError) as exc:
        print(f"error: {exc}", file=err)
        return EXIT_INPUT
    out.write(report.render(args.format))
    return report.exit_code


def main() -> None:
    sys.exit(run())


if __name__ == "__main__":
    main()
