"""Command-line front end.

Exit status: 0 on success (or when every checked restriction holds), 1 when
``check`` finds a violation, 2 on bad input or arguments.

Setting ``REALITYCHOICE_OUTPUT_DIR`` (or passing ``--out-dir``) makes every
``--json`` run also write its trace to ``<dir>/<input stem>.<kind>.json``.
"""

from __future__ import annotations

import argparse
import os
import sys
from pathlib import Path

from realitychoice.actionplan import unfold_plan
from realitychoice.agenda import VARIANTS, run_agenda
from realitychoice.core import RealityAwareElection, RealityChoiceError, UtilityBallot
from realitychoice.electionfile import (
    ElectionData,
    ElectionFileError,
    dumps_json,
    load_election,
    make_trace,
    serialize_election,
)
from realitychoice.game import best_response_exists, build_game, play
from realitychoice.restrictions import (
    GeneratorError,
    check_abstract_constancy,
    check_distance_constancy,
    check_utility_constancy,
    generate_table_election,
    generate_utility_constant_election,
)
from realitychoice.rules import RULES, get_rule, plurality

OUTPUT_DIR_ENV = "REALITYCHOICE_OUTPUT_DIR"

EXIT_OK = 0
EXIT_VIOLATED = 1
EXIT_INPUT = 2

ARROW = "->"


class UsageError(Exception):
    pass


def _ways(k: int) -> str:
    words = {2: "two", 3: "three", 4: "four", 5: "five", 6: "six"}
    return f"{words.get(k, k)}-way"


def _fmt_set(names, alts) -> str:
    return "{" + ", ".join(sorted(names[a] for a in alts)) + "}"


def _lookup(data: ElectionData, name: str, what: str) -> int:
    try:
        return data.election.index(name)
    except KeyError:
        raise UsageError(f"unknown {what} {name!r}") from None


def _rule_for(data: ElectionData, name: str):
    if name == "distance" and data.distance is None:
        raise UsageError("rule 'distance' needs a 'distance' matrix in the election file")
    return get_rule(name, data.distance)


def _emit(args, kind: str, data: ElectionData, params: dict, result: dict, lines):
    if args.json:
        trace = make_trace(kind, data, params, result)
        text = dumps_json(trace)
        sys.stdout.write(text)
        out_dir = args.out_dir or os.environ.get(OUTPUT_DIR_ENV)
        if out_dir:
            path = Path(out_dir) / f"{Path(args.file).stem}.{kind}.json"
            path.parent.mkdir(parents=True, exist_ok=True)
            path.write_text(text, encoding="utf-8")
    else:
        for line in lines:
            print(line)


def _describe_outcome(names, outcome) -> list[str]:
    lines = [
        f"reality: {names[outcome.reality]}",
        f"S_R: {_fmt_set(names, outcome.viable)}"
        + ("" if outcome.viable else " (empty)"),
    ]
    if outcome.net_margins:
        lines.append("N_R: " + ", ".join(
            f"{names[a]}={outcome.net_margins[a]:+d}"
            for a in sorted(outcome.viable, key=lambda a: names[a])))
    lines.append(f"case: {outcome.case}")
    if outcome.tie_break:
        tied = outcome.candidates
        what = "N_R" if outcome.rule.endswith("preference") else "fallback"
        lines.append(f"tie-break: {_ways(len(tied))} {what} tie among "
                     f"{_fmt_set(names, tied)}, smallest name chosen")
    lines.append(f"winner: {names[outcome.winner]}")
    return lines


def cmd_check(args) -> int:
    data = load_election(args.file)
    election = data.election
    names = election.names
    verdicts = [check_abstract_constancy(election)]
    if data.distance is not None:
        verdicts.append(check_distance_constancy(election, data.distance))
        if data.utilities is not None:
            verdicts.append(check_utility_constancy(election, data.distance, data.utilities))
    lines = []
    result = []
    for verdict in verdicts:
        entry = {"restriction": verdict.restriction, "holds": verdict.holds}
        if verdict.holds:
            lines.append(f"{verdict.restriction} constancy: holds")
        else:
            w = verdict.witness
            entry["witness"] = w.to_dict(names)
            lines.append(f"{verdict.restriction} constancy: VIOLATED")
            lines.append(f"  voter {w.voter}, Realities "
                         f"{', '.join(names[r] for r in w.realities)}, states "
                         f"{', '.join(names[s] for s in w.states)}")
            lines.append(f"  {w.describe(names)}")
        result.append(entry)
    _emit(args, "check", data, {}, {"verdicts": result}, lines)
    return EXIT_OK if all(v.holds for v in verdicts) else EXIT_VIOLATED


def cmd_elect(args) -> int:
    data = load_election(args.file)
    election = data.election
    if args.reality is not None:
        election = election.at(_lookup(data, args.reality, "reality"))
    names = election.names
    params = {"rule": args.rule, "reality": names[election.reality]}
    if args.rule == "plurality":
        winner = plurality(election)
        result = {"rule": "plurality", "reality": names[election.reality],
                  "winner": names[winner]}
        lines = ["rule: plurality", f"winner: {names[winner]}"]
    else:
        outcome = _rule_for(data, args.rule)(election)
        result = outcome.to_dict(names)
        lines = [f"rule: {args.rule}"] + _describe_outcome(names, outcome)
    _emit(args, "rule", data, params, result, lines)
    return EXIT_OK


def _parse_arrangement(data, text):
    if text is None:
        return None
    return [_lookup(data, part.strip(), "alternative") for part in text.split(",") if part.strip()]


def cmd_agenda(args) -> int:
    data = load_election(args.file)
    election = data.election
    names = election.names
    arrangement = _parse_arrangement(data, args.arrangement)
    try:
        outcome, trace = run_agenda(election, args.variant, arrangement)
    except ValueError as exc:
        raise UsageError(str(exc)) from None
    lines = []
    if not trace.votes:
        lines.append(f"S_R empty; elect {names[trace.elected]}")
    else:
        lines.append(f"S_R: {_fmt_set(names, outcome.viable)}")
        for vote in trace.votes:
            lines.append(
                f"[{vote.phase}] {names[vote.incumbent]} vs {names[vote.challenger]}: "
                f"{vote.tally.for_x}-{vote.tally.for_y} {ARROW} {names[vote.survivor]}")
        lines.append(f"elect {names[trace.elected]} ({trace.reason})")
    params = {"variant": args.variant,
              "arrangement": None if arrangement is None else [names[a] for a in arrangement]}
    result = {"outcome": outcome.to_dict(names), "trace": trace.to_dict(names)}
    _emit(args, "agenda", data, params, result, lines)
    return EXIT_OK


def cmd_plan(args) -> int:
    if args.max_steps < 1:
        raise UsageError("--max-steps must be at least 1")
    data = load_election(args.file)
    election = data.election
    names = election.names
    start = election.reality if args.start is None else _lookup(data, args.start, "start state")
    plan = unfold_plan(election, _rule_for(data, args.rule), args.max_steps,
                       data.accessibility, start)
    path = f" {ARROW} ".join(names[s] for s in plan.states)
    if plan.termination == "cycle":
        status = f"cycle(period {plan.period})"
    else:
        status = plan.termination
    params = {"rule": args.rule, "max_steps": args.max_steps, "start": names[start]}
    _emit(args, "plan", data, params, plan.to_dict(names), [path, f"termination: {status}"])
    return EXIT_OK


def cmd_game(args) -> int:
    if args.horizon < 1:
        raise UsageError("--horizon must be at least 1")
    data = load_election(args.file)
    if data.distance is None or data.utilities is None:
        raise UsageError("game needs 'distance' and a utility row for every voter")
    names = data.election.names
    game = build_game(data.distance, data.utilities, names)
    rule = _rule_for(data, args.rule)
    start = data.election.reality if args.start is None else _lookup(data, args.start, "start")
    result = play(game, game.truthful, rule, start, args.horizon, data.accessibility)
    lines = [f"trajectory: {f' {ARROW} '.join(names[s] for s in result.plan.states)} "
             f"({result.plan.termination})",
             "voter  terminal  averaged"]
    for v, (t, a) in enumerate(zip(result.terminal, result.averaged)):
        lines.append(f"{v:>5}  {t:>8.4g}  {a:>8.4g}")
    out = result.to_dict(names)
    if args.deviate is not None:
        if not 0 <= args.deviate < game.n_players:
            raise UsageError(f"no voter {args.deviate}")
        found = best_response_exists(game, rule, start, args.horizon, args.deviate,
                                     data.accessibility)
        if found is None:
            lines.append(f"voter {args.deviate}: no improving deviation")
            out["deviation"] = None
        else:
            dev = play(game, found, rule, start, args.horizon, data.accessibility)
            ballot = found[args.deviate]
            changed = {names[r]: [names[a] for a in ballot.order_at(r)]
                       for r in range(game.n_states)
                       if ballot.order_at(r) != game.truthful[args.deviate].order_at(r)}
            lines.append(f"voter {args.deviate}: improving deviation found, terminal payoff "
                         f"{result.terminal[args.deviate]:.4g} {ARROW} "
                         f"{dev.terminal[args.deviate]:.4g}")
            for reality, ranking in changed.items():
                lines.append(f"  at {reality} submit {' > '.join(ranking)}")
            lines.append(f"  trajectory: {f' {ARROW} '.join(names[s] for s in dev.plan.states)}")
            out["deviation"] = {"voter": args.deviate, "submitted": changed,
                                "result": dev.to_dict(names)}
    params = {"rule": args.rule, "horizon": args.horizon, "start": names[start],
              "deviate": args.deviate}
    _emit(args, "game", data, params, out, lines)
    return EXIT_OK


def cmd_gen(args) -> int:
    if args.states < 1 or args.voters < 1:
        raise UsageError("--states and --voters must be positive")
    if args.model == "utility":
        instance = generate_utility_constant_election(args.seed, args.states, args.voters)
        election, d, utilities = instance
        ballots = tuple(UtilityBallot(d, row) for row in utilities.rows)
        data = ElectionData(RealityAwareElection(election.names, ballots, election.reality),
                            d, tuple(utilities.rows))
    else:
        election = generate_table_election(args.seed, args.states, args.voters)
        data = ElectionData(election, None, (None,) * election.n_voters)
    text = dumps_json(serialize_election(data))
    if args.output:
        Path(args.output).write_text(text, encoding="utf-8")
    else:
        sys.stdout.write(text)
    return EXIT_OK


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="realitychoice",
                                     description="Reality-aware social choice toolkit")
    sub = parser.add_subparsers(dest="command", required=True)

    def with_file(p):
        p.add_argument("file", help="election file (JSON)")
        p.add_argument("--json", action="store_true", help="emit a JSON trace")
        p.add_argument("--out-dir", default=None,
                       help=f"also write the JSON trace here (default: ${OUTPUT_DIR_ENV})")
        return p

    p = with_file(sub.add_parser("check", help="check domain restrictions"))
    p.set_defaults(func=cmd_check)

    p = with_file(sub.add_parser("elect", help="run a voting rule"))
    p.add_argument("--rule", required=True, choices=sorted(RULES) + ["plurality"])
    p.add_argument("--reality", default=None, help="override the file's Reality")
    p.set_defaults(func=cmd_elect)

    p = with_file(sub.add_parser("agenda", help="run the Reality-aware amendment agenda"))
    p.add_argument("--variant", default="conservative", choices=VARIANTS)
    p.add_argument("--arrangement", default=None,
                   help="comma-separated order of the Reality-viable alternatives")
    p.set_defaults(func=cmd_agenda)

    p = with_file(sub.add_parser("plan", help="unfold a democratic action plan"))
    p.add_argument("--rule", default="conservative", choices=sorted(RULES))
    p.add_argument("--max-steps", type=int, default=20)
    p.add_argument("--start", default=None)
    p.set_defaults(func=cmd_plan)

    p = with_file(sub.add_parser("game", help="play the strategic pebble game"))
    p.add_argument("--rule", default="conservative", choices=sorted(RULES))
    p.add_argument("--horizon", type=int, default=20)
    p.add_argument("--start", default=None)
    p.add_argument("--deviate", type=int, default=None, metavar="VOTER",
                   help="search an improving unilateral deviation for this voter")
    p.set_defaults(func=cmd_game)

    p = sub.add_parser("gen", help="generate a seeded random election file")
    p.add_argument("--seed", type=int, required=True)
    p.add_argument("--states", type=int, default=4)
    p.add_argument("--voters", type=int, default=5)
    p.add_argument("--model", choices=("table", "utility"), default="table")
    p.add_argument("--output", "-o", default=None)
    p.set_defaults(func=cmd_gen)
    return parser


def main(argv=None) -> int:
    parser = build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return EXIT_INPUT if exc.code else EXIT_OK
    try:
        return args.func(args)
    except (UsageError, ElectionFileError, GeneratorError, RealityChoiceError, OSError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
