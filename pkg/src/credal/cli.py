"""Command-line front end.

Exit codes: 0 on success, 1 on input errors, budget overruns and failing
checks, 2 when a scenario run ends with an abort or a refusal.
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from fractions import Fraction
from typing import List, Optional, Sequence

from . import conditioning as cd
from .belief import CondVariant, CredalState, cond_prob
from .checks import CHECKS, gsfail_summary, run_checks
from .errors import BudgetExceeded, CredalError
from .lts import (
    generate_fragment,
    identity_relation,
    incompatibility_witness,
    is_bisimulation,
    max_compatibility,
    parse_schemas,
    search_intermediate_bisimulations,
)
from .meadow import RationalSyntaxError, parse as parse_rational, render
from .propspace import SentenceSyntaxError, parse as parse_sentence, render as render_sentence
from .prosecutor import WORKED_EXAMPLE, prosecutor_conditioning
from .protocol import PipelineKind, run_pipeline
from .simulation import BUILTIN_SCENARIOS, TAXI_PRIOR, ScenarioError, builtin_scenario, load_scenario, run_scenario, state_from_data

EXIT_OK, EXIT_INPUT, EXIT_INCOMPLETE = 0, 1, 2

DEFAULT_LTS_LABELS = "BC(!H)"


class InputError(Exception):
    pass


class _Parser(argparse.ArgumentParser):
    """Reports usage errors with exit code 1; code 2 is reserved for incomplete runs."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(EXIT_INPUT, f"{self.prog}: error: {message}\n")


def _rational_arg(text: str) -> Fraction:
    try:
        return parse_rational(text)
    except RationalSyntaxError as exc:
        raise argparse.ArgumentTypeError(str(exc)) from None


def _read(path: str) -> str:
    try:
        with open(path, encoding="utf-8") as fh:
            return fh.read()
    except OSError as exc:
        raise InputError(f"cannot read {path}: {exc.strerror}") from None


def _load_json(path: str):
    text = _read(path)
    try:
        return json.loads(text)
    except json.JSONDecodeError as exc:
        raise InputError(f"{path}: line {exc.lineno}, column {exc.colno}: {exc.msg}") from None


def _load_states(path: str) -> List[CredalState]:
    data = _load_json(path)
    items = data if isinstance(data, list) else [data]
    try:
        return [state_from_data(d) for d in items]
    except (KeyError, TypeError, ValueError) as exc:
        raise InputError(f"{path}: bad state: {exc}") from None


# -- commands ---------------------------------------------------------------


def cmd_run(args) -> int:
    if args.scenario == "prosecutor" and not os.path.exists(args.scenario):
        for line in prosecutor_conditioning(WORKED_EXAMPLE[2], WORKED_EXAMPLE[1], WORKED_EXAMPLE[0]).lines():
            print(line)
        return EXIT_OK
    if args.scenario in BUILTIN_SCENARIOS and not os.path.exists(args.scenario):
        scenario = builtin_scenario(args.scenario)
    else:
        try:
            scenario = load_scenario(_read(args.scenario))
        except ScenarioError as exc:
            raise InputError(f"{args.scenario}: {exc}") from None
    trace = run_scenario(scenario)
    print(trace)
    return EXIT_OK if trace.clean else EXIT_INCOMPLETE


def cmd_check(args) -> int:
    if args.cases < 1:
        raise InputError("--cases must be at least 1")
    try:
        reports = run_checks(args.selector, args.cases, args.seed, allow_zero=args.allow_zero)
    except KeyError as exc:
        raise InputError(exc.args[0]) from None
    for rep in reports:
        print(rep.line())
        if rep.theorem == "gsfail":
            print(f"  {gsfail_summary()}")
    return EXIT_OK if all(r.ok for r in reports) else EXIT_INPUT


def cmd_lts(args) -> int:
    seeds = _load_states(args.seeds) if args.seeds else list(incompatibility_witness()[0].states[:2])
    try:
        schemas = parse_schemas(args.labels)
    except ValueError as exc:
        raise InputError(f"bad label selector: {exc}") from None
    F = generate_fragment(seeds, schemas, args.depth, max_states=args.max_states)
    if args.action == "dump":
        print(F.dump())
        return EXIT_OK
    if args.action == "bisim":
        results = [("R^id", is_bisimulation(identity_relation(F), F)),
                   ("R^max", is_bisimulation(max_compatibility(F), F))]
        for name, res in results:
            print(f"{name}: {res}")
        return EXIT_OK if all(r.ok for _, r in results) else EXIT_INPUT
    found = search_intermediate_bisimulations(F, cap=args.cap)
    if not found:
        print("none found")
    for R in found:
        print("bisimulation: " + " ".join("{" + ",".join(map(str, c)) + "}" for c in R.classes(F)))
    return EXIT_OK


def cmd_taxi(args) -> int:
    P = TAXI_PRIOR
    print(f"prior {P}")
    print(f"P(E) = {render(P.prob('E'))}")
    print(f"P(H) = {render(P.prob('H'))}")
    print(f"P(H | E) = {render(cd.bayes(P, 'E').prob('H'))}")
    l, l2 = Fraction(4, 5), Fraction(1, 5)
    hyp_only = cd.marginal(P, ["H"])
    for kind in PipelineKind:
        prior = P if kind.value <= 2 else hyp_only
        post = run_pipeline(kind, prior, "E", "H", l=l, l2=l2)
        print(f"pipeline {kind.value} {kind.name.lower()}: P(H) = {render(post.prob('H'))}")
    return EXIT_OK


def cmd_prosecutor(args) -> int:
    for line in prosecutor_conditioning(args.n, args.k, args.p).lines():
        print(line)
    return EXIT_OK


def cmd_eval(args) -> int:
    states = _load_states(args.state_file)
    if len(states) != 1:
        raise InputError(f"{args.state_file}: expected one state, found {len(states)}")
    P = states[0]
    try:
        phi = parse_sentence(args.sentence)
        given = parse_sentence(args.given) if args.given is not None else None
    except SentenceSyntaxError as exc:
        raise InputError(str(exc)) from None
    if given is None:
        print(f"P({render_sentence(phi)}) = {render(P.prob(phi))}")
    else:
        value = cond_prob(CondVariant(args.variant), P, phi, given)
        shown = value if isinstance(value, str) else render(value)
        print(f"P{args.variant}({render_sentence(phi)} | {render_sentence(given)}) = {shown}")
    return EXIT_OK


# ---------------------------------------------------------------------------


def build_parser() -> argparse.ArgumentParser:
    parser = _Parser(prog="credal", description="Exact credal-state revision toolkit.")
    sub = parser.add_subparsers(dest="command", required=True, parser_class=_Parser)

    p = sub.add_parser("run", help="run a scenario file or a built-in scenario")
    p.add_argument("scenario", help=f"JSON file or one of: {', '.join([*BUILTIN_SCENARIOS, 'prosecutor'])}")
    p.set_defaults(func=cmd_run)

    p = sub.add_parser("check", help="randomized exact-equality checks")
    p.add_argument("selector", help=f"all, or comma-separated names from: {', '.join(CHECKS)}")
    p.add_argument("--cases", type=int, default=100)
    p.add_argument("--seed", type=int, default=0)
    p.add_argument("--allow-zero", action="store_true", help="admit zero prior weights")
    p.set_defaults(func=cmd_check)

    p = sub.add_parser("lts", help="generate and inspect a transition system fragment")
    p.add_argument("action", choices=("dump", "bisim", "search"))
    p.add_argument("--depth", type=int, default=1)
    p.add_argument("--seeds", help="JSON file with one state or a list of states")
    p.add_argument("--labels", default=DEFAULT_LTS_LABELS, help="';'-separated label schemas")
    p.add_argument("--max-states", type=int, default=64)
    p.add_argument("--cap", type=int, default=8, help="largest fragment the search accepts")
    p.set_defaults(func=cmd_lts)

    p = sub.add_parser("taxi", help="the taxi color case")
    p.set_defaults(func=cmd_taxi)

    p = sub.add_parser("prosecutor", help="selector-partition likelihood update")
    p.add_argument("--n", type=int, default=WORKED_EXAMPLE[2])
    p.add_argument("--k", type=int, default=WORKED_EXAMPLE[1])
    p.add_argument("--p", type=_rational_arg, default=WORKED_EXAMPLE[0])
    p.set_defaults(func=cmd_prosecutor)

    p = sub.add_parser("eval", help="probability of a sentence in a stored state")
    p.add_argument("state_file")
    p.add_argument("sentence")
    p.add_argument("--given", help="condition sentence")
    p.add_argument("--variant", default="0", choices=[v.value for v in CondVariant])
    p.set_defaults(func=cmd_eval)
    return parser


def main(argv: Optional[Sequence[str]] = None) -> int:
    args = build_parser().parse_args(argv)
    try:
        return args.func(args)
    except BudgetExceeded as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT
    except (InputError, CredalError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INPUT


if __name__ == "__main__":
    sys.exit(main())
