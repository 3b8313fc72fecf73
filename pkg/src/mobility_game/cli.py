"""Command line entry point: ``mobility-game solve|sweep-poa|sweep-beta3|verify``.

Exit codes: 0 success, 1 validation error, 2 no equilibrium (non-sweep
runs; ``verify`` also uses it for a profile that is not an equilibrium),
3 I/O error.
"""

from __future__ import annotations

import argparse
import json
import logging
import sys

import numpy as np

from .equilibrium import BestResponseConfig, random_assignment, run_dynamics, verify_nash
from .experiments import VARIANTS, emit_report, run_poa_sweep, run_prospect_sweep
from .mechanics import Action, Assignment
from .network import DomainError, StructuralError
from .scenario import ScenarioError, build_game, build_prospect, load_scenario, scenario_hash

EXIT_OK, EXIT_INVALID, EXIT_NO_EQUILIBRIUM, EXIT_IO = 0, 1, 2, 3

log = logging.getLogger("mobility_game")


def _write(text: str, path: str | None):
    if path is None:
        sys.stdout.write(text)
    else:
        with open(path, "w", encoding="utf-8", newline="") as fh:
            fh.write(text)


def cmd_solve(args) -> int:
    config = load_scenario(args.scenario)
    seed = config.seed if args.seed is None else args.seed
    behavior = args.behavior or config.behavior
    game = build_game(config, seed)
    model = build_prospect(config, game) if behavior == "prospect" else None
    start = random_assignment(game, np.random.default_rng(seed))
    report = run_dynamics(game, start, behavior, BestResponseConfig(max_rounds=args.max_rounds), model)
    text = emit_report(report, args.format, None, game=game, prospect=model,
                       scenario=config.name, scenario_hash=scenario_hash(config), seed=seed)
    _write(text, args.out)
    if not report.converged:
        log.error("dynamics did not converge within %d rounds", args.max_rounds)
        return EXIT_NO_EQUILIBRIUM
    return EXIT_OK


def cmd_sweep_poa(args) -> int:
    config = load_scenario(args.scenario)
    if args.seed is not None:
        config = config.with_(seed=args.seed)
    variants = list(VARIANTS) if args.variant == "both" else [args.variant]
    result = run_poa_sweep(config, args.i_min, args.i_max, args.replications, variants,
                           n_starts=args.n_starts)
    _write(emit_report(result, args.format, None), args.out)
    return EXIT_OK


def cmd_sweep_beta3(args) -> int:
    config = load_scenario(args.scenario)
    if args.seed is not None:
        config = config.with_(seed=args.seed)
    try:
        values = [float(v) for v in args.values.split(",") if v.strip()]
    except ValueError:
        raise DomainError(f"--values must be comma-separated numbers, got {args.values!r}") from None
    result = run_prospect_sweep(config, values, args.replications, n_starts=args.n_starts)
    _write(emit_report(result, args.format, None), args.out)
    return EXIT_OK


def cmd_verify(args) -> int:
    config = load_scenario(args.scenario)
    with open(args.assignment, encoding="utf-8") as fh:
        try:
            stored = json.load(fh)
        except json.JSONDecodeError as exc:
            raise ScenarioError(f"{args.assignment}:{exc.lineno}:{exc.colno}", exc.msg) from None
    seed = args.seed if args.seed is not None else stored.get("seed", config.seed)
    behavior = args.behavior or stored.get("behavior", config.behavior)
    game = build_game(config, seed)
    try:
        actions = tuple(Action(int(a["route"]), str(a["hub"]), int(a["service_type"]), float(a["payment"]))
                        for a in stored["actions"])
    except (KeyError, TypeError) as exc:
        raise ScenarioError("$.actions", f"malformed action list ({exc})") from None
    assignment = Assignment(game.network, actions)
    model = build_prospect(config, game) if behavior == "prospect" else None
    check = verify_nash(game, assignment, behavior, BestResponseConfig(), model)
    sys.stdout.write(json.dumps({"is_nash": check.is_nash, "gap": check.gap,
                                 "worst_traveler": check.worst_traveler}) + "\n")
    return EXIT_OK if check.is_nash else EXIT_NO_EQUILIBRIUM


def build_parser() -> argparse.ArgumentParser:
    parser = argparse.ArgumentParser(prog="mobility-game", description=__doc__.splitlines()[0])
    parser.add_argument("-v", "--verbose", action="store_true")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("solve", help="run best-response dynamics on one scenario")
    p.add_argument("--scenario", required=True, help="scenario file or built-in name (fig3, table1)")
    p.add_argument("--seed", type=int)
    p.add_argument("--behavior", choices=("rational", "prospect"))
    p.add_argument("--max-rounds", type=int, default=10_000)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_solve)

    p = sub.add_parser("sweep-poa", help="price of anarchy against traveler count")
    p.add_argument("--scenario", required=True)
    p.add_argument("--i-min", type=int, default=2)
    p.add_argument("--i-max", type=int, default=12)
    p.add_argument("--replications", type=int, default=20)
    p.add_argument("--variant", choices=(*VARIANTS, "both"), default="both")
    p.add_argument("--n-starts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep_poa)

    p = sub.add_parser("sweep-beta3", help="prospect-theory price of anarchy against beta3")
    p.add_argument("--scenario", required=True)
    p.add_argument("--values", required=True, help="comma-separated beta3 values in (0, 1]")
    p.add_argument("--replications", type=int, default=5)
    p.add_argument("--n-starts", type=int)
    p.add_argument("--seed", type=int)
    p.add_argument("--out")
    p.add_argument("--format", choices=("csv", "json"), default="csv")
    p.set_defaults(func=cmd_sweep_beta3)

    p = sub.add_parser("verify", help="check a stored profile for profitable deviations")
    p.add_argument("--scenario", required=True)
    p.add_argument("--assignment", required=True, help="JSON report written by 'solve --format json'")
    p.add_argument("--seed", type=int)
    p.add_argument("--behavior", choices=("rational", "prospect"))
    p.set_defaults(func=cmd_verify)
    return parser


def main(argv=None) -> int:
    args = build_parser().parse_args(argv)
    logging.basicConfig(level=logging.INFO if args.verbose else logging.WARNING,
                        format="%(levelname)s %(name)s: %(message)s")
    try:
        return args.func(args)
    except OSError as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_IO
    except (ScenarioError, StructuralError, DomainError, ValueError) as exc:
        print(f"error: {exc}", file=sys.stderr)
        return EXIT_INVALID


if __name__ == "__main__":
    sys.exit(main())
