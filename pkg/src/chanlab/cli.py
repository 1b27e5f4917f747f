"""Command-line front end.

Exit codes: 0 success, 1 I/O failure, 2 usage error, 3 infeasible decision
or illegal strategy move, 4 resource cap hit (capital, instance size,
search budget).
"""

from __future__ import annotations

import argparse
import json
import os
import sys
from dataclasses import dataclass, field
from pathlib import Path
from typing import Optional

from .adversary import adaptive_adversary, parse_family
from .channel import ChannelState, Instance, decisions_to_bits, load_instance, save_instance
from .errors import (
    AdviceExhausted,
    CapitalTooLarge,
    IllegalAccept,
    InfeasibleDecision,
    InstanceTooLarge,
    InsufficientCapital,
    InvalidParams,
    SearchBudgetExceeded,
)
from .harness import (
    Objective,
    reports_to_csv,
    resource_aug_experiment,
    run_ratio,
    sweep_reports,
    yao_bound_max,
    yao_bound_min,
)
from .ratio import format_ratio
from .solver import DEFAULT_CAPITAL_CAP, solve_max
from .strategies import resolve

EXIT_OK = 0
EXIT_IO = 1
EXIT_USAGE = 2
EXIT_INFEASIBLE = 3
EXIT_CAP = 4


@dataclass(frozen=True)
class RunConfig:
    command: str
    target: Optional[str] = None
    strategies: tuple[str, ...] = ()
    objective: Objective = Objective.MAX_ACCEPT
    seed: int = 0
    out: Optional[str] = None
    solver_cap: int = DEFAULT_CAPITAL_CAP
    extra: dict = field(default_factory=dict)


def _load_target(target: str) -> list[Instance]:
    """A path to an instance JSON file, or a family spec such as ``ix:2,8,1``."""
    if os.path.exists(target):
        return [load_instance(target)]
    try:
        return parse_family(target)
    except InvalidParams:
        raise InvalidParams(f"{target!r} is neither an instance file nor a family spec") from None


def _single(target: str) -> Instance:
    instances = _load_target(target)
    if len(instances) != 1:
        raise InvalidParams(f"{target!r} names {len(instances)} instances, expected one")
    return instances[0]


def _emit(text: str, out: Optional[str]) -> None:
    if out is None:
        sys.stdout.write(text if text.endswith("\n") else text + "\n")
        return
    with open(out, "w", encoding="utf-8", newline="") as fh:
        fh.write(text if text.endswith("\n") else text + "\n")


def cmd_gen(cfg: RunConfig) -> None:
    instances = parse_family(cfg.target)
    if cfg.out is None:
        for inst in instances:
            sys.stdout.write(inst.to_json() + "\n")
    elif len(instances) == 1:
        save_instance(instances[0], cfg.out)
    else:
        out = Path(cfg.out)
        for i, inst in enumerate(instances):
            save_instance(inst, out.with_name(f"{out.stem}-{i}{out.suffix or '.json'}"))


def cmd_solve(cfg: RunConfig) -> None:
    res = solve_max(_single(cfg.target), cfg.solver_cap)
    _emit(json.dumps({"opt": res.opt_accepted, "witness": decisions_to_bits(res.witness)}), cfg.out)


def cmd_run(cfg: RunConfig) -> None:
    factory = resolve(cfg.strategies[0])
    rep = run_ratio(_single(cfg.target), factory, cfg.objective, cfg.seed, cfg.solver_cap)
    _emit(json.dumps(rep.to_dict()), cfg.out)


def cmd_sweep(cfg: RunConfig) -> None:
    reports = sweep_reports(
        cfg.target, cfg.strategies, cfg.objective, cfg.seed, cfg.solver_cap, cfg.extra["workers"]
    )
    _emit(reports_to_csv(reports), cfg.out)


def cmd_yao(cfg: RunConfig) -> None:
    f, n = cfg.extra["f"], cfg.extra["n"]
    fn = yao_bound_max if cfg.objective is Objective.MAX_ACCEPT else yao_bound_min
    _emit(fn(f, n).to_json(), cfg.out)


def cmd_augment(cfg: RunConfig) -> None:
    rep = resource_aug_experiment(
        resolve(cfg.strategies[0]), cfg.extra["C"], cfg.extra["eps"], cfg.extra["n"], cfg.seed
    )
    _emit(json.dumps(rep.to_dict()), cfg.out)


def _parse_ints(text: str, what: str) -> list[int]:
    try:
        return [int(p) for p in text.split(",") if p.strip()]
    except ValueError:
        raise InvalidParams(f"{what} must be comma-separated integers, got {text!r}") from None


def cmd_adaptive(cfg: RunConfig) -> None:
    left, right = _parse_ints(cfg.extra["initial"], "--initial")
    outcome = adaptive_adversary(
        resolve(cfg.strategies[0]),
        cfg.extra["max_n"],
        _parse_ints(cfg.extra["values"], "values"),
        ChannelState(left, right),
        seed=cfg.seed,
        node_budget=cfg.extra["node_budget"],
    )
    _emit(
        json.dumps(
            {
                "instance": outcome.instance.to_dict(),
                "strategy": cfg.strategies[0],
                "alg": outcome.alg_accepted,
                "opt": outcome.opt_accepted,
                "ratio": format_ratio(outcome.ratio),
                "seed": cfg.seed,
                "nodes": outcome.nodes,
            }
        ),
        cfg.out,
    )


COMMANDS = {
    "gen": cmd_gen,
    "solve": cmd_solve,
    "run": cmd_run,
    "sweep": cmd_sweep,
    "yao": cmd_yao,
    "augment": cmd_augment,
    "adaptive": cmd_adaptive,
}


def build_parser() -> argparse.ArgumentParser:
    # global flags are accepted before or after the subcommand
    common = argparse.ArgumentParser(add_help=False)
    common.add_argument("--seed", type=int, default=argparse.SUPPRESS)
    common.add_argument("--out", default=argparse.SUPPRESS)
    common.add_argument("--solver-cap", type=int, default=argparse.SUPPRESS)

    parser = argparse.ArgumentParser(prog="chanlab", description=__doc__.splitlines()[0])
    parser.add_argument("--seed", type=int, default=0, help="seed for randomized strategies")
    parser.add_argument("--out", default=None, help="output file (default: stdout)")
    parser.add_argument("--solver-cap", type=int, default=DEFAULT_CAPITAL_CAP,
                        help="largest channel total the DP solver accepts")
    sub = parser.add_subparsers(dest="command", required=True)

    p = sub.add_parser("gen", parents=[common], help="write instance JSON for a family spec")
    p.add_argument("family", help="ix:F,N,X | ix-family:F,N | advice-pair | raug:C,EPS,N,V")

    p = sub.add_parser("solve", parents=[common], help="offline optimum of an instance")
    p.add_argument("instance", help="instance JSON path or family spec")

    p = sub.add_parser("run", parents=[common], help="competitive ratio of one strategy")
    p.add_argument("instance", help="instance JSON path or family spec")
    p.add_argument("-s", "--strategy", required=True)
    p.add_argument("--objective", default="max", help="max (accepted) or min (rejected)")

    p = sub.add_parser("sweep", parents=[common], help="CSV over instances x strategies")
    p.add_argument("family", help="family spec or instance JSON path")
    p.add_argument("-s", "--strategy", action="append", default=[], dest="strategies")
    p.add_argument("--objective", default="max")
    p.add_argument("--workers", type=int, default=1)

    p = sub.add_parser("yao", parents=[common], help="exact Yao bound over the transfer family")
    p.add_argument("f", type=int)
    p.add_argument("n", type=int)
    p.add_argument("--objective", default="max")

    p = sub.add_parser("augment", parents=[common], help="resource augmentation experiment")
    p.add_argument("strategy")
    p.add_argument("C", type=int)
    p.add_argument("eps", type=int)
    p.add_argument("n", type=int)

    p = sub.add_parser("adaptive", parents=[common], help="minimax adaptive adversary")
    p.add_argument("strategy")
    p.add_argument("max_n", type=int)
    p.add_argument("values", help="comma-separated transaction values, e.g. 1,2,4")
    p.add_argument("--initial", default="4,1", help="initial capital LEFT,RIGHT")
    p.add_argument("--node-budget", type=int, default=2_000_000)
    return parser


def config_from_args(ns: argparse.Namespace) -> RunConfig:
    cmd = ns.command
    objective = Objective.parse(getattr(ns, "objective", "max"))
    if cmd == "sweep":
        strategies = tuple(ns.strategies)
    elif cmd in ("augment", "adaptive", "run"):
        strategies = (ns.strategy,)
    else:
        strategies = ()
    target = getattr(ns, "family", None) or getattr(ns, "instance", None)
    extra = {}
    if cmd == "sweep":
        extra["workers"] = ns.workers
    elif cmd == "yao":
        extra.update(f=ns.f, n=ns.n)
    elif cmd == "augment":
        extra.update(C=ns.C, eps=ns.eps, n=ns.n)
    elif cmd == "adaptive":
        extra.update(max_n=ns.max_n, values=ns.values, initial=ns.initial,
                     node_budget=ns.node_budget)
    if ns.solver_cap < 0:
        raise InvalidParams("--solver-cap must be non-negative")
    return RunConfig(cmd, target, strategies, objective, ns.seed, ns.out, ns.solver_cap, extra)


def main(argv=None) -> int:
    parser = build_parser()
    ns = parser.parse_args(argv)
    try:
        cfg = config_from_args(ns)
        for spec in cfg.strategies:
            resolve(spec)
        COMMANDS[cfg.command](cfg)
    except InvalidParams as exc:
        print(f"chanlab: error: {exc}", file=sys.stderr)
        return EXIT_USAGE
    except (InfeasibleDecision, IllegalAccept, InsufficientCapital, AdviceExhausted) as exc:
        print(f"chanlab: infeasible: {exc}", file=sys.stderr)
        return EXIT_INFEASIBLE
    except (CapitalTooLarge, InstanceTooLarge, SearchBudgetExceeded) as exc:
        print(f"chanlab: resource cap: {exc}", file=sys.stderr)
        return EXIT_CAP
    except OSError as exc:
        print(f"chanlab: {exc}", file=sys.stderr)
        return EXIT_IO
    return EXIT_OK


if __name__ == "__main__":
    sys.exit(main())
