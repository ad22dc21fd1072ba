"""Command-line interface.

Commands: play one episode, run the parameter sweep or the budget
study from a config file, rank stored results, render stored results
as tables, and list the bundled games. Exit codes: 0 success, 1 usage
error, 2 runtime failure.
"""

from __future__ import annotations

import argparse
import json
import sys
import time
from dataclasses import asdict
from pathlib import Path

from . import games
from .agents import AgentSpecError, parse_agent_spec
from .harness import (
    ConfigError,
    load_config,
    read_results,
    render_budget_table,
    render_grid,
    render_significance,
    run_budget_study,
    run_game,
    run_sweep,
    significance_matrix,
)
from .stats import f1_table


class _Parser(argparse.ArgumentParser):
    """argparse with usage errors on exit code 1 (2 is runtime failure)."""

    def error(self, message):
        self.print_usage(sys.stderr)
        self.exit(1, f"{self.prog}: error: {message}\n")


def _build_parser() -> _Parser:
    parser = _Parser(prog="gridplan", description=__doc__)
    sub = parser.add_subparsers(dest="command", required=True)

    play = sub.add_parser("play", help="play one episode")
    play.add_argument("--game", required=True)
    play.add_argument("--level", type=int, required=True)
    play.add_argument("--agent", required=True, help='e.g. "rhea:P=5,L=10"')
    play.add_argument("--budget", type=int, default=480)
    play.add_argument("--seed", type=int, required=True)
    play.add_argument("--trace", action="store_true",
                      help="print per-decision planning traces")

    sweep = sub.add_parser("sweep", help="run the P x L parameter sweep")
    sweep.add_argument("--config", required=True)
    sweep.add_argument("--smoke", action="store_true",
                       help="CI profile: 2 levels, 2 repeats")
    sweep.add_argument("--out", default=None, help="results directory override")
    sweep.add_argument("--parallel", type=int, default=None,
                       help="worker count (GRIDPLAN_PARALLEL overrides)")

    study = sub.add_parser("budget-study", help="run the budget-scaling study")
    study.add_argument("--config", required=True)
    study.add_argument("--smoke", action="store_true")
    study.add_argument("--out", default=None)
    study.add_argument("--parallel", type=int, default=None,
                       help="worker count (GRIDPLAN_PARALLEL overrides)")

    rank = sub.add_parser("rank", help="rank agents found in stored results")
    rank.add_argument("--results", required=True, help="results directory")

    render = sub.add_parser("render", help="render stored results as tables")
    render.add_argument("--results", required=True)
    render.add_argument("--table", required=True,
                        choices=("grid", "budget", "significance"))

    sub.add_parser("list-games", help="list the bundled games")
    return parser


def _out_dir(config_name: str, override: str | None) -> Path:
    if override is not None:
        return Path(override)
    stamp = time.strftime("%Y%m%d-%H%M%S")
    return Path("results") / config_name / stamp


def _apply_parallel(cfg, flag_value):
    """Worker count priority: environment, then flag, then config file."""
    import dataclasses
    import os

    env = os.environ.get("GRIDPLAN_PARALLEL")
    value = int(env) if env else flag_value
    if value is None or value == cfg.parallelism:
        return cfg
    return dataclasses.replace(cfg, parallelism=value)


def _cmd_play(args) -> int:
    parse_agent_spec(args.agent)
    traces = []
    hook = traces.append if args.trace else None
    record = run_game(args.game, args.level, args.agent, args.budget,
                      args.seed, on_decision=hook)
    payload = asdict(record)
    del payload["wall_time_ms"]  # keep stdout reproducible
    if args.trace:
        payload["decisions_trace"] = [
            {"used": t.advance_calls_used, "generations": t.generations_completed,
             "evaluations": t.evaluations, "chosen": t.chosen_action,
             "best_fitness": t.best_fitness}
            for t in traces
        ]
    print(json.dumps(payload))
    return 0


def _cmd_sweep(args) -> int:
    cfg = load_config(args.config)
    if args.smoke:
        cfg = cfg.smoke()
    cfg = _apply_parallel(cfg, args.parallel)
    out = _out_dir(cfg.name, args.out)
    result = run_sweep(cfg, out_dir=out)
    print(f"wrote {len(result.records)} records to {out}")
    print(render_grid(result, group="all"))
    return 0


def _cmd_budget_study(args) -> int:
    cfg = load_config(args.config)
    if args.smoke:
        cfg = cfg.smoke()
    cfg = _apply_parallel(cfg, args.parallel)
    out = _out_dir(cfg.name, args.out)
    result = run_budget_study(cfg, out_dir=out)
    print(f"wrote {len(result.records)} records to {out}")
    print(render_budget_table(result))
    return 0


def _load_records(results_dir: str) -> list:
    path = Path(results_dir) / "records.csv"
    if not path.exists():
        raise FileNotFoundError(f"no records.csv under {results_dir}")
    records, _ = read_results(path)
    return records


def _cmd_rank(args) -> int:
    records = _load_records(args.results)
    per_game: dict[str, dict[str, list]] = {}
    for rec in records:
        per_game.setdefault(rec.game, {}).setdefault(rec.agent, []).append(
            (float(rec.win), rec.score, float(rec.timesteps)))
    table = f1_table(per_game)
    print("agent points")
    for agent, points in table.standings():
        print(f"{agent} {points}")
    return 0


def _cmd_render(args) -> int:
    results_dir = Path(args.results)
    if args.table == "grid":
        manifest = json.loads((results_dir / "manifest.json").read_text())
        if manifest.get("kind") != "sweep":
            raise ValueError("grid table needs sweep results")
        records = _load_records(args.results)
        result = _rebuild_sweep(records, manifest["config"])
        for group in ("all", "deterministic", "stochastic"):
            print(render_grid(result, group=group))
        return 0
    if args.table == "budget":
        manifest = json.loads((results_dir / "manifest.json").read_text())
        if manifest.get("kind") != "budget_study":
            raise ValueError("budget table needs budget-study results")
        print((results_dir / "budget_table.txt").read_text(), end="")
        return 0
    records = _load_records(args.results)
    report = significance_matrix(records)
    print(render_significance(report, metric="win"))
    print(render_significance(report, metric="score"))
    return 0


def _rebuild_sweep(records, cfg_raw):
    from .harness.runner import BudgetAudit, CellSummary, SweepResult, group_summary, summarize_games

    p_values = tuple(cfg_raw["p_values"])
    l_values = tuple(cfg_raw["l_values"])
    by_agent: dict[str, list] = {}
    for rec in records:
        by_agent.setdefault(rec.agent, []).append(rec)
    cells = {}
    for p in p_values:
        for length in l_values:
            per_game = summarize_games(by_agent.get(f"rhea:P={p},L={length}", []))
            groups = {g: s for g in ("all", "deterministic", "stochastic")
                      if per_game and (s := group_summary(per_game, g)) is not None}
            cells[(p, length)] = CellSummary(per_game, groups)
    return SweepResult(p_values, l_values, records, cells, BudgetAudit(), cfg_raw)


def _cmd_list_games(_args) -> int:
    for spec in games.list_games():
        tag = "S" if spec.nature.value == "stochastic" else "D"
        print(f"{spec.id} [{tag}] actions={len(spec.action_set)} "
              f"scoring={spec.scoring.value} timeout={spec.timeout_rule.value}")
    return 0


_COMMANDS = {
    "play": _cmd_play,
    "sweep": _cmd_sweep,
    "budget-study": _cmd_budget_study,
    "rank": _cmd_rank,
    "render": _cmd_render,
    "list-games": _cmd_list_games,
}


def main(argv=None) -> int:
    parser = _build_parser()
    try:
        args = parser.parse_args(argv)
    except SystemExit as exc:
        return exc.code if isinstance(exc.code, int) else 1
    try:
        return _COMMANDS[args.command](args)
    except (AgentSpecError, ConfigError, games.GameError) as exc:
        print(f"gridplan: error: {exc}", file=sys.stderr)
        return 1
    except Exception as exc:  # runtime failure
        print(f"gridplan: failed: {exc}", file=sys.stderr)
        return 2


if __name__ == "__main__":
    sys.exit(main())
