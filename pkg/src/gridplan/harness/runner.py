"""Experiment execution: single episodes, parameter sweeps, budget studies.

Episodes are independent cells keyed by (agent, game, level, repeat);
their seeds are derived from the master seed and the cell key, never
drawn from a shared stream, so a sweep produces byte-identical results
at any parallelism level. The true game is advanced unmetered: the
budget governs planning, not living. A crashing agent (or one
returning an out-of-range action) is recorded as a loss flagged
``agent_error`` rather than aborting the sweep.
"""

from __future__ import annotations

import time
from dataclasses import dataclass
from multiprocessing import get_context
from pathlib import Path

from .. import games
from ..agents import make_agent
from ..engine import GameStatus, RngStream, advance, copy_state
from ..stats import MannWhitneyResult, SampleSummary, mann_whitney, summarize
from .config import ExperimentConfig
from .records import RunRecord, write_results

_METRICS = ("win", "score", "timesteps")
_GROUPS = ("all", "deterministic", "stochastic")


@dataclass
class BudgetAudit:
    """Per-decision budget bookkeeping accumulated over a run set."""

    decisions: int = 0
    cap_violations: int = 0
    fullness_violations: int = 0
    cutoff_decisions: int = 0

    def merge(self, other: tuple) -> None:
        self.decisions += other[0]
        self.cap_violations += other[1]
        self.fullness_violations += other[2]
        self.cutoff_decisions += other[3]


def _play(agent_obj, label: str, game_id: str, level: int, repeat: int,
          master_seed: int, on_decision=None,
          audit_l: int | None = None) -> tuple[RunRecord, tuple]:
    """One episode; returns the record plus (decisions, cap-violations,
    fullness-violations, cutoff-decisions) audit counters."""
    run_seed = RngStream(master_seed).derive(label, game_id, level, repeat).seed
    state = games.load_level(game_id, level, run_seed)
    agent_rng = RngStream(run_seed).derive("agent")
    n_actions = len(state.rules.action_set)
    started = time.perf_counter()
    decisions = 0
    calls = 0
    error = 0
    audit = [0, 0, 0, 0]
    while state.status is GameStatus.ONGOING:
        view = copy_state(state, reseed=agent_rng)
        try:
            action, trace = agent_obj.decide(view, agent_rng)
        except Exception:
            error = 1
            break
        if not isinstance(action, int) or not (0 <= action < n_actions):
            error = 1
            break
        decisions += 1
        calls += trace.advance_calls_used
        audit[0] += 1
        if trace.advance_calls_used > trace.budget_cap:
            audit[1] += 1
        if trace.terminal_cutoffs or trace.no_evaluation:
            audit[3] += 1
        elif (audit_l is not None
              and trace.advance_calls_used < trace.budget_cap - audit_l + 1):
            audit[2] += 1
        if on_decision is not None:
            on_decision(trace)
        advance(state, action, None)
    record = RunRecord(
        agent=label,
        game=game_id,
        level=level,
        repeat=repeat,
        seed=run_seed,
        win=1 if (error == 0 and state.status is GameStatus.WIN) else 0,
        score=state.score,
        timesteps=state.tick,
        decisions=decisions,
        total_advance_calls=calls,
        wall_time_ms=(time.perf_counter() - started) * 1000.0,
        agent_error=error,
    )
    return record, tuple(audit)


def run_game(game_id: str, level: int, agent, budget: int, master_seed: int,
             repeat: int = 0, agent_id: str | None = None,
             on_decision=None) -> RunRecord:
    """Play one episode; ``agent`` is a spec string or an agent object.

    At every tick the agent receives a copy of the true state (with a
    re-seeded simulation stream in stochastic games) and decides under
    a fresh meter of ``budget`` advance calls.
    """
    if isinstance(agent, str):
        agent_obj = make_agent(agent, budget)
        label = agent_id or agent.strip()
    else:
        agent_obj = agent
        label = agent_id or agent_obj.name
    record, _ = _play(agent_obj, label, game_id, level, repeat, master_seed,
                      on_decision=on_decision)
    return record


# -- parallel execution ------------------------------------------------------

# task: (label, spec, budget, game, level, repeat, master_seed, audit_l)

def _episode_worker(task) -> tuple[RunRecord, tuple]:
    label, spec, budget, game_id, level, repeat, master_seed, audit_l = task
    agent_obj = make_agent(spec, budget)
    return _play(agent_obj, label, game_id, level, repeat, master_seed,
                 audit_l=audit_l)


def _execute(tasks: list[tuple], parallelism: int) -> tuple[list[RunRecord], BudgetAudit]:
    audit = BudgetAudit()
    records: list[RunRecord] = []
    if parallelism <= 1 or len(tasks) <= 1:
        for task in tasks:
            record, counters = _episode_worker(task)
            records.append(record)
            audit.merge(counters)
    else:
        with get_context("fork").Pool(processes=parallelism) as pool:
            for record, counters in pool.imap_unordered(_episode_worker, tasks):
                records.append(record)
                audit.merge(counters)
    records.sort(key=RunRecord.sort_key)
    return records, audit


# -- aggregation -------------------------------------------------------------

def _metric_rows(records: list[RunRecord]) -> dict[str, list[tuple[float, float, float]]]:
    rows: dict[str, list[tuple[float, float, float]]] = {}
    for rec in records:
        rows.setdefault(rec.game, []).append(
            (float(rec.win), rec.score, float(rec.timesteps)))
    return rows


def summarize_games(records: list[RunRecord]) -> dict[str, dict[str, SampleSummary]]:
    """Per-game SampleSummary for the win/score/timesteps metrics."""
    out: dict[str, dict[str, SampleSummary]] = {}
    for game, rows in _metric_rows(records).items():
        out[game] = {
            "win": summarize([r[0] for r in rows]),
            "score": summarize([r[1] for r in rows]),
            "timesteps": summarize([r[2] for r in rows]),
        }
    return out


def group_summary(per_game: dict[str, dict[str, SampleSummary]],
                  group: str) -> dict[str, SampleSummary] | None:
    """Aggregate per-game summaries: mean of means, mean of SEs.

    The bracketed number in rendered tables is the average of the
    per-game standard errors, not the SE of the pooled sample.
    """
    if group == "all":
        members = list(per_game)
    elif group == "deterministic":
        members = [g for g in per_game if not games.GAMES[g].stochastic]
    elif group == "stochastic":
        members = [g for g in per_game if games.GAMES[g].stochastic]
    else:
        raise ValueError(f"unknown group {group!r}")
    if not members:
        return None
    out = {}
    for metric in _METRICS:
        summaries = [per_game[g][metric] for g in members]
        out[metric] = SampleSummary(
            n=sum(s.n for s in summaries),
            mean=sum(s.mean for s in summaries) / len(summaries),
            std_error=sum(s.std_error for s in summaries) / len(summaries),
        )
    return out


# -- parameter sweep ---------------------------------------------------------

@dataclass
class CellSummary:
    per_game: dict[str, dict[str, SampleSummary]]
    groups: dict[str, dict[str, SampleSummary]]


@dataclass
class SweepResult:
    p_values: tuple[int, ...]
    l_values: tuple[int, ...]
    records: list[RunRecord]
    cells: dict[tuple[int, int], CellSummary]
    audit: BudgetAudit
    config: dict

    def cell_agent(self, p: int, length: int) -> str:
        return f"rhea:P={p},L={length}"

    def summary_dict(self) -> dict:
        cells = {}
        for (p, length), cell in sorted(self.cells.items()):
            cells[f"P={p},L={length}"] = {
                group: {
                    metric: {"n": s.n, "mean": s.mean, "std_error": s.std_error}
                    for metric, s in metrics.items()
                }
                for group, metrics in cell.groups.items()
            }
        return {
            "p_values": list(self.p_values),
            "l_values": list(self.l_values),
            "cells": cells,
            "audit": vars(self.audit),
        }


def run_sweep(cfg: ExperimentConfig, p_values=None, l_values=None,
              out_dir: str | Path | None = None) -> SweepResult:
    """Full cartesian sweep of population size x plan length.

    Every cell plays ``games x levels x repeats`` episodes with the
    configured budget. Results land in ``out_dir`` when given: records,
    a JSON summary, and the three win-rate grid tables (all games,
    deterministic only, stochastic only).
    """
    p_values = tuple(p_values if p_values is not None else cfg.p_values)
    l_values = tuple(l_values if l_values is not None else cfg.l_values)
    tasks = []
    for p in p_values:
        for length in l_values:
            spec = f"rhea:P={p},L={length}"
            for game_id in cfg.games:
                for level in cfg.levels:
                    for repeat in range(cfg.repeats):
                        tasks.append((spec, spec, cfg.budget, game_id, level,
                                      repeat, cfg.master_seed, length))
    records, audit = _execute(tasks, cfg.parallelism)

    by_agent: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_agent.setdefault(rec.agent, []).append(rec)
    cells = {}
    for p in p_values:
        for length in l_values:
            agent_records = by_agent.get(f"rhea:P={p},L={length}", [])
            per_game = summarize_games(agent_records)
            groups = {g: s for g in _GROUPS
                      if (s := group_summary(per_game, g)) is not None}
            cells[(p, length)] = CellSummary(per_game, groups)

    result = SweepResult(p_values, l_values, records, cells, audit, cfg.as_dict())
    if out_dir is not None:
        _write_sweep(result, Path(out_dir))
    return result


def _write_sweep(result: SweepResult, out_dir: Path) -> None:
    import json

    from .render import render_grid

    out_dir.mkdir(parents=True, exist_ok=True)
    write_results(result.records, out_dir / "records.csv")
    write_results(result.records, out_dir / "records.json", config=result.config)
    (out_dir / "summary.json").write_text(
        json.dumps(result.summary_dict(), indent=1, sort_keys=True) + "\n",
        encoding="utf-8")
    (out_dir / "manifest.json").write_text(
        json.dumps({"kind": "sweep", "config": result.config},
                   indent=1, sort_keys=True) + "\n", encoding="utf-8")
    for group in _GROUPS:
        table = render_grid(result, group=group)
        (out_dir / f"grid_win_{group}.txt").write_text(table, encoding="utf-8")


# -- budget study ------------------------------------------------------------

@dataclass
class BudgetStudyResult:
    row_labels: list[str]
    wins: dict[str, dict[str, SampleSummary]]
    points: dict[str, dict[str, int]]
    records: list[RunRecord]
    audit: BudgetAudit
    config: dict

    def summary_dict(self) -> dict:
        return {
            "rows": self.row_labels,
            "wins": {
                label: {
                    group: {"n": s.n, "mean": s.mean, "std_error": s.std_error}
                    for group, s in groups.items()
                }
                for label, groups in self.wins.items()
            },
            "points": self.points,
            "audit": vars(self.audit),
        }


def study_rows(cfg: ExperimentConfig, budgets=None) -> list[tuple[str, str, int, int]]:
    """(label, spec, budget, plan-length) rows in presentation order:
    the evolver at the scaled budgets, the tree searcher, then the
    random-search-equivalent base row."""
    budgets = tuple(budgets if budgets is not None else cfg.study_budgets)
    base = min(budgets)
    rows = []
    for budget in sorted(budgets, reverse=True):
        if budget != base:
            rows.append((f"RHEA-{budget}", "rs", budget, 20))
    rows.append((f"OLMCTS-{base}", f"olmcts:depth={cfg.mcts_depth}", base,
                 cfg.mcts_depth))
    rows.append((f"RHEA/RS-{base}", "rs", base, 20))
    return rows


def run_budget_study(cfg: ExperimentConfig, budgets=None,
                     out_dir: str | Path | None = None) -> BudgetStudyResult:
    """Budget-scaling comparison in the fixed five-row table shape.

    Columns: average wins and ranking points, each over all games (T),
    the deterministic half (D), and the stochastic half (S).
    """
    rows = study_rows(cfg, budgets)
    tasks = []
    for label, spec, budget, length in rows:
        for game_id in cfg.games:
            for level in cfg.levels:
                for repeat in range(cfg.repeats):
                    tasks.append((label, spec, budget, game_id, level,
                                  repeat, cfg.master_seed, length))
    records, audit = _execute(tasks, cfg.parallelism)

    by_agent: dict[str, list[RunRecord]] = {}
    for rec in records:
        by_agent.setdefault(rec.agent, []).append(rec)
    wins = {}
    for label, _, _, _ in rows:
        per_game = summarize_games(by_agent.get(label, []))
        wins[label] = {
            {"all": "T", "deterministic": "D", "stochastic": "S"}[g]: s["win"]
            for g in _GROUPS if (s := group_summary(per_game, g)) is not None
        }

    points = _study_points(records, [label for label, *_ in rows])
    result = BudgetStudyResult([label for label, *_ in rows], wins, points,
                               records, audit, cfg.as_dict())
    if out_dir is not None:
        _write_study(result, Path(out_dir))
    return result


def _study_points(records: list[RunRecord], labels: list[str]) -> dict[str, dict[str, int]]:
    from ..stats import f1_table

    per_game: dict[str, dict[str, list[tuple[float, float, float]]]] = {}
    for rec in records:
        per_game.setdefault(rec.game, {}).setdefault(rec.agent, []).append(
            (float(rec.win), rec.score, float(rec.timesteps)))
    table = f1_table(per_game)
    points = {label: {"T": 0, "D": 0, "S": 0} for label in labels}
    for game, rows in table.per_game.items():
        key = "S" if games.GAMES[game].stochastic else "D"
        for agent, _, pts in rows:
            points[agent]["T"] += pts
            points[agent][key] += pts
    return points


def _write_study(result: BudgetStudyResult, out_dir: Path) -> None:
    import json

    from .render import render_budget_table

    out_dir.mkdir(parents=True, exist_ok=True)
    write_results(result.records, out_dir / "records.csv")
    write_results(result.records, out_dir / "records.json", config=result.config)
    (out_dir / "summary.json").write_text(
        json.dumps(result.summary_dict(), indent=1, sort_keys=True) + "\n",
        encoding="utf-8")
    (out_dir / "manifest.json").write_text(
        json.dumps({"kind": "budget_study", "config": result.config},
                   indent=1, sort_keys=True) + "\n", encoding="utf-8")
    (out_dir / "budget_table.txt").write_text(render_budget_table(result),
                                              encoding="utf-8")


# -- significance ------------------------------------------------------------

@dataclass
class SignificanceReport:
    alpha: float
    tests: dict[str, dict[str, dict[tuple[str, str], MannWhitneyResult]]]

    def result(self, game: str, metric: str, a: str, b: str) -> MannWhitneyResult:
        key = (a, b) if a <= b else (b, a)
        return self.tests[game][metric][key]

    def significant(self, game: str, metric: str, a: str, b: str) -> bool:
        return self.result(game, metric, a, b).p_value < self.alpha

    def agents(self) -> list[str]:
        names: set[str] = set()
        for metrics in self.tests.values():
            for pairs in metrics.values():
                for a, b in pairs:
                    names.add(a)
                    names.add(b)
        return sorted(names)


def significance_matrix(records: list[RunRecord],
                        alpha: float = 0.05) -> SignificanceReport:
    """Pairwise two-sided tests per game, on wins and on scores."""
    by_game: dict[str, dict[str, list[RunRecord]]] = {}
    for rec in records:
        by_game.setdefault(rec.game, {}).setdefault(rec.agent, []).append(rec)
    tests: dict[str, dict[str, dict[tuple[str, str], MannWhitneyResult]]] = {}
    for game, agents_recs in sorted(by_game.items()):
        names = sorted(agents_recs)
        wins = {a: [float(r.win) for r in agents_recs[a]] for a in names}
        scores = {a: [r.score for r in agents_recs[a]] for a in names}
        game_tests = {"win": {}, "score": {}}
        for i, a in enumerate(names):
            for b in names[i + 1:]:
                game_tests["win"][(a, b)] = mann_whitney(wins[a], wins[b])
                game_tests["score"][(a, b)] = mann_whitney(scores[a], scores[b])
        tests[game] = game_tests
    return SignificanceReport(alpha, tests)
