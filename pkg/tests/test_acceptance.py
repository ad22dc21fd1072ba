"""Acceptance suite: one test per release criterion, in order.

Each test prints a single ``ACCEPTANCE n PASS`` line on success (run
with ``pytest -s tests/test_acceptance.py`` to watch them). The two
sweep-scale criteria are marked ``slow`` but run in the default
session.
"""

from __future__ import annotations

import dataclasses
import math
import re
from itertools import combinations

import pytest

from conftest import far_state, make_trap_state
from gridplan import games
from gridplan.agents import (
    MctsConfig,
    RheaConfig,
    olmcts_decide,
    rhea_decide,
    rs_decide,
    value_heuristic,
)
from gridplan.engine import GameStatus, RngStream, advance, copy_state, legal_actions
from gridplan.harness import ExperimentConfig, run_budget_study, run_sweep
from gridplan.harness.render import render_budget_table, render_grid
from gridplan.stats import f1_points, mann_whitney, pooled_se_gap


def report(criterion: int, detail: str) -> None:
    print(f"\nACCEPTANCE {criterion} PASS: {detail}")


# -- 1: random-search equivalence ---------------------------------------------

def rs_oracle_action(root, seed: int, budget: int = 480,
                     plans: int = 24, length: int = 20) -> int:
    """Independent argmax over the same 24 seeded random walks.

    Draws genes plan-major from a same-seeded stream, simulates each
    walk on a re-seeded copy under a local call counter, and returns
    the first action of the best walk (ties keep the earliest).
    """
    rng = RngStream(seed)
    n = len(legal_actions(root))
    gene_sets = [[rng.randrange(n) for _ in range(length)] for _ in range(plans)]
    remaining = budget
    best_action = None
    best_value = -math.inf
    for genes in gene_sets:
        if remaining <= 0:
            break
        sim = copy_state(root, reseed=rng)
        for gene in genes:
            if remaining <= 0 or sim.status is not GameStatus.ONGOING:
                break
            advance(sim, gene, None)
            remaining -= 1
        value = value_heuristic(sim)
        if value > best_value:
            best_value = value
            best_action = genes[0]
    return best_action


def test_criterion_1_rs_equivalence():
    game_ids = list(games.GAMES)
    matched = 0
    total = 1000
    for k in range(total):
        game_id = game_ids[k % len(game_ids)]
        root = far_state(game_id, 10_000 + k)
        seed = 555_000 + k
        action, trace = rs_decide(root, 480, RngStream(seed))
        assert trace.generations_completed == 0, (game_id, k)
        assert trace.crossovers == 0 and trace.mutations == 0, (game_id, k)
        assert trace.evaluations == 24, (game_id, k)
        oracle = rs_oracle_action(root, seed)
        assert action == oracle, (game_id, k, action, oracle)
        matched += 1
    report(1, f"{matched}/{total} decisions match the 24-walk oracle "
              "with 0 generations, 0 crossovers, 0 mutations, 24 evaluations")


# -- 2: generation accounting --------------------------------------------------

def test_criterion_2_generation_accounting():
    for game_id in games.GAMES:
        for budget, expected in ((960, 2), (1440, 3), (1920, 4)):
            for seed in range(3):
                root = far_state(game_id, 777 + seed)
                _, trace = rs_decide(root, budget, RngStream(seed))
                total = 1 + trace.generations_completed
                assert total == expected, (game_id, budget, total)
    report(2, "budgets 960/1440/1920 give exactly 2/3/4 population "
              "evaluations on all six games")


# -- 3: budget soundness across the smoke sweep --------------------------------

@pytest.mark.slow
def test_criterion_3_budget_soundness_smoke_sweep():
    cfg = ExperimentConfig(
        name="smoke-acceptance",
        agents=("rs",),
        games=tuple(games.GAMES),
        levels=(0, 1),
        repeats=2,
        budget=480,
        master_seed=20170401,
        parallelism=2,
    )
    result = run_sweep(cfg)
    expected = 49 * 6 * 2 * 2
    assert len(result.records) == expected
    assert result.audit.cap_violations == 0
    assert result.audit.fullness_violations == 0
    report(3, f"{result.audit.decisions} decisions audited over the 7x7 "
              "smoke sweep: 0 cap violations, 0 fullness violations")


# -- 4: ranking points vector ---------------------------------------------------

def test_criterion_4_f1_vector():
    expected = [25, 18, 15, 12, 10, 8, 6, 4, 2, 1] + [0] * 10
    got = [f1_points(rank) for rank in range(1, 21)]
    assert got == expected
    report(4, "rank points reproduce [25,18,15,12,10,8,6,4,2,1,0,...] exactly")


# -- 5: Mann-Whitney against the enumeration oracle -----------------------------

def _null_table(n: int, m: int) -> list[int]:
    """Full enumeration of the tie-free null: counts of each U value."""
    counts = [0] * (n * m + 1)
    base = n * (n - 1) // 2
    for positions in combinations(range(n + m), n):
        counts[sum(positions) - base] += 1
    return counts


def _oracle_p(n: int, m: int, u: float, table: list[int]) -> float:
    u_min = min(u, n * m - u)
    total = sum(table)
    at_most = sum(c for value, c in enumerate(table) if value <= u_min)
    return min(1.0, 2.0 * at_most / total)


def _pair_with_u(n: int, m: int, u: int) -> tuple[list[int], list[int]]:
    """Canonical tie-free pair from {1..12} realizing the target U."""
    positions = list(range(n))  # lowest ranks first: U = 0
    budget = u
    for i in reversed(range(n)):
        lift = min(budget, m + i - positions[i])
        positions[i] += lift
        budget -= lift
    pool = list(range(1, n + m + 1))
    a = [pool[p] for p in positions]
    b = [v for v in pool if v not in a]
    return a, b


def _pairwise_u(a, b) -> float:
    return sum(1.0 if x > y else 0.5 if x == y else 0.0 for x in a for y in b)


def test_criterion_5_mann_whitney_oracle():
    # exact path: every (n, m, U) shape with n, m <= 6. U and the
    # two-sided p of a tie-free pair are functions of the rank split
    # alone, so covering every reachable U per size class covers every
    # tie-free pair over {1..12}.
    checked = 0
    for n in range(1, 7):
        for m in range(1, 7):
            table = _null_table(n, m)
            for u in range(n * m + 1):
                a, b = _pair_with_u(n, m, u)
                assert _pairwise_u(a, b) == u
                res = mann_whitney(a, b)
                assert res.u == u
                assert abs(res.p_value - _oracle_p(n, m, u, table)) < 1e-9
                checked += 1
    # seeded spot sample on top: arbitrary value draws from {1..12}
    rng = RngStream(99)
    for _ in range(600):
        n = 1 + rng.randrange(6)
        m = 1 + rng.randrange(6)
        pool = list(range(1, 13))
        picked = []
        for _ in range(n + m):
            picked.append(pool.pop(rng.randrange(len(pool))))
        a, b = picked[:n], picked[n:]
        res = mann_whitney(a, b)
        u = _pairwise_u(a, b)
        assert res.u == u
        assert abs(res.p_value - _oracle_p(n, m, u, _null_table(n, m))) < 1e-9

    # normal approximation within 0.02 of exact at n = m = 8
    table8 = _null_table(8, 8)
    worst = 0.0
    for u in range(65):
        a, b = _pair_with_u(8, 8, u)
        exact = _oracle_p(8, 8, u, table8)
        approx = mann_whitney(a, b, method="normal").p_value
        worst = max(worst, abs(exact - approx))
    assert worst <= 0.02

    # paper-scale check: 29% vs 98% win rates over 100 runs each
    a = [1.0] * 29 + [0.0] * 71
    b = [1.0] * 98 + [0.0] * 2
    assert mann_whitney(a, b).p_value < 0.001
    report(5, f"{checked} exact (n,m,U) shapes match enumeration; "
              f"normal vs exact worst gap {worst:.4f} <= 0.02; "
              "paper-scale Bernoulli significant")


# -- 6: determinism and replay ---------------------------------------------------

def _canonical_csv(path) -> str:
    import csv

    with open(path, newline="") as fh:
        rows = list(csv.reader(fh))
    drop = rows[0].index("wall_time_ms")
    return "\n".join(
        "\x1f".join(cell for i, cell in enumerate(row) if i != drop)
        for row in rows)


@pytest.mark.slow
def test_criterion_6_determinism(tmp_path):
    cfg = ExperimentConfig(
        name="determinism",
        agents=("rs",),
        games=tuple(games.GAMES),
        levels=(0,),
        repeats=1,
        budget=240,
        master_seed=424242,
        parallelism=1,
        p_values=(1, 20),
        l_values=(10,),
    )
    run_sweep(cfg, out_dir=tmp_path / "a")
    run_sweep(cfg, out_dir=tmp_path / "b")
    run_sweep(dataclasses.replace(cfg, parallelism=8), out_dir=tmp_path / "c")
    first = _canonical_csv(tmp_path / "a" / "records.csv")
    assert first == _canonical_csv(tmp_path / "b" / "records.csv")
    assert first == _canonical_csv(tmp_path / "c" / "records.csv")
    summaries = {(tmp_path / d / "summary.json").read_text() for d in "abc"}
    assert len(summaries) == 1
    report(6, "repeat run and parallelism 1 vs 8 produce byte-identical "
              "results (wall_time_ms excluded)")


# -- 7: planner sanity on the trap game ------------------------------------------

def test_criterion_7_planners_match_exhaustive_search():
    probe = make_trap_state()
    n = len(probe.rules.action_set)
    best_action, best_value = None, -math.inf
    from itertools import product
    for genes in product(range(n), repeat=10):
        sim = copy_state(probe)
        for gene in genes:
            if sim.status is not GameStatus.ONGOING:
                break
            advance(sim, gene, None)
        value = value_heuristic(sim)
        if value > best_value:
            best_action, best_value = genes[0], value
    assert best_action == probe.rules.action_set.index("LEFT")

    rhea_hits = 0
    mcts_hits = 0
    for seed in range(100):
        action, _ = rhea_decide(make_trap_state(), RheaConfig(5, 10, 480),
                                RngStream(seed))
        rhea_hits += action == best_action
        action, _ = olmcts_decide(make_trap_state(), MctsConfig(480, 10),
                                  RngStream(seed))
        mcts_hits += action == best_action
    assert rhea_hits >= 95, rhea_hits
    assert mcts_hits >= 95, mcts_hits
    report(7, f"oracle-optimal first action chosen {rhea_hits}/100 (evolver) "
              f"and {mcts_hits}/100 (tree search)")


# -- 8: trend reproduction ---------------------------------------------------------

@pytest.mark.slow
def test_criterion_8_population_trend():
    cfg = ExperimentConfig(
        name="trend",
        agents=("rs",),
        games=tuple(games.GAMES),
        levels=(0, 1, 2, 3, 4),
        repeats=20,
        budget=480,
        master_seed=20170401,
        parallelism=2,
        p_values=(1, 20),
        l_values=(14,),
    )
    result = run_sweep(cfg)
    big = [float(r.win) for r in result.records if r.agent == "rhea:P=20,L=14"]
    small = [float(r.win) for r in result.records if r.agent == "rhea:P=1,L=14"]
    assert len(big) == len(small) == 600
    gap, pooled_se = pooled_se_gap(big, small)
    assert gap > pooled_se, (gap, pooled_se)
    report(8, f"win rate P=20 vs P=1 at L=14: gap {gap:.3f} "
              f"> pooled SE {pooled_se:.3f} over 600 runs each")


# -- 9: table shapes ------------------------------------------------------------------

def test_criterion_9_table_shapes(tmp_path):
    cfg = ExperimentConfig(
        name="shape",
        agents=("rs",),
        games=tuple(games.GAMES),
        levels=(0,),
        repeats=1,
        budget=480,
        master_seed=7,
        parallelism=2,
        p_values=(1, 2),
        l_values=(6,),
    )
    study = run_budget_study(cfg, out_dir=tmp_path / "study")
    assert study.row_labels == ["RHEA-1920", "RHEA-1440", "RHEA-960",
                                "OLMCTS-480", "RHEA/RS-480"]
    table = render_budget_table(study)
    header = table.splitlines()[0]
    for column in ("Average Wins (T)", "Points (T)", "Average Wins (D)",
                   "Points (D)", "Average Wins (S)", "Points (S)"):
        assert column in header
    cell = re.compile(r"\d+\.\d{2} \(\d+\.\d{2}\)")
    assert len(cell.findall(table)) == 15  # 5 rows x 3 win columns

    sweep = run_sweep(cfg)
    grid = render_grid(sweep, group="all")
    assert len(cell.findall(grid)) == 2  # 2 populations x 1 length
    report(9, "budget table and sweep grid render the published row/column "
              "shape with mean (SE) cells")
