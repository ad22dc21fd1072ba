"""Ranking and significance machinery for the benchmark tables.

Pure functions: Formula-1 style points per rank, per-game agent
ordering with the win-rate/score/timesteps key, sample summaries with
standard errors, and a two-sided Mann-Whitney U test that enumerates
the exact null distribution for small tie-free samples and otherwise
uses the tie-corrected normal approximation with continuity correction.
"""

from __future__ import annotations

import math
from dataclasses import dataclass
from enum import Enum
from itertools import combinations
from typing import Iterable, Sequence

#: Points for ranks 1..10; every later rank scores 0.
F1_POINTS = (25, 18, 15, 12, 10, 8, 6, 4, 2, 1)

#: Largest n*m for which the exact null distribution is enumerated.
EXACT_LIMIT = 64


def f1_points(rank_position: int) -> int:
    """Points awarded to a 1-based rank position."""
    if rank_position < 1:
        raise ValueError("rank positions start at 1")
    if rank_position <= len(F1_POINTS):
        return F1_POINTS[rank_position - 1]
    return 0


@dataclass(frozen=True)
class SampleSummary:
    n: int
    mean: float
    std_error: float


def summarize(values: Sequence[float]) -> SampleSummary:
    """Mean and standard error (sample sd over sqrt(n); 0 when n < 2)."""
    n = len(values)
    if n < 1:
        raise ValueError("cannot summarize an empty sample")
    mean = math.fsum(values) / n
    if n < 2:
        return SampleSummary(n, mean, 0.0)
    var = math.fsum((v - mean) ** 2 for v in values) / (n - 1)
    return SampleSummary(n, mean, math.sqrt(var) / math.sqrt(n))


def rank_agents_per_game(
    results: dict[str, Sequence[tuple[float, float, float]]],
) -> list[tuple[str, int]]:
    """Competition ranking of agents on one game.

    ``results`` maps agent id to its (win, score, timesteps) outcomes.
    Agents sort by mean win rate, then mean score (both descending),
    then mean timesteps (ascending: faster is better). Exact ties on
    the full key share the better position and the following positions
    are skipped. Returns (agent, position) pairs in rank order.
    """
    if not results:
        raise ValueError("no agents to rank")
    keys = {}
    for agent, rows in results.items():
        if not rows:
            raise ValueError(f"agent {agent!r} has no results")
        wins = summarize([r[0] for r in rows]).mean
        scores = summarize([r[1] for r in rows]).mean
        steps = summarize([r[2] for r in rows]).mean
        keys[agent] = (-wins, -scores, steps)
    ordered = sorted(keys, key=lambda agent: (keys[agent], agent))
    ranked = []
    position = 0
    for idx, agent in enumerate(ordered):
        if idx == 0 or keys[agent] != keys[ordered[idx - 1]]:
            position = idx + 1
        ranked.append((agent, position))
    return ranked


class MwMethod(Enum):
    EXACT = "exact"
    NORMAL_APPROX = "normal_approx"
    DEGENERATE = "degenerate"


@dataclass(frozen=True)
class MannWhitneyResult:
    u: float
    p_value: float
    method: MwMethod


def _ranks_with_ties(pooled: Sequence[float]) -> tuple[list[float], list[int]]:
    """Average ranks of the pooled sample plus the tie-group sizes."""
    order = sorted(range(len(pooled)), key=lambda i: pooled[i])
    ranks = [0.0] * len(pooled)
    tie_sizes = []
    i = 0
    while i < len(order):
        j = i
        while j + 1 < len(order) and pooled[order[j + 1]] == pooled[order[i]]:
            j += 1
        avg = (i + j) / 2 + 1
        for k in range(i, j + 1):
            ranks[order[k]] = avg
        tie_sizes.append(j - i + 1)
        i = j + 1
    return ranks, tie_sizes


def _norm_sf(z: float) -> float:
    return 0.5 * math.erfc(z / math.sqrt(2.0))


def _exact_p_two_sided(a: Sequence[float], b: Sequence[float], u_a: float) -> float:
    """Enumerate every split of the pooled ranks; tie-free samples only."""
    n, m = len(a), len(b)
    u_min = min(u_a, n * m - u_a)
    total = 0
    at_most = 0
    for positions in combinations(range(n + m), n):
        u = sum(positions) - n * (n - 1) // 2  # pairwise wins of the a-side
        total += 1
        if u <= u_min:
            at_most += 1
    return min(1.0, 2.0 * at_most / total)


def mann_whitney(a: Sequence[float], b: Sequence[float],
                 method: str = "auto") -> MannWhitneyResult:
    """Two-sided Mann-Whitney U test; ``u`` is the statistic of ``a``.

    ``method`` is ``auto`` (exact when n*m <= 64 and tie-free, else the
    normal approximation), or ``exact`` / ``normal`` to force a path.
    A pooled sample with one distinct value is degenerate: p = 1.
    """
    n, m = len(a), len(b)
    if n < 1 or m < 1:
        raise ValueError("both samples need at least one value")
    pooled = list(a) + list(b)
    ranks, tie_sizes = _ranks_with_ties(pooled)
    rank_sum_a = math.fsum(ranks[:n])
    u_a = rank_sum_a - n * (n + 1) / 2

    if len(set(pooled)) == 1:
        return MannWhitneyResult(u_a, 1.0, MwMethod.DEGENERATE)

    has_ties = any(t > 1 for t in tie_sizes)
    if method == "auto":
        use_exact = not has_ties and n * m <= EXACT_LIMIT
    elif method == "exact":
        if has_ties:
            raise ValueError("exact method requires tie-free samples")
        use_exact = True
    elif method == "normal":
        use_exact = False
    else:
        raise ValueError(f"unknown method {method!r}")

    if use_exact:
        return MannWhitneyResult(u_a, _exact_p_two_sided(a, b, u_a),
                                 MwMethod.EXACT)

    big_n = n + m
    tie_term = sum(t ** 3 - t for t in tie_sizes) / (big_n ** 3 - big_n)
    sigma = math.sqrt(n * m * (big_n + 1) / 12.0 * (1.0 - tie_term))
    if sigma == 0.0:
        return MannWhitneyResult(u_a, 1.0, MwMethod.DEGENERATE)
    mu = n * m / 2.0
    big_u = max(u_a, n * m - u_a)
    z = (big_u - mu - 0.5) / sigma  # continuity correction
    p = min(1.0, 2.0 * _norm_sf(z))
    return MannWhitneyResult(u_a, p, MwMethod.NORMAL_APPROX)


def f1_table(per_game_results: dict[str, dict[str, Sequence[tuple[float, float, float]]]],
             ) -> "F1Table":
    """Rank agents inside every game and total their points."""
    per_game: dict[str, list[tuple[str, int, int]]] = {}
    totals: dict[str, int] = {}
    for game in sorted(per_game_results):
        ranking = rank_agents_per_game(per_game_results[game])
        rows = []
        for agent, position in ranking:
            points = f1_points(position)
            rows.append((agent, position, points))
            totals[agent] = totals.get(agent, 0) + points
        per_game[game] = rows
    return F1Table(per_game, totals)


@dataclass(frozen=True)
class F1Table:
    """Per-game (agent, position, points) rows plus per-agent totals."""

    per_game: dict[str, list[tuple[str, int, int]]]
    totals: dict[str, int]

    def standings(self) -> list[tuple[str, int]]:
        return sorted(self.totals.items(), key=lambda kv: (-kv[1], kv[0]))


def pooled_se_gap(a: Iterable[float], b: Iterable[float]) -> tuple[float, float]:
    """Mean difference (a - b) and the pooled standard error of the gap."""
    sa = summarize(list(a))
    sb = summarize(list(b))
    return sa.mean - sb.mean, math.hypot(sa.std_error, sb.std_error)
