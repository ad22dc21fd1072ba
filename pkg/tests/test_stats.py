"""Ranking points, summaries, and the Mann-Whitney test against oracles."""

from __future__ import annotations

import math
from itertools import combinations

import pytest
from hypothesis import given, settings, strategies as st

from gridplan.engine import RngStream
from gridplan.stats import (
    MannWhitneyResult,
    MwMethod,
    SampleSummary,
    f1_points,
    f1_table,
    mann_whitney,
    pooled_se_gap,
    rank_agents_per_game,
    summarize,
)


class TestF1Points:
    def test_exact_vector(self):
        got = [f1_points(rank) for rank in range(1, 14)]
        assert got == [25, 18, 15, 12, 10, 8, 6, 4, 2, 1, 0, 0, 0]

    def test_spot_values(self):
        assert f1_points(1) == 25
        assert f1_points(4) == 12
        assert f1_points(10) == 1
        assert f1_points(11) == 0

    def test_rank_zero_rejected(self):
        with pytest.raises(ValueError):
            f1_points(0)


class TestRanking:
    def test_win_rate_dominates(self):
        order = rank_agents_per_game({
            "a": [(1, 0, 10), (1, 0, 10), (0, 0, 10), (1, 0, 10), (1, 0, 10)],
            "b": [(1, 0, 10), (1, 0, 10), (0, 0, 10), (0, 0, 10), (1, 0, 10)],
        })
        assert order == [("a", 1), ("b", 2)]

    def test_score_breaks_win_ties(self):
        order = rank_agents_per_game({
            "a": [(1, 10.0, 9)],
            "b": [(1, 7.0, 9)],
        })
        assert order == [("a", 1), ("b", 2)]

    def test_fewer_timesteps_break_score_ties(self):
        order = rank_agents_per_game({
            "slow": [(1, 5.0, 30)],
            "fast": [(1, 5.0, 12)],
        })
        assert order == [("fast", 1), ("slow", 2)]

    def test_complete_tie_shares_position_and_skips(self):
        order = rank_agents_per_game({
            "a": [(1, 2.0, 4)],
            "b": [(1, 2.0, 4)],
            "c": [(0, 2.0, 4)],
        })
        assert order == [("a", 1), ("b", 1), ("c", 3)]

    def test_f1_table_totals(self):
        per_game = {
            "g1": {"a": [(1, 0, 1)], "b": [(0, 0, 1)]},
            "g2": {"a": [(0, 0, 1)], "b": [(1, 0, 1)]},
        }
        table = f1_table(per_game)
        assert table.totals == {"a": 25 + 18, "b": 25 + 18}
        assert table.per_game["g1"][0] == ("a", 1, 25)

    def test_totals_invariant_to_game_order(self):
        games_a = {"g1": {"a": [(1, 0, 1)], "b": [(0, 0, 1)]},
                   "g2": {"a": [(1, 1, 1)], "b": [(1, 2, 1)]}}
        games_b = dict(reversed(list(games_a.items())))
        assert f1_table(games_a).totals == f1_table(games_b).totals


class TestSummarize:
    def test_constant_sample(self):
        assert summarize([1, 1, 1, 1]) == SampleSummary(4, 1.0, 0.0)

    def test_two_point_sample(self):
        s = summarize([0.0, 1.0])
        assert s.mean == 0.5
        assert abs(s.std_error - 0.5) < 1e-12

    def test_single_value_defined(self):
        assert summarize([3.5]) == SampleSummary(1, 3.5, 0.0)

    def test_bernoulli_scale(self):
        rng = RngStream(1)
        values = [1.0 if rng.random() < 0.475 else 0.0 for _ in range(100)]
        s = summarize(values)
        assert 0.03 < s.std_error < 0.07  # ~0.05 on the proportion scale

    def test_empty_rejected(self):
        with pytest.raises(ValueError):
            summarize([])


def oracle_u(a, b) -> float:
    """Independent U definition: pairwise wins plus half-ties."""
    return sum(
        1.0 if x > y else 0.5 if x == y else 0.0
        for x in a for y in b
    )


def oracle_exact_p(a, b) -> float:
    """Independent enumeration over all pooled orderings (tie-free)."""
    pooled = sorted(a + b)
    n = len(a)
    u_obs = oracle_u(a, b)
    u_min = min(u_obs, len(a) * len(b) - u_obs)
    count = total = 0
    for idx in combinations(range(len(pooled)), n):
        side_a = [pooled[i] for i in idx]
        side_b = [pooled[i] for i in range(len(pooled)) if i not in set(idx)]
        u = oracle_u(side_a, side_b)
        total += 1
        if min(u, len(a) * len(b) - u) <= u_min + 1e-12:
            count += 1
    # two-sided: mass at least as extreme on either side
    return min(1.0, count / total)


class TestMannWhitney:
    def test_spec_example_exact(self):
        res = mann_whitney([1, 2, 3], [4, 5, 6])
        assert res.u == 0.0
        assert res.method is MwMethod.EXACT
        assert abs(res.p_value - 0.1) < 1e-12

    def test_identical_multisets_insignificant(self):
        res = mann_whitney([1, 2, 3, 4], [1, 2, 3, 4])
        assert res.p_value >= 0.99

    def test_degenerate_all_equal(self):
        res = mann_whitney([2, 2], [2, 2, 2])
        assert res.method is MwMethod.DEGENERATE
        assert res.p_value == 1.0

    def test_paper_scale_bernoulli(self):
        a = [1.0] * 29 + [0.0] * 71
        b = [1.0] * 98 + [0.0] * 2
        res = mann_whitney(a, b)
        assert res.p_value < 0.001

    def test_u_statistic_matches_pairwise_oracle(self):
        rng = RngStream(7)
        for n in range(1, 7):
            for m in range(1, 7):
                for _ in range(12):
                    values = list(range(1, 13))
                    picked = []
                    pool = values[:]
                    for _ in range(n + m):
                        picked.append(pool.pop(rng.randrange(len(pool))))
                    a, b = picked[:n], picked[n:]
                    res = mann_whitney(a, b)
                    assert res.u == oracle_u(a, b)
                    if res.method is MwMethod.EXACT:
                        assert abs(res.p_value - oracle_exact_p(a, b)) < 1e-9

    def test_u_complementarity(self):
        rng = RngStream(3)
        for _ in range(30):
            a = [rng.random() for _ in range(5)]
            b = [rng.random() for _ in range(7)]
            assert mann_whitney(a, b).u + mann_whitney(b, a).u == 35

    def test_symmetric_p(self):
        a = [1, 5, 9, 11]
        b = [2, 3, 4, 8]
        assert mann_whitney(a, b).p_value == mann_whitney(b, a).p_value

    @given(st.integers(0, 2**32))
    @settings(max_examples=30, deadline=None)
    def test_monotone_transform_invariance(self, seed):
        rng = RngStream(seed)
        a = [rng.randrange(1000) for _ in range(6)]
        b = [rng.randrange(1000) for _ in range(5)]
        base = mann_whitney(a, b)
        warped = mann_whitney([math.exp(x / 200) for x in a],
                              [math.exp(x / 200) for x in b])
        assert base.p_value == warped.p_value

    def test_exact_vs_normal_agreement_8x8(self):
        rng = RngStream(11)
        worst = 0.0
        for _ in range(60):
            values = list(range(1, 41))
            picked = []
            pool = values[:]
            for _ in range(16):
                picked.append(pool.pop(rng.randrange(len(pool))))
            a, b = picked[:8], picked[8:]
            exact = mann_whitney(a, b, method="exact").p_value
            approx = mann_whitney(a, b, method="normal").p_value
            worst = max(worst, abs(exact - approx))
        assert worst <= 0.02

    def test_exact_refuses_ties(self):
        with pytest.raises(ValueError):
            mann_whitney([1, 1], [2, 3], method="exact")


class TestPooledGap:
    def test_gap_and_se(self):
        gap, se = pooled_se_gap([1, 1, 1, 1], [0, 0, 0, 0])
        assert gap == 1.0 and se == 0.0
        gap, se = pooled_se_gap([0.0, 1.0], [0.0, 0.0])
        assert gap == 0.5
        assert abs(se - 0.5) < 1e-12
