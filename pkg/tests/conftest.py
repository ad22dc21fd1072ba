"""Shared fixtures: toy engine-protocol games and cutoff-free states.

The far-field level texts build root states where no 20-step simulation
can reach a terminal state (win distances and threat distances all
exceed the horizon), which pins down budget arithmetic exactly.
"""

from __future__ import annotations

import pytest

from gridplan import games
from gridplan.engine import (
    NIL,
    LEFT,
    RIGHT,
    ActionSet,
    Avatar,
    GameState,
    GameStatus,
    RngStream,
)


class TrapRules:
    """Two-choice trap under a two-tick deadline.

    The reward sits two steps LEFT (1 point and the win); the right arm
    never pays. A one-step lookahead sees nothing anywhere, so only
    planners that reason at depth 2 find the unique optimal opening:
    LEFT, LEFT. Everything else times out into a loss on tick 2.
    """

    game_id = "toy_trap"
    stochastic = False
    action_set = ActionSet((NIL, LEFT, RIGHT))
    timeout_win = False

    def step(self, state: GameState, action: str) -> None:
        if action == LEFT and not state.is_wall(state.avatar.x - 1, state.avatar.y):
            state.avatar.x -= 1
        elif action == RIGHT and not state.is_wall(state.avatar.x + 1, state.avatar.y):
            state.avatar.x += 1
        if state.avatar.x == state.meta["win_x"]:
            state.score += 1.0
            state.status = GameStatus.WIN


class LineRules:
    """Two-action walk (NIL, RIGHT): +1 per step right, win at the end.

    The progress reward makes fitness strictly increase with the number
    of RIGHT genes, so the all-RIGHT plan is the unique optimum and
    hill climbing has a slope to follow.
    """

    game_id = "toy_line"
    stochastic = False
    action_set = ActionSet((NIL, RIGHT))
    timeout_win = False

    def step(self, state: GameState, action: str) -> None:
        if action == RIGHT and not state.is_wall(state.avatar.x + 1, state.avatar.y):
            state.avatar.x += 1
            state.score += 1.0
        if state.avatar.x == state.meta["win_x"]:
            state.score += 10.0
            state.status = GameStatus.WIN


def _toy_state(rules, width: int, start_x: int, meta: dict, max_ticks: int = 50,
               seed: int = 0) -> GameState:
    terrain = ("#" * width, "#" + "." * (width - 2) + "#", "#" * width)
    return GameState(
        rules=rules,
        terrain=terrain,
        width=width,
        height=3,
        avatar=Avatar(start_x, 1),
        sprites=[],
        score=0.0,
        tick=0,
        max_ticks=max_ticks,
        status=GameStatus.ONGOING,
        rng=RngStream(seed),
        next_sprite_id=0,
        meta=meta,
    )


def make_trap_state(seed: int = 0) -> GameState:
    return _toy_state(TrapRules(), 13, 6, {"win_x": 4}, max_ticks=2, seed=seed)


def make_line_state(seed: int = 0) -> GameState:
    return _toy_state(LineRules(), 8, 2, {"win_x": 5}, seed=seed)


@pytest.fixture
def trap_state() -> GameState:
    return make_trap_state()


@pytest.fixture
def line_state() -> GameState:
    return make_line_state()


# -- cutoff-free root states --------------------------------------------------
# In each, winning needs more than 20 advances and losing is impossible
# before tick 21, so every 20-gene plan runs its full length.

def _grid(max_ticks: int, *interior: str) -> str:
    width = max(len(row) for row in interior) + 2
    rows = [f"#max_ticks={max_ticks}", "#" * width]
    for row in interior:
        rows.append("#" + row.ljust(width - 2, ".") + "#")
    rows.append("#" * width)
    return "\n".join(rows) + "\n"


FAR_LEVEL_TEXTS = {
    "corridor_race": None,  # bundled level 4 is the long corridor
    "maze_escape": _grid(
        200,
        "A" + "." * 36 + "E",
        "." * 38,
    ),
    "missile_defense": _grid(
        100,
        "M" + "." * 5 + "M" + "." * 21,
        *(["." * 28] * 12),
        "." * 27 + "A",
        "C.C" + "." * 25,
    ),
    "invaders": _grid(
        300,
        "a" * 12,
        *(["." * 12] * 24),
        "......A.....",
    ),
    "butterfly_catch": _grid(
        300,
        "A" + "." * 47,
        "." * 47 + "b",
        "c" + "." * 46 + "b",
    ),
    "zombie_survival": _grid(
        300,
        "z" + "." * 37,
        "." * 38,
        "." * 36 + "A.",
    ),
}


def far_state(game_id: str, seed: int) -> GameState:
    text = FAR_LEVEL_TEXTS[game_id]
    if text is None:
        return games.load_level(game_id, 4, seed)
    return games.state_from_text(game_id, text, seed, label="far")
