"""Maze escape: push blocks out of the way and reach the exit door.

Deterministic sokoban-lite. Pushing a block into a hole consumes both,
turning the hole cell into plain floor. Holes block the avatar, blocks
cannot be pushed through walls, blocks, or other sprites. Binary
scoring; timeout is a loss.
"""

from __future__ import annotations

from ..engine import (
    ActionSet,
    DOWN,
    GameState,
    GameStatus,
    LEFT,
    MOVE_DELTAS,
    NIL,
    RIGHT,
    UP,
)
from .base import BaseRules, GameSpec, Nature, ParsedLevel, Scoring, TimeoutRule


class MazeEscapeRules(BaseRules):
    game_id = "maze_escape"
    stochastic = False
    action_set = ActionSet((NIL, LEFT, RIGHT, UP, DOWN))
    timeout_win = False
    legend = frozenset({"E", "B", "H"})
    spec = GameSpec(
        id=game_id,
        nature=Nature.DETERMINISTIC,
        action_set=action_set,
        scoring=Scoring.BINARY,
        timeout_rule=TimeoutRule.TIMEOUT_LOSS,
    )

    def build(self, state: GameState, parsed: ParsedLevel) -> None:
        for x, y, ch in parsed.cells():
            if ch == "B":
                state.add_sprite("block", x, y)
            elif ch == "H":
                state.add_sprite("hole", x, y)

    def step(self, state: GameState, action: str) -> None:
        delta = MOVE_DELTAS.get(action)
        if delta is not None:
            self._move_or_push(state, delta)
        if state.terrain[state.avatar.y][state.avatar.x] == "E":
            state.score += 1.0
            state.status = GameStatus.WIN

    def _move_or_push(self, state: GameState, delta: tuple[int, int]) -> None:
        dx, dy = delta
        state.avatar.orientation = delta
        nx, ny = state.avatar.x + dx, state.avatar.y + dy
        if state.terrain[ny][nx] == "#":
            return
        occupant = None
        for s in state.sprites:
            if s.x == nx and s.y == ny:
                occupant = s
                break
        if occupant is None:
            state.avatar.x, state.avatar.y = nx, ny
            return
        if occupant.kind == "hole":
            return
        # occupant is a block: try to push it one cell further
        bx, by = nx + dx, ny + dy
        if state.terrain[by][bx] == "#":
            return
        behind = None
        for s in state.sprites:
            if s.x == bx and s.y == by:
                behind = s
                break
        if behind is None:
            occupant.x, occupant.y = bx, by
        elif behind.kind == "hole":
            state.remove_sprites({occupant.id, behind.id})
        else:
            return
        state.avatar.x, state.avatar.y = nx, ny


RULES = MazeEscapeRules()
